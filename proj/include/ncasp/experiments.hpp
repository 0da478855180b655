/*
   Copyright 2026 The ncasp authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncasp/algnn.hpp"
#include "ncasp/data.hpp"
#include "ncasp/multigraph.hpp"
#include "ncasp/quaternion.hpp"

namespace ncasp {

/// The 6-node, two-layer example multigraph used by the stability fixtures.
Multigraph example_multigraph6();

/// A resolved experiment description. `params` carries the kind-specific
/// block after validation; unknown keys are rejected at parse time.
struct ExperimentConfig {
    std::string kind;
    nlohmann::json params;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 1;
};

/// Validates the top-level schema and the kind-specific block, filling
/// defaults. Throws std::invalid_argument on unknown keys or bad values.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

/// Runs one experiment: writes manifest.json, the per-kind CSV artifacts and
/// a pass/fail summary into out_dir. Returns 0 when every check passes and 1
/// otherwise. Invalid configurations throw std::invalid_argument.
int run_experiment(const ExperimentConfig& cfg);

// ---- direct entry points used by the CLI subcommands and the tests ----

struct RecsysCell {
    std::string model;
    double ratio = 0.0;
    int seed = 0;
    double rmse_base = 0.0;
    double rmse_perturbed = 0.0;
    double rmse_diff = 0.0;
    double conv_diff = 0.0;
};

struct RecsysParams {
    int n_movies = 40;
    int n_users = 220;
    double noise = 0.25;
    int knn = 8;
    int features = 64;
    int degree = 2;
    int epochs = 40;
    double learning_rate = 0.02;
    double il_lambda = 0.05;
    int il_samples = 16;
    double il_radius = 1.0;
    int il_block = 1;
    double base_ratio = 0.9;
    std::vector<double> ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int num_seeds = 5;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string data_dir;  // when set, MovieLens data replaces the synthetic fixture
    int top_movies = 200;
    NegativeCorrelation pearson_negative = NegativeCorrelation::clip;
};

/// Trains MultiFilter / MultiGNN / MultiGNN-IL on the base split and
/// evaluates them under multigraphs rebuilt from sub-sampled training sets.
std::vector<RecsysCell> recsys_experiment(const RecsysParams& params);

struct QuaternionPerturbRow {
    std::string mode;  // "additive" or "relative"
    double epsilon = 0.0;
    double first_conv_diff = 0.0;
    double last_conv_diff = 0.0;
    double accuracy = 0.0;
};

struct QuaternionPerturbParams {
    std::vector<double> epsilons_additive = {0.0, 0.005, 0.01, 0.05, 0.1, 0.5};
    std::vector<double> epsilons_relative = {0.0, 0.05, 0.1, 0.5, 1.0, 5.0};
    int num_seeds = 10;
    int signal_length = 32;
    int taps = 4;
    int train_samples = 640;
    int test_samples = 160;
    double noise = 0.1;
    int epochs = 80;
    double learning_rate = 0.08;
    double momentum = 0.5;
    double weight_decay = 0.02;
    int batch = 32;
    double first_layer_scale = 0.35;  // taps renormalized here after training
    std::uint64_t seed = 1;
    int threads = 1;
};

struct QuaternionPerturbResult {
    std::vector<QuaternionPerturbRow> rows;
    double unperturbed_accuracy = 0.0;
};

/// Desk-scale analog of the quaternion perturbation table: trains a two-layer
/// quaternion network on a synthetic 4-class task, then perturbs the first
/// layer's real-channel operator additively or relatively and reports layer
/// output differences and test accuracy, averaged over noise seeds.
QuaternionPerturbResult quaternion_perturb_experiment(const QuaternionPerturbParams& params);

/// Synthetic quaternion classification set: class c is a phase-locked
/// sinusoid at frequency c+1 across the four channels plus Gaussian noise.
Dataset quaternion_class_dataset(int samples, int signal_length, double noise,
                                 std::uint64_t seed);

}  // namespace ncasp
