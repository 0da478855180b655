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

#include "ncasp/frechet.hpp"
#include "ncasp/perturbation.hpp"
#include "ncasp/shift_set.hpp"

namespace ncasp {

/// Pointwise maps used between layers. All have Lipschitz constant 1 and fix
/// zero, so the layer Lipschitz bookkeeping stays trivial.
enum class Nonlinearity { identity, relu, abs_value, tanh_act };

double apply_nonlinearity(Nonlinearity nl, double v);
double nonlinearity_slope(Nonlinearity nl, double v);  // subgradient at 0 taken as 0

/// One layer of an algebraic neural network: a bank of polynomial filters
/// over a word basis, a pointwise nonlinearity, and a zeroing pooling mask.
struct LayerSpec {
    int in_features = 1;
    int out_features = 1;
    std::vector<Word> basis;      // filters are coefficient vectors over these words
    std::vector<Matrix> coeffs;   // per out feature: basis.size() x in_features
    Nonlinearity activation = Nonlinearity::relu;
    Vector pooling_mask;          // 0/1 per node; empty keeps every node

    /// Zero-initialized layer over the full monomial basis of degree <= K.
    static LayerSpec dense(int num_generators, int max_degree, int in_features, int out_features,
                           Nonlinearity activation);

    /// The filter routing input feature g to output feature f, as a
    /// polynomial.
    NcPolynomial filter(int num_generators, int g, int f) const;
};

/// A layered network sharing one shift tuple across layers, with an affine
/// readout on the flattened final activations.
struct NetworkSpec {
    ShiftSet shifts;
    std::vector<LayerSpec> layers;
    Matrix readout_w;  // out_dim x (n * F_L)
    Vector readout_b;

    int signal_dim() const { return shifts.dim(); }
    bool one_feature_per_layer() const;
    void validate() const;
};

struct ForwardTrace {
    std::vector<Matrix> layer_inputs;    // x_{l-1}, n x F_{l-1}
    std::vector<Matrix> preactivations;  // filter-bank outputs before sigma
    std::vector<Matrix> activations;     // after nonlinearity and mask
    // word images per layer and input feature, n x |basis|; kept for backprop
    std::vector<std::vector<Matrix>> word_images;
    Vector output;

    const Matrix& final_activations() const { return activations.back(); }
};

/// Runs the network on an n x F0 feature matrix. With `shift_override` the
/// same coefficients are evaluated on different shift operators (used by the
/// stability reports).
ForwardTrace forward(const NetworkSpec& net, const Matrix& input,
                     const ShiftSet* shift_override = nullptr);

/// The filter-bank output of one layer before the nonlinearity.
Matrix layer_preactivation(const LayerSpec& layer, const ShiftSet& shifts, const Matrix& input);
/// Nonlinearity plus pooling mask.
Matrix layer_activate(const LayerSpec& layer, const Matrix& preact);
/// Readout on flattened final activations (identity when no readout is set).
Vector readout(const NetworkSpec& net, const Matrix& final_activations);

struct Gradients {
    std::vector<std::vector<Matrix>> layer_coeffs;  // mirrors LayerSpec::coeffs
    Matrix readout_w;
    Vector readout_b;

    void scale(double s);
    void accumulate(const Gradients& other);
};

/// Exact reverse-mode gradients of a scalar loss with respect to every filter
/// coefficient and readout parameter, given d(loss)/d(output).
Gradients backward(const NetworkSpec& net, const ForwardTrace& trace, const Vector& output_grad);

enum class Loss { squared, smooth_l1, cross_entropy };

double loss_value(Loss loss, const Vector& output, const Vector& target);
Vector loss_gradient(Loss loss, const Vector& output, const Vector& target);

struct Dataset {
    std::vector<Matrix> inputs;  // each n x F0
    Matrix targets;              // out_dim x num_samples (one-hot for classification)

    int size() const { return static_cast<int>(inputs.size()); }
};

struct TrainOptions {
    double learning_rate = 1e-2;
    int epochs = 40;
    int batch = 0;  // 0 = full batch
    double momentum = 0.0;
    Loss loss = Loss::squared;
    double il_lambda = 0.0;            // weight of the integral-Lipschitz penalty
    LipschitzOptions il_estimate;      // sampling domain for the penalty
    double weight_decay = 0.0;         // L2 on filter coefficients, not the readout
    std::uint64_t seed = 0;
    bool train_readout = true;
};

struct TrainHistory {
    std::vector<double> epoch_loss;       // task loss averaged over samples
    std::vector<double> epoch_il_penalty; // summed L1_hat over filters
};

/// Plain gradient descent with optional momentum. The integral-Lipschitz
/// penalty uses a sample set frozen per epoch and differentiates through the
/// first max-attaining sample. Aborts if the loss turns non-finite.
TrainHistory train(NetworkSpec& net, const Dataset& data, const TrainOptions& opts);

struct NetworkStabilityReport {
    std::vector<double> layer_diffs;  // ||x_l - x~_l||_F per layer
    double conv_output_diff = 0.0;    // final activations
    double output_diff = 0.0;         // after readout
    double theorem5_bound = 0.0;      // assembled layered bound; 0 when not applicable
    bool bound_applicable = false;    // one feature per layer required
    std::vector<double> delta_l, b_l, c_l, l0_l, l1_l;
    double bound_over_measured = 0.0;
};

/// Measures activations under S versus the perturbed shifts and assembles
/// the layered stability bound from per-layer Lipschitz estimates, measured
/// filter norm caps B_l and C_l = 1 nonlinearities.
NetworkStabilityReport network_stability_report(const NetworkSpec& net, const Matrix& input,
                                                const Perturbation& pert,
                                                const LipschitzOptions& lip_opts);

/// Zeroing-pooling mask keeping the `keep` nodes with the highest degree
/// (absolute row sums) on the first shift layer; ties break toward lower
/// node indices.
Vector degree_centrality_mask(const ShiftSet& shifts, int keep);

void save_network(const NetworkSpec& net, const std::string& path);
NetworkSpec load_network(const std::string& path);

}  // namespace ncasp
