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

// Experiment runner: spectral verification, filter and network stability
// sweeps, the recommendation and quaternion experiments, and checkpoint
// train/eval. Every subcommand is config-driven; flags override the config's
// top-level fields. Exit codes: 0 all checks passed, 1 a check failed,
// 2 invalid configuration.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <thread>

#include "ncasp/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::string data_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    int top_movies = 0;
    int knn = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "JSON experiment configuration");
    cmd->add_option("--out", flags.out, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "random seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "worker threads, 0 = all cores");
    cmd->add_option("--data-dir", flags.data_dir, "MovieLens directory (recsys only)");
    cmd->add_option("--top-movies", flags.top_movies, "most-rated movie count (recsys only)");
    cmd->add_option("--knn", flags.knn, "kept edges per node (recsys only)");
}

int run_kind(const std::string& default_kind, const CommonFlags& flags,
             const std::vector<std::string>& allowed_kinds) {
    ncasp::ExperimentConfig cfg;
    if (!flags.config.empty()) {
        cfg = ncasp::load_experiment_config(flags.config);
        if (std::find(allowed_kinds.begin(), allowed_kinds.end(), cfg.kind) == allowed_kinds.end())
            throw std::invalid_argument("config: kind '" + cfg.kind +
                                        "' does not match this subcommand");
    } else {
        nlohmann::json j;
        j["kind"] = default_kind;
        cfg = ncasp::parse_experiment_config(j);
    }
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.threads >= 0)
        cfg.threads = flags.threads == 0
                          ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                          : flags.threads;
    if (!flags.data_dir.empty() || flags.top_movies > 0 || flags.knn > 0) {
        if (cfg.kind != "multigraph-recsys")
            throw std::invalid_argument(
                "--data-dir/--top-movies/--knn only apply to the recsys subcommand");
        if (!flags.data_dir.empty()) cfg.params["data_dir"] = flags.data_dir;
        if (flags.top_movies > 0) cfg.params["top_movies"] = flags.top_movies;
        if (flags.knn > 0) cfg.params["knn"] = flags.knn;
    }
    return ncasp::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-commutative algebraic signal processing experiments"};
    app.require_subcommand(1);

    CommonFlags verify_flags, stability_flags, recsys_flags, quaternion_flags, train_flags,
        eval_flags;

    auto* verify = app.add_subcommand("verify", "spectral decomposition and filter theorem checks");
    add_common(verify, verify_flags);
    auto* stability =
        app.add_subcommand("stability", "filter or network stability sweeps (epsilon grids)");
    add_common(stability, stability_flags);
    auto* recsys = app.add_subcommand("recsys", "multigraph recommendation stability experiment");
    add_common(recsys, recsys_flags);
    auto* quaternion =
        app.add_subcommand("quaternion", "quaternion network perturbation experiment");
    add_common(quaternion, quaternion_flags);
    auto* train_cmd = app.add_subcommand("train", "train a network and write a checkpoint");
    add_common(train_cmd, train_flags);
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on the fixture split");
    add_common(eval_cmd, eval_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_kind("spectral-verify", verify_flags, {"spectral-verify"});
        if (stability->parsed())
            return run_kind("filter-stability", stability_flags,
                            {"filter-stability", "algnn-stability"});
        if (recsys->parsed())
            return run_kind("multigraph-recsys", recsys_flags, {"multigraph-recsys"});
        if (quaternion->parsed())
            return run_kind("quaternion-perturb", quaternion_flags, {"quaternion-perturb"});
        if (train_cmd->parsed()) return run_kind("train", train_flags, {"train"});
        if (eval_cmd->parsed()) return run_kind("eval", eval_flags, {"eval"});
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
