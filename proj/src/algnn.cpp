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

#include "ncasp/algnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ncasp/linalg.hpp"
#include "ncasp/rng.hpp"

namespace ncasp {

double apply_nonlinearity(Nonlinearity nl, double v) {
    switch (nl) {
        case Nonlinearity::identity: return v;
        case Nonlinearity::relu: return v > 0.0 ? v : 0.0;
        case Nonlinearity::abs_value: return std::abs(v);
        case Nonlinearity::tanh_act: return std::tanh(v);
    }
    return v;
}

double nonlinearity_slope(Nonlinearity nl, double v) {
    switch (nl) {
        case Nonlinearity::identity: return 1.0;
        case Nonlinearity::relu: return v > 0.0 ? 1.0 : 0.0;
        case Nonlinearity::abs_value: return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        case Nonlinearity::tanh_act: {
            double t = std::tanh(v);
            return 1.0 - t * t;
        }
    }
    return 1.0;
}

LayerSpec LayerSpec::dense(int num_generators, int max_degree, int in_features, int out_features,
                           Nonlinearity activation) {
    LayerSpec layer;
    layer.in_features = in_features;
    layer.out_features = out_features;
    layer.basis = enumerate_monomials(num_generators, max_degree);
    layer.coeffs.assign(static_cast<size_t>(out_features),
                        Matrix::Zero(static_cast<Eigen::Index>(layer.basis.size()), in_features));
    layer.activation = activation;
    return layer;
}

NcPolynomial LayerSpec::filter(int num_generators, int g, int f) const {
    NcPolynomial p(num_generators);
    const Matrix& c = coeffs[static_cast<size_t>(f)];
    for (size_t idx = 0; idx < basis.size(); ++idx)
        p.add_term(basis[idx], c(static_cast<Eigen::Index>(idx), g));
    return p;
}

bool NetworkSpec::one_feature_per_layer() const {
    for (const auto& l : layers)
        if (l.in_features != 1 || l.out_features != 1) return false;
    return true;
}

void NetworkSpec::validate() const {
    if (layers.empty()) throw std::invalid_argument("NetworkSpec: no layers");
    int features = layers.front().in_features;
    const int n = shifts.dim();
    for (const auto& l : layers) {
        if (l.in_features != features)
            throw std::invalid_argument("NetworkSpec: feature counts do not chain");
        features = l.out_features;
        if (l.coeffs.size() != static_cast<size_t>(l.out_features))
            throw std::invalid_argument("NetworkSpec: coefficient bank size mismatch");
        for (const auto& c : l.coeffs)
            if (c.rows() != static_cast<Eigen::Index>(l.basis.size()) || c.cols() != l.in_features)
                throw std::invalid_argument("NetworkSpec: coefficient tensor shape mismatch");
        if (l.pooling_mask.size() != 0 && l.pooling_mask.size() != n)
            throw std::invalid_argument("NetworkSpec: pooling mask length mismatch");
        for (const auto& w : l.basis)
            if (w.max_letter() >= shifts.count())
                throw std::invalid_argument("NetworkSpec: basis word letter out of range");
    }
    if (readout_w.size() != 0 && readout_w.cols() != n * features)
        throw std::invalid_argument("NetworkSpec: readout width mismatch");
}

namespace {

// W_w v = S_{w_1}(S_{w_2}(... (S_{w_k} v))) by iterated shifts, suffixes
// memoized per base vector; never materializes the word matrix
const Vector& word_applied(const Word& w, const ShiftSet& shifts, std::map<Word, Vector>& cache) {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    Word tail(std::vector<int>(w.letters().begin() + 1, w.letters().end()));
    const Vector& below = word_applied(tail, shifts, cache);
    return cache.emplace(w, shifts[w.letter(0)] * below).first->second;
}

// W_w^T v = S_{w_k}^T (... (S_{w_1}^T v)), prefixes memoized per base vector
const Vector& word_applied_transposed(const Word& w, const ShiftSet& shifts,
                                      std::map<Word, Vector>& cache) {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    Word head(std::vector<int>(w.letters().begin(), w.letters().end() - 1));
    const Vector& above = word_applied_transposed(head, shifts, cache);
    return cache.emplace(w, shifts[w.letter(w.degree() - 1)].transpose() * above).first->second;
}

// n x |words| matrix of word images of one base vector
Matrix word_image_bank(const std::vector<Word>& words, const ShiftSet& shifts, const Vector& base,
                       bool transposed) {
    std::map<Word, Vector> cache;
    cache.emplace(Word::unit(), base);
    Matrix out(base.size(), static_cast<Eigen::Index>(words.size()));
    for (size_t idx = 0; idx < words.size(); ++idx)
        out.col(static_cast<Eigen::Index>(idx)) =
            transposed ? word_applied_transposed(words[idx], shifts, cache)
                       : word_applied(words[idx], shifts, cache);
    return out;
}

Matrix masked(const Matrix& a, const Vector& mask) {
    if (mask.size() == 0) return a;
    return mask.asDiagonal() * a;
}

}  // namespace

Matrix layer_preactivation(const LayerSpec& layer, const ShiftSet& shifts, const Matrix& input) {
    const int n = shifts.dim();
    Matrix pre = Matrix::Zero(n, layer.out_features);
    for (int g = 0; g < layer.in_features; ++g) {
        Matrix images = word_image_bank(layer.basis, shifts, input.col(g), false);
        for (int f = 0; f < layer.out_features; ++f)
            pre.col(f) += images * layer.coeffs[static_cast<size_t>(f)].col(g);
    }
    return pre;
}

Matrix layer_activate(const LayerSpec& layer, const Matrix& preact) {
    Matrix act = preact.unaryExpr([&](double v) { return apply_nonlinearity(layer.activation, v); });
    return masked(act, layer.pooling_mask);
}

Vector readout(const NetworkSpec& net, const Matrix& final_activations) {
    if (net.readout_w.size() == 0)
        return Eigen::Map<const Vector>(final_activations.data(), final_activations.size());
    Eigen::Map<const Vector> flat(final_activations.data(), final_activations.size());
    return net.readout_w * flat + net.readout_b;
}

ForwardTrace forward(const NetworkSpec& net, const Matrix& input, const ShiftSet* shift_override) {
    net.validate();
    const ShiftSet& shifts = shift_override ? *shift_override : net.shifts;
    if (shift_override && shift_override->dim() != net.shifts.dim())
        throw std::invalid_argument("forward: override shifts dimension mismatch");
    const int n = shifts.dim();
    if (input.rows() != n || input.cols() != net.layers.front().in_features)
        throw std::invalid_argument("forward: input shape mismatch");

    ForwardTrace trace;
    Matrix x = input;
    for (const auto& layer : net.layers) {
        trace.layer_inputs.push_back(x);
        std::vector<Matrix> images(static_cast<size_t>(layer.in_features));
        for (int g = 0; g < layer.in_features; ++g)
            images[static_cast<size_t>(g)] = word_image_bank(layer.basis, shifts, x.col(g), false);
        Matrix pre = Matrix::Zero(n, layer.out_features);
        for (int f = 0; f < layer.out_features; ++f)
            for (int g = 0; g < layer.in_features; ++g)
                pre.col(f) += images[static_cast<size_t>(g)] * layer.coeffs[static_cast<size_t>(f)].col(g);
        Matrix act = layer_activate(layer, pre);

        trace.word_images.push_back(std::move(images));
        trace.preactivations.push_back(std::move(pre));
        trace.activations.push_back(act);
        x = std::move(act);
    }
    trace.output = readout(net, x);
    return trace;
}

void Gradients::scale(double s) {
    for (auto& layer : layer_coeffs)
        for (auto& c : layer) c *= s;
    if (readout_w.size() != 0) readout_w *= s;
    if (readout_b.size() != 0) readout_b *= s;
}

void Gradients::accumulate(const Gradients& other) {
    for (size_t l = 0; l < layer_coeffs.size(); ++l)
        for (size_t f = 0; f < layer_coeffs[l].size(); ++f) layer_coeffs[l][f] += other.layer_coeffs[l][f];
    if (readout_w.size() != 0) readout_w += other.readout_w;
    if (readout_b.size() != 0) readout_b += other.readout_b;
}

Gradients backward(const NetworkSpec& net, const ForwardTrace& trace, const Vector& output_grad) {
    const int n = net.shifts.dim();
    const int num_layers = static_cast<int>(net.layers.size());
    Gradients grads;
    grads.layer_coeffs.resize(static_cast<size_t>(num_layers));

    Matrix g_act;
    if (net.readout_w.size() != 0) {
        const Matrix& final_act = trace.activations.back();
        Eigen::Map<const Vector> flat(final_act.data(), final_act.size());
        grads.readout_w = output_grad * flat.transpose();
        grads.readout_b = output_grad;
        Vector g_flat = net.readout_w.transpose() * output_grad;
        g_act = Eigen::Map<const Matrix>(g_flat.data(), n, final_act.cols());
    } else {
        g_act = Eigen::Map<const Matrix>(output_grad.data(), n,
                                         net.layers.back().out_features);
    }

    for (int l = num_layers - 1; l >= 0; --l) {
        const auto& layer = net.layers[static_cast<size_t>(l)];
        const Matrix& pre = trace.preactivations[static_cast<size_t>(l)];
        Matrix g_pre = masked(g_act, layer.pooling_mask);
        for (Eigen::Index r = 0; r < g_pre.rows(); ++r)
            for (Eigen::Index c = 0; c < g_pre.cols(); ++c)
                g_pre(r, c) *= nonlinearity_slope(layer.activation, pre(r, c));

        auto& layer_grads = grads.layer_coeffs[static_cast<size_t>(l)];
        layer_grads.assign(static_cast<size_t>(layer.out_features),
                           Matrix::Zero(static_cast<Eigen::Index>(layer.basis.size()), layer.in_features));
        const auto& images = trace.word_images[static_cast<size_t>(l)];
        for (int f = 0; f < layer.out_features; ++f)
            for (int g = 0; g < layer.in_features; ++g)
                layer_grads[static_cast<size_t>(f)].col(g) =
                    images[static_cast<size_t>(g)].transpose() * g_pre.col(f);

        if (l > 0) {
            Matrix g_x = Matrix::Zero(n, layer.in_features);
            for (int f = 0; f < layer.out_features; ++f) {
                Matrix back_images = word_image_bank(layer.basis, net.shifts, g_pre.col(f), true);
                for (int g = 0; g < layer.in_features; ++g)
                    g_x.col(g) += back_images * layer.coeffs[static_cast<size_t>(f)].col(g);
            }
            g_act = std::move(g_x);
        }
    }
    return grads;
}

double loss_value(Loss loss, const Vector& output, const Vector& target) {
    switch (loss) {
        case Loss::squared:
            return 0.5 * (output - target).squaredNorm();
        case Loss::smooth_l1: {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < output.size(); ++i) {
                double d = std::abs(output(i) - target(i));
                acc += d < 1.0 ? 0.5 * d * d : d - 0.5;
            }
            return acc;
        }
        case Loss::cross_entropy: {
            double mx = output.maxCoeff();
            double lse = mx + std::log((output.array() - mx).exp().sum());
            return lse - output.dot(target);
        }
    }
    return 0.0;
}

Vector loss_gradient(Loss loss, const Vector& output, const Vector& target) {
    switch (loss) {
        case Loss::squared:
            return output - target;
        case Loss::smooth_l1: {
            Vector g(output.size());
            for (Eigen::Index i = 0; i < output.size(); ++i) {
                double d = output(i) - target(i);
                g(i) = std::abs(d) < 1.0 ? d : (d > 0.0 ? 1.0 : -1.0);
            }
            return g;
        }
        case Loss::cross_entropy: {
            double mx = output.maxCoeff();
            Vector soft = (output.array() - mx).exp();
            soft /= soft.sum();
            return soft - target;
        }
    }
    return Vector::Zero(output.size());
}

namespace {

// Vectorized right-multiplied derivative pieces of every basis word at the
// frozen sample tuples: the IL penalty of a filter with coefficients c is
// the max over (tuple, generator) of || sum_w c_w V_w ||_2.
struct IlPenaltyContext {
    // pieces[sample][generator][word] is an r^2 x r^2 matrix
    std::vector<std::vector<std::vector<Matrix>>> pieces;

    static IlPenaltyContext build(const std::vector<Word>& basis, int num_generators,
                                  const std::vector<std::vector<Matrix>>& tuples) {
        IlPenaltyContext ctx;
        for (const auto& tuple : tuples) {
            ShiftSet lam(tuple);
            std::vector<std::vector<Matrix>> per_gen;
            for (int i = 0; i < num_generators; ++i) {
                std::vector<Matrix> per_word;
                const int r = lam.dim();
                for (const auto& w : basis) {
                    Matrix v = Matrix::Zero(r * r, r * r);
                    DerivativeOperator op = word_derivative(w, i, lam);
                    for (const auto& [f, h] : op.terms())
                        v += kronecker(Matrix(lam[i] * h).transpose(), f);
                    per_word.push_back(std::move(v));
                }
                per_gen.push_back(std::move(per_word));
            }
            ctx.pieces.push_back(std::move(per_gen));
        }
        return ctx;
    }

    // returns the penalty and accumulates its subgradient (first-attaining
    // sample tie-break)
    double penalty_and_grad(const Vector& coeffs, Vector* grad) const {
        double best = 0.0;
        const Matrix* best_mats = nullptr;
        Matrix best_sum;
        for (const auto& per_gen : pieces)
            for (const auto& per_word : per_gen) {
                Matrix sum = Matrix::Zero(per_word[0].rows(), per_word[0].cols());
                for (size_t w = 0; w < per_word.size(); ++w)
                    sum += coeffs(static_cast<Eigen::Index>(w)) * per_word[w];
                double nrm = operator_norm(sum);
                if (best_mats == nullptr || nrm > best) {
                    best = nrm;
                    best_mats = per_word.data();
                    best_sum = std::move(sum);
                }
            }
        if (grad != nullptr && best_mats != nullptr && best > 0.0) {
            Eigen::JacobiSVD<Matrix> svd(best_sum, Eigen::ComputeThinU | Eigen::ComputeThinV);
            Vector u = svd.matrixU().col(0);
            Vector v = svd.matrixV().col(0);
            for (Eigen::Index w = 0; w < grad->size(); ++w)
                (*grad)(w) += u.dot(best_mats[w] * v);
        }
        return best;
    }
};

}  // namespace

TrainHistory train(NetworkSpec& net, const Dataset& data, const TrainOptions& opts) {
    net.validate();
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (data.targets.cols() != data.size())
        throw std::invalid_argument("train: target count mismatch");

    TrainHistory history;
    Gradients velocity;
    bool velocity_ready = false;

    std::vector<int> order(static_cast<size_t>(data.size()));
    std::iota(order.begin(), order.end(), 0);
    const int batch = opts.batch > 0 ? opts.batch : data.size();

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        // frozen per-epoch sample set for the IL penalty
        std::vector<IlPenaltyContext> il_ctx;
        if (opts.il_lambda > 0.0) {
            LipschitzOptions lo = opts.il_estimate;
            lo.seed = seed_mix(opts.il_estimate.seed, static_cast<std::uint64_t>(epoch));
            auto tuples = lipschitz_sample_tuples(net.shifts.count(), lo);
            for (const auto& anchor : opts.il_estimate.anchors) tuples.push_back(anchor);
            for (const auto& layer : net.layers)
                il_ctx.push_back(IlPenaltyContext::build(layer.basis, net.shifts.count(), tuples));
        }

        std::mt19937_64 g(seed_mix(opts.seed, 0xe90c + static_cast<std::uint64_t>(epoch)));
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<size_t>(g() % i)]);

        double epoch_loss = 0.0;
        double epoch_penalty = 0.0;
        int batches = 0;
        for (int start = 0; start < data.size(); start += batch) {
            ++batches;
            const int count = std::min(batch, data.size() - start);
            Gradients batch_grads;
            bool grads_ready = false;
            for (int b = 0; b < count; ++b) {
                int idx = order[static_cast<size_t>(start + b)];
                ForwardTrace trace = forward(net, data.inputs[static_cast<size_t>(idx)]);
                Vector target = data.targets.col(idx);
                epoch_loss += loss_value(opts.loss, trace.output, target);
                Gradients sample = backward(net, trace, loss_gradient(opts.loss, trace.output, target));
                if (!grads_ready) {
                    batch_grads = std::move(sample);
                    grads_ready = true;
                } else {
                    batch_grads.accumulate(sample);
                }
            }
            batch_grads.scale(1.0 / count);

            if (opts.weight_decay > 0.0) {
                for (size_t l = 0; l < net.layers.size(); ++l)
                    for (size_t f = 0; f < net.layers[l].coeffs.size(); ++f)
                        batch_grads.layer_coeffs[l][f] +=
                            opts.weight_decay * net.layers[l].coeffs[f];
            }

            if (opts.il_lambda > 0.0) {
                for (size_t l = 0; l < net.layers.size(); ++l) {
                    auto& layer = net.layers[l];
                    for (int f = 0; f < layer.out_features; ++f)
                        for (int gi = 0; gi < layer.in_features; ++gi) {
                            Vector c = layer.coeffs[static_cast<size_t>(f)].col(gi);
                            Vector pgrad = Vector::Zero(c.size());
                            double pen = il_ctx[l].penalty_and_grad(c, &pgrad);
                            epoch_penalty += pen;
                            batch_grads.layer_coeffs[l][static_cast<size_t>(f)].col(gi) +=
                                opts.il_lambda * pgrad;
                        }
                }
            }

            if (!opts.train_readout && batch_grads.readout_w.size() != 0) {
                batch_grads.readout_w.setZero();
                batch_grads.readout_b.setZero();
            }

            if (opts.momentum > 0.0) {
                if (!velocity_ready) {
                    velocity = batch_grads;
                    velocity_ready = true;
                } else {
                    velocity.scale(opts.momentum);
                    velocity.accumulate(batch_grads);
                }
            }
            const Gradients& step = opts.momentum > 0.0 ? velocity : batch_grads;
            for (size_t l = 0; l < net.layers.size(); ++l)
                for (size_t f = 0; f < net.layers[l].coeffs.size(); ++f)
                    net.layers[l].coeffs[f] -= opts.learning_rate * step.layer_coeffs[l][f];
            if (net.readout_w.size() != 0 && opts.train_readout) {
                net.readout_w -= opts.learning_rate * step.readout_w;
                net.readout_b -= opts.learning_rate * step.readout_b;
            }
        }
        epoch_loss /= data.size();
        if (!std::isfinite(epoch_loss)) throw std::runtime_error("train: loss diverged");
        history.epoch_loss.push_back(epoch_loss);
        history.epoch_il_penalty.push_back(batches > 0 ? epoch_penalty / batches : 0.0);
    }
    return history;
}

NetworkStabilityReport network_stability_report(const NetworkSpec& net, const Matrix& input,
                                                const Perturbation& pert,
                                                const LipschitzOptions& lip_opts) {
    net.validate();
    if (pert.dim() != net.shifts.dim() || pert.count() != net.shifts.count())
        throw std::invalid_argument("network_stability_report: perturbation dimension mismatch");

    NetworkStabilityReport rep;
    ShiftSet perturbed = perturb(net.shifts, pert);
    ForwardTrace base = forward(net, input);
    ForwardTrace moved = forward(net, input, &perturbed);
    for (size_t l = 0; l < net.layers.size(); ++l)
        rep.layer_diffs.push_back((base.activations[l] - moved.activations[l]).norm());
    rep.conv_output_diff = rep.layer_diffs.back();
    rep.output_diff = (base.output - moved.output).norm();

    rep.bound_applicable = net.one_feature_per_layer();
    if (!rep.bound_applicable) return rep;

    const int m = net.shifts.count();
    const double delta = delta_factor(pert);
    double sup_t = 0.0, sup_dt = 0.0;
    for (int i = 0; i < m; ++i) {
        sup_t = std::max(sup_t, operator_norm(pert.shift_change(i, net.shifts[i])));
        sup_dt = std::max(sup_dt, operator_norm(pert.frechet_derivative(i)));
    }

    const int num_layers = static_cast<int>(net.layers.size());
    for (int l = 0; l < num_layers; ++l) {
        NcPolynomial p = net.layers[static_cast<size_t>(l)].filter(m, 0, 0);
        LipschitzEstimate est = estimate_lipschitz(p, lip_opts);
        rep.l0_l.push_back(est.l0_hat);
        rep.l1_l.push_back(est.l1_hat);
        rep.b_l.push_back(operator_norm(eval(p, net.shifts)));
        rep.c_l.push_back(1.0);  // every offered nonlinearity is 1-Lipschitz
        rep.delta_l.push_back(delta * m * (est.l0_hat * sup_t + est.l1_hat * sup_dt));
    }
    double bound = 0.0;
    for (int l = 0; l < num_layers; ++l) {
        double factor = rep.delta_l[static_cast<size_t>(l)];
        for (int r = l; r < num_layers; ++r) factor *= rep.c_l[static_cast<size_t>(r)];
        for (int r = l + 1; r < num_layers; ++r) factor *= rep.b_l[static_cast<size_t>(r)];
        for (int r = 0; r < l; ++r)
            factor *= rep.c_l[static_cast<size_t>(r)] * rep.b_l[static_cast<size_t>(r)];
        bound += factor;
    }
    rep.theorem5_bound = bound * input.norm();
    rep.bound_over_measured =
        rep.conv_output_diff > 0.0 ? rep.theorem5_bound / rep.conv_output_diff : 0.0;
    return rep;
}

namespace {

void write_matrix(std::ofstream& out, const Matrix& m) {
    char buf[40];
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << (c + 1 < m.cols() ? " " : "");
        }
        out << '\n';
    }
}

Matrix read_matrix(std::ifstream& in) {
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw std::runtime_error("load_network: truncated matrix header");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            if (!(in >> m(r, c))) throw std::runtime_error("load_network: truncated matrix body");
    return m;
}

const char* nonlinearity_name(Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::identity: return "identity";
        case Nonlinearity::relu: return "relu";
        case Nonlinearity::abs_value: return "abs";
        case Nonlinearity::tanh_act: return "tanh";
    }
    return "identity";
}

Nonlinearity nonlinearity_from_name(const std::string& name) {
    if (name == "identity") return Nonlinearity::identity;
    if (name == "relu") return Nonlinearity::relu;
    if (name == "abs") return Nonlinearity::abs_value;
    if (name == "tanh") return Nonlinearity::tanh_act;
    throw std::runtime_error("load_network: unknown nonlinearity " + name);
}

}  // namespace

Vector degree_centrality_mask(const ShiftSet& shifts, int keep) {
    const int n = shifts.dim();
    if (keep < 0 || keep > n) throw std::invalid_argument("degree_centrality_mask: keep out of range");
    Vector degree = shifts[0].cwiseAbs().rowwise().sum();
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (degree(a) != degree(b)) return degree(a) > degree(b);
        return a < b;
    });
    Vector mask = Vector::Zero(n);
    for (int i = 0; i < keep; ++i) mask(order[static_cast<size_t>(i)]) = 1.0;
    return mask;
}

void save_network(const NetworkSpec& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_network: cannot open " + path);
    out << "ncasp-network v1\n";
    out << "shifts " << net.shifts.count() << '\n';
    for (int i = 0; i < net.shifts.count(); ++i) write_matrix(out, net.shifts[i]);
    out << "layers " << net.layers.size() << '\n';
    for (const auto& layer : net.layers) {
        out << "layer " << layer.in_features << ' ' << layer.out_features << ' '
            << nonlinearity_name(layer.activation) << ' ' << layer.basis.size() << '\n';
        for (size_t i = 0; i < layer.basis.size(); ++i)
            out << layer.basis[i].to_string() << (i + 1 < layer.basis.size() ? " " : "\n");
        out << "mask " << layer.pooling_mask.size() << '\n';
        if (layer.pooling_mask.size() != 0) {
            for (Eigen::Index i = 0; i < layer.pooling_mask.size(); ++i)
                out << layer.pooling_mask(i) << (i + 1 < layer.pooling_mask.size() ? " " : "\n");
        }
        for (const auto& c : layer.coeffs) write_matrix(out, c);
    }
    out << "readout " << (net.readout_w.size() != 0 ? 1 : 0) << '\n';
    if (net.readout_w.size() != 0) {
        write_matrix(out, net.readout_w);
        write_matrix(out, Matrix(net.readout_b));
    }
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_network: cannot open " + path);
    std::string tag, version;
    in >> tag >> version;
    if (tag != "ncasp-network" || version != "v1")
        throw std::runtime_error("load_network: unknown checkpoint format");
    NetworkSpec net;
    int num_shifts = 0;
    in >> tag >> num_shifts;
    if (tag != "shifts") throw std::runtime_error("load_network: missing shifts");
    std::vector<Matrix> shift_mats;
    for (int i = 0; i < num_shifts; ++i) shift_mats.push_back(read_matrix(in));
    net.shifts = ShiftSet(std::move(shift_mats));
    size_t num_layers = 0;
    in >> tag >> num_layers;
    if (tag != "layers") throw std::runtime_error("load_network: missing layers");
    for (size_t l = 0; l < num_layers; ++l) {
        LayerSpec layer;
        std::string act;
        size_t basis_size = 0;
        in >> tag >> layer.in_features >> layer.out_features >> act >> basis_size;
        if (tag != "layer") throw std::runtime_error("load_network: missing layer header");
        layer.activation = nonlinearity_from_name(act);
        for (size_t i = 0; i < basis_size; ++i) {
            std::string word_text;
            in >> word_text;
            layer.basis.push_back(word_from_string(word_text));
        }
        Eigen::Index mask_size = 0;
        in >> tag >> mask_size;
        if (tag != "mask") throw std::runtime_error("load_network: missing mask");
        layer.pooling_mask = Vector(mask_size);
        for (Eigen::Index i = 0; i < mask_size; ++i) in >> layer.pooling_mask(i);
        for (int f = 0; f < layer.out_features; ++f) layer.coeffs.push_back(read_matrix(in));
        net.layers.push_back(std::move(layer));
    }
    int has_readout = 0;
    in >> tag >> has_readout;
    if (tag != "readout") throw std::runtime_error("load_network: missing readout");
    if (has_readout != 0) {
        net.readout_w = read_matrix(in);
        net.readout_b = Vector(read_matrix(in));
    }
    net.validate();
    return net;
}

}  // namespace ncasp
