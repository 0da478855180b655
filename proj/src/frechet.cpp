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

#include "ncasp/frechet.hpp"

#include <cmath>
#include <stdexcept>

#include "ncasp/linalg.hpp"
#include "ncasp/rng.hpp"

namespace ncasp {

void DerivativeOperator::add_term(Matrix prefix, Matrix suffix, double weight) {
    if (weight != 1.0) prefix *= weight;
    terms_.emplace_back(std::move(prefix), std::move(suffix));
}

Matrix DerivativeOperator::apply(const Matrix& xi) const {
    if (xi.rows() != dim_ || xi.cols() != dim_)
        throw std::invalid_argument("DerivativeOperator::apply: direction dimension mismatch");
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& [f, h] : terms_) out += f * xi * h;
    return out;
}

Matrix DerivativeOperator::vectorized() const {
    // vec(F xi H) = (H^T (x) F) vec(xi)
    Matrix out = Matrix::Zero(dim_ * dim_, dim_ * dim_);
    for (const auto& [f, h] : terms_) out += kronecker(h.transpose(), f);
    return out;
}

DerivativeOperator word_derivative(const Word& w, int generator, const ShiftSet& shifts) {
    if (generator < 0 || generator >= shifts.count())
        throw std::invalid_argument("word_derivative: generator index out of range");
    const int n = shifts.dim();
    DerivativeOperator op(n, generator);
    const auto& letters = w.letters();
    for (size_t pos = 0; pos < letters.size(); ++pos) {
        if (letters[pos] != generator) continue;
        Matrix prefix = Matrix::Identity(n, n);
        for (size_t t = 0; t < pos; ++t) prefix = prefix * shifts[letters[t]];
        Matrix suffix = Matrix::Identity(n, n);
        for (size_t t = pos + 1; t < letters.size(); ++t) suffix = suffix * shifts[letters[t]];
        op.add_term(std::move(prefix), std::move(suffix));
    }
    return op;
}

Matrix frechet_apply(const NcPolynomial& p, const ShiftSet& shifts, int generator, const Matrix& xi) {
    if (p.num_generators() != shifts.count())
        throw std::invalid_argument("frechet_apply: generator count mismatch");
    if (xi.rows() != shifts.dim() || xi.cols() != shifts.dim())
        throw std::invalid_argument("frechet_apply: direction dimension mismatch");
    const int n = shifts.dim();
    Matrix out = Matrix::Zero(n, n);
    for (const auto& [w, c] : p.terms()) {
        if (w.is_unit()) continue;
        out += c * word_derivative(w, generator, shifts).apply(xi);
    }
    return out;
}

Matrix frechet_vectorized(const NcPolynomial& p, const ShiftSet& shifts, int generator,
                          bool right_multiply, int dim_cap) {
    if (p.num_generators() != shifts.count())
        throw std::invalid_argument("frechet_vectorized: generator count mismatch");
    const int n = shifts.dim();
    if (n * n > dim_cap)
        throw std::invalid_argument("frechet_vectorized: vectorized dimension exceeds cap");
    Matrix out = Matrix::Zero(n * n, n * n);
    const Matrix& s = shifts[generator];
    for (const auto& [w, c] : p.terms()) {
        if (w.is_unit()) continue;
        DerivativeOperator op = word_derivative(w, generator, shifts);
        for (const auto& [f, h] : op.terms()) {
            // right_multiply realizes xi -> D{xi S_i}: the suffix becomes S_i h.
            Matrix suffix = right_multiply ? Matrix(s * h) : h;
            out += c * kronecker(suffix.transpose(), f);
        }
    }
    return out;
}

double frechet_operator_norm(const NcPolynomial& p, const ShiftSet& shifts, int generator,
                             bool right_multiply) {
    const int n = shifts.dim();
    if (n <= 64) return operator_norm(frechet_vectorized(p, shifts, generator, right_multiply));

    // matrix-free: power iteration through the product-rule form
    std::vector<std::pair<Matrix, Matrix>> terms;
    const Matrix& s = shifts[generator];
    for (const auto& [w, c] : p.terms()) {
        if (w.is_unit()) continue;
        DerivativeOperator op = word_derivative(w, generator, shifts);
        for (const auto& [f, h] : op.terms())
            terms.emplace_back(c * f, right_multiply ? Matrix(s * h) : h);
    }
    auto apply = [&](const Vector& v) {
        Matrix xi = Eigen::Map<const Matrix>(v.data(), n, n);
        Matrix out = Matrix::Zero(n, n);
        for (const auto& [f, h] : terms) out += f * xi * h;
        return Vector(Eigen::Map<const Vector>(out.data(), n * n));
    };
    auto apply_adjoint = [&](const Vector& v) {
        Matrix eta = Eigen::Map<const Matrix>(v.data(), n, n);
        Matrix out = Matrix::Zero(n, n);
        for (const auto& [f, h] : terms) out += f.transpose() * eta * h.transpose();
        return Vector(Eigen::Map<const Vector>(out.data(), n * n));
    };
    return matrix_free_operator_norm(n * n, apply, apply_adjoint);
}

namespace {

std::vector<Matrix> sample_tuple(int m, int r, double radius, bool on_boundary,
                                 std::mt19937_64& g) {
    std::vector<Matrix> tuple;
    tuple.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        Matrix lam(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) lam(i, j) = uniform(g, -1.0, 1.0);
        double nrm = operator_norm(lam);
        double u = on_boundary ? 1.0 : 1.0 - uniform01(g);  // u in (0,1]
        lam *= (nrm > 0.0 ? u * radius / nrm : 0.0);
        tuple.push_back(std::move(lam));
    }
    return tuple;
}

std::pair<double, double> tuple_scores(const NcPolynomial& p, const std::vector<Matrix>& tuple) {
    ShiftSet lam(tuple);
    double l0 = 0.0, l1 = 0.0;
    for (int i = 0; i < lam.count(); ++i) {
        l0 += operator_norm(frechet_vectorized(p, lam, i, false));
        l1 = std::max(l1, operator_norm(frechet_vectorized(p, lam, i, true)));
    }
    return {l0, l1};
}

Matrix pad_to(const Matrix& a, int r) {
    if (a.rows() == r && a.cols() == r) return a;
    Matrix out = Matrix::Zero(r, r);
    out.topLeftCorner(a.rows(), a.cols()) = a;
    return out;
}

}  // namespace

std::vector<std::vector<Matrix>> lipschitz_sample_tuples(int num_generators,
                                                         const LipschitzOptions& opts) {
    if (opts.block_size < 1 || opts.radius <= 0.0 || opts.samples < 1)
        throw std::invalid_argument("lipschitz_sample_tuples: invalid options");
    std::vector<std::vector<Matrix>> tuples;
    tuples.reserve(static_cast<size_t>(opts.samples));
    for (int idx = 0; idx < opts.samples; ++idx) {
        std::mt19937_64 g(seed_mix(opts.seed, static_cast<std::uint64_t>(idx)));
        // every fourth tuple sits exactly on the domain boundary, where the
        // maxima of polynomial derivative norms live
        tuples.push_back(sample_tuple(num_generators, opts.block_size, opts.radius,
                                      idx % 4 == 0, g));
    }
    return tuples;
}

LipschitzEstimate estimate_lipschitz(const NcPolynomial& p, const LipschitzOptions& opts) {
    LipschitzEstimate est;
    est.block_size = opts.block_size;
    est.radius = opts.radius;
    est.seed = opts.seed;
    est.sample_count = opts.samples;

    for (const auto& anchor : opts.anchors) {
        if (static_cast<int>(anchor.size()) != p.num_generators())
            throw std::invalid_argument("estimate_lipschitz: anchor tuple size mismatch");
        std::vector<Matrix> padded;
        for (const auto& a : anchor) padded.push_back(pad_to(a, opts.block_size));
        auto [l0, l1] = tuple_scores(p, padded);
        est.l0_hat = std::max(est.l0_hat, l0);
        est.l1_hat = std::max(est.l1_hat, l1);
    }

    for (const auto& tuple : lipschitz_sample_tuples(p.num_generators(), opts)) {
        auto [l0, l1] = tuple_scores(p, tuple);
        est.l0_hat = std::max(est.l0_hat, l0);
        est.l1_hat = std::max(est.l1_hat, l1);
        est.per_sample_l0.push_back(est.l0_hat);
        est.per_sample_l1.push_back(est.l1_hat);
    }
    return est;
}

StabilityReport stability_report(const NcPolynomial& p, const ShiftSet& shifts,
                                 const Perturbation& pert, const Vector& x,
                                 const LipschitzEstimate* lipschitz,
                                 const std::optional<LipschitzOptions>& opts) {
    if (pert.count() != shifts.count() || pert.dim() != shifts.dim())
        throw std::invalid_argument("stability_report: perturbation dimension mismatch");
    if (x.size() != shifts.dim())
        throw std::invalid_argument("stability_report: signal dimension mismatch");

    StabilityReport rep;
    ShiftSet perturbed = perturb(shifts, pert);
    Vector y = apply_filter(p, shifts, x);
    Vector y_tilde = apply_filter(p, perturbed, x);
    rep.measured = (y - y_tilde).norm();

    Vector linear_term = Vector::Zero(x.size());
    for (int i = 0; i < shifts.count(); ++i) {
        Matrix t_si = pert.shift_change(i, shifts[i]);
        Matrix d = frechet_apply(p, shifts, i, t_si);
        rep.first_order += operator_norm(d) * x.norm();
        linear_term += d * x;
        rep.sup_t = std::max(rep.sup_t, operator_norm(t_si));
        rep.sup_dt = std::max(rep.sup_dt, operator_norm(pert.frechet_derivative(i)));
    }
    rep.residual = (y_tilde - y - linear_term).norm();
    rep.delta = delta_factor(pert);

    LipschitzEstimate local;
    if (lipschitz == nullptr) {
        LipschitzOptions o = opts.value_or(LipschitzOptions{});
        local = estimate_lipschitz(p, o);
        lipschitz = &local;
    }
    rep.l0_hat = lipschitz->l0_hat;
    rep.l1_hat = lipschitz->l1_hat;
    rep.theorem3_bound = shifts.count() * rep.delta *
                         (rep.l0_hat * rep.sup_t + rep.l1_hat * rep.sup_dt) * x.norm();
    return rep;
}

}  // namespace ncasp
