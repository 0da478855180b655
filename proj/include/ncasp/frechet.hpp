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
#include <optional>
#include <utility>
#include <vector>

#include "ncasp/perturbation.hpp"
#include "ncasp/shift_set.hpp"

namespace ncasp {

/// The exact partial Frechet derivative of a matrix polynomial with respect
/// to one generator, kept in product-rule form: a list of (prefix, suffix)
/// pairs (f_r, h_r) acting on a direction as xi -> sum_r f_r xi h_r. The
/// vectorized realization sum_r h_r^T (x) f_r is an n^2 x n^2 matrix with
/// (vectorized) vec(xi) = vec(apply(xi)).
class DerivativeOperator {
  public:
    DerivativeOperator(int dim, int generator) : dim_(dim), generator_(generator) {}

    int dim() const { return dim_; }
    int generator() const { return generator_; }
    const std::vector<std::pair<Matrix, Matrix>>& terms() const { return terms_; }

    void add_term(Matrix prefix, Matrix suffix, double weight = 1.0);

    Matrix apply(const Matrix& xi) const;
    Matrix vectorized() const;

  private:
    int dim_;
    int generator_;
    std::vector<std::pair<Matrix, Matrix>> terms_;
};

/// Product rule over the occurrences of `generator` in w: one (prefix,
/// suffix) term per occurrence, empty products being the identity. A word
/// without the letter yields the zero operator.
DerivativeOperator word_derivative(const Word& w, int generator, const ShiftSet& shifts);

/// D_{p|S_i}(S_1,...,S_m){xi}: the first-order change of p(S) when S_i moves
/// by xi.
Matrix frechet_apply(const NcPolynomial& p, const ShiftSet& shifts, int generator, const Matrix& xi);

/// The n^2 x n^2 matrix of the partial derivative acting on vec(xi). With
/// right_multiply the operator is xi -> D_{p|S_i}{xi S_i}, the map whose
/// boundedness over the spectral domain defines integral Lipschitz filters.
/// Refuses to materialize above dim_cap rows (default n <= 64).
Matrix frechet_vectorized(const NcPolynomial& p, const ShiftSet& shifts, int generator,
                          bool right_multiply, int dim_cap = 4096);

/// Spectral norm of the (optionally right-multiplied) partial derivative.
/// Materializes the vectorized matrix for n <= 64 and falls back to
/// matrix-free power iteration through frechet_apply above that.
double frechet_operator_norm(const NcPolynomial& p, const ShiftSet& shifts, int generator,
                             bool right_multiply);

struct LipschitzEstimate {
    double l0_hat = 0.0;
    double l1_hat = 0.0;
    int sample_count = 0;
    int block_size = 0;
    double radius = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> per_sample_l0;  // running maxima are monotone in the sample count
    std::vector<double> per_sample_l1;
};

struct LipschitzOptions {
    int block_size = 2;
    double radius = 1.0;
    int samples = 200;
    std::uint64_t seed = 0;
    /// Extra tuples always included in the max, e.g. the known frequency
    /// matrices of a fixture (padded to block_size if smaller).
    std::vector<std::vector<Matrix>> anchors;
};

/// The deterministic sample tuples behind estimate_lipschitz: i.i.d. uniform
/// matrices rescaled to norm u*radius with u uniform in (0,1], every fourth
/// tuple pinned to the boundary. Per-sample seeds derive from (seed, index)
/// so the list is order-independent. Anchors are not included.
std::vector<std::vector<Matrix>> lipschitz_sample_tuples(int num_generators,
                                                         const LipschitzOptions& opts);

/// Randomized lower estimate of the Lipschitz constants of Definition-8 type
/// over the domain ||Lambda_k|| <= radius: L0 from the summed vectorized
/// derivative norms, L1 from the right-multiplied ones.
LipschitzEstimate estimate_lipschitz(const NcPolynomial& p, const LipschitzOptions& opts);

struct StabilityReport {
    double measured = 0.0;        // ||p(S)x - p(S~)x||
    double first_order = 0.0;     // sum_i ||D_{p|S_i}{T(S_i)}|| * ||x||
    double theorem3_bound = 0.0;  // m delta (L0 sup||T|| + L1 sup||D_T||) * ||x||
    double residual = 0.0;        // ||p(S~)x - p(S)x - sum_i D{T(S_i)} x||
    double delta = 0.0;
    double sup_t = 0.0;
    double sup_dt = 0.0;
    double l0_hat = 0.0;
    double l1_hat = 0.0;
};

/// Measures the deformation of one filter under a perturbation against its
/// first-order expansion and the Lipschitz stability bound. Constants come
/// from `lipschitz` when given, otherwise they are estimated with `opts`.
StabilityReport stability_report(const NcPolynomial& p, const ShiftSet& shifts,
                                 const Perturbation& pert, const Vector& x,
                                 const LipschitzEstimate* lipschitz = nullptr,
                                 const std::optional<LipschitzOptions>& opts = std::nullopt);

}  // namespace ncasp
