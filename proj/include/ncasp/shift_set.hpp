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

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ncasp/polynomial.hpp"

namespace ncasp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// An ordered tuple of shift operators: m square matrices of common dimension
/// n, the realizations S_i = rho(g_i) of the algebra generators. Immutable
/// after construction.
class ShiftSet {
  public:
    ShiftSet() = default;
    explicit ShiftSet(std::vector<Matrix> matrices);

    int count() const { return static_cast<int>(matrices_.size()); }
    int dim() const { return matrices_.empty() ? 0 : static_cast<int>(matrices_[0].rows()); }
    const Matrix& operator[](int i) const { return matrices_[static_cast<size_t>(i)]; }
    const std::vector<Matrix>& matrices() const { return matrices_; }

  private:
    std::vector<Matrix> matrices_;
};

/// Evaluates p at an arbitrary tuple of square matrices: sum over words of
/// coeff * X_{w_1} ... X_{w_k}, with the unit word contributing coeff * I.
/// Works for real and complex matrices; the tuple size must match the
/// polynomial's generator count.
template <class Mat>
Mat eval_at(const NcPolynomial& p, std::span<const Mat> gens) {
    if (static_cast<int>(gens.size()) != p.num_generators())
        throw std::invalid_argument("eval_at: tuple size does not match generator count");
    const auto n = gens.empty() ? 0 : gens[0].rows();
    for (const auto& g : gens)
        if (g.rows() != n || g.cols() != n)
            throw std::invalid_argument("eval_at: matrices must be square with common dimension");
    Mat acc = Mat::Zero(n, n);
    for (const auto& [w, c] : p.terms()) {
        Mat prod = Mat::Identity(n, n);
        for (int l : w.letters()) prod = prod * gens[static_cast<size_t>(l)];
        acc += c * prod;
    }
    return acc;
}

/// p(S_1,...,S_m) as a dense n x n matrix.
Matrix eval(const NcPolynomial& p, const ShiftSet& shifts);

/// y = p(S) x computed by iterated shift applications; never materializes
/// p(S). Per-word suffix products are cached within one call.
Vector apply_filter(const NcPolynomial& p, const ShiftSet& shifts, const Vector& x);

/// Residuals ||eval(r, S)||_F for a list of quotient relations; "satisfied"
/// means the realization respects the relation to within tol.
struct RelationReport {
    struct Entry {
        std::string relation;
        double residual = 0.0;
        bool satisfied = false;
    };
    std::vector<Entry> entries;
    bool all_satisfied = true;
};

RelationReport validate_model(const ShiftSet& shifts, const std::vector<NcPolynomial>& relations,
                              double tol = 1e-9);

}  // namespace ncasp
