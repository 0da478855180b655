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

#include "ncasp/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ncasp {

namespace {

constexpr int kDenseSvdCap = 4096;

template <class Mat>
double dense_or_iterative_norm(const Mat& a) {
    if (!a.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    if (a.rows() <= kDenseSvdCap && a.cols() <= kDenseSvdCap) {
        if (a.rows() <= 32 && a.cols() <= 32)
            return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
        return Eigen::BDCSVD<Mat>(a).singularValues()(0);
    }
    // power iteration on A^* A
    using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
    Vec v = Vec::Ones(a.cols());
    v /= v.norm();
    double sigma = 0.0, prev = -1.0;
    for (int it = 0; it < 10000; ++it) {
        Vec w = a.adjoint() * (a * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        sigma = std::sqrt(nw);
        if (prev >= 0.0 && std::abs(sigma - prev) <= 1e-8 * sigma) break;
        prev = sigma;
    }
    return sigma;
}

}  // namespace

double operator_norm(const Matrix& a) { return dense_or_iterative_norm(a); }
double operator_norm(const CMatrix& a) { return dense_or_iterative_norm(a); }

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double matrix_free_operator_norm(int input_dim,
                                 const std::function<Vector(const Vector&)>& apply,
                                 const std::function<Vector(const Vector&)>& apply_adjoint,
                                 double rel_tol, int max_iter) {
    Vector v = Vector::Ones(input_dim);
    // deterministic non-uniform start so symmetric fixtures do not stall
    for (int i = 0; i < input_dim; ++i) v(i) += 0.01 * std::sin(1.0 + i);
    v /= v.norm();
    double sigma = 0.0, prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = apply_adjoint(apply(v));
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        sigma = std::sqrt(nw);
        if (prev >= 0.0 && std::abs(sigma - prev) <= rel_tol * sigma) break;
        prev = sigma;
    }
    return sigma;
}

}  // namespace ncasp
