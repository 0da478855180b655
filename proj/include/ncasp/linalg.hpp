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

#include <functional>

#include "ncasp/shift_set.hpp"

namespace ncasp {

/// Spectral norm (largest singular value). Dense SVD up to side 4096, power
/// iteration on A^T A beyond that. Rejects non-finite entries.
double operator_norm(const Matrix& a);
double operator_norm(const CMatrix& a);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Largest singular value of an operator given only through its action and
/// the action of its adjoint; power iteration on A^* A to relative tolerance.
double matrix_free_operator_norm(int input_dim,
                                 const std::function<Vector(const Vector&)>& apply,
                                 const std::function<Vector(const Vector&)>& apply_adjoint,
                                 double rel_tol = 1e-8, int max_iter = 10000);

}  // namespace ncasp
