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
#include <vector>

#include "ncasp/shift_set.hpp"

namespace ncasp {

/// Per-generator affine deformation of a shift tuple: the i-th shift moves by
/// T(S_i) = T0_i + T1_i S_i. The Frechet derivative of the map S -> T0 + T1 S
/// is the constant operator T1.
class Perturbation {
  public:
    Perturbation(std::vector<Matrix> t0, std::vector<Matrix> t1);

    static Perturbation zero(int count, int dim);

    enum class Mode { additive, relative, both };
    enum class Distribution { uniform, gaussian };

    /// Per-generator draw description: additive fills T0, relative fills T1,
    /// both fills both; entries are i.i.d. uniform in [-epsilon, epsilon] or
    /// gaussian with standard deviation epsilon.
    struct Spec {
        Mode mode = Mode::both;
        double epsilon = 0.0;
        Distribution distribution = Distribution::uniform;
    };

    /// One spec per generator, deterministic per (seed, generator index).
    static Perturbation from_specs(const std::vector<Spec>& specs, int dim, std::uint64_t seed);

    /// The same spec for every generator.
    static Perturbation random(int count, int dim, Mode mode, double epsilon,
                               Distribution dist, std::uint64_t seed);

    int count() const { return static_cast<int>(t0_.size()); }
    int dim() const { return t0_.empty() ? 0 : static_cast<int>(t0_[0].rows()); }
    const Matrix& t0(int i) const { return t0_[static_cast<size_t>(i)]; }
    const Matrix& t1(int i) const { return t1_[static_cast<size_t>(i)]; }

    /// T(S_i) for the supplied shift.
    Matrix shift_change(int i, const Matrix& s_i) const;
    /// D_T(S_i) = T1_i.
    const Matrix& frechet_derivative(int i) const { return t1_[static_cast<size_t>(i)]; }

    Perturbation scaled(double factor) const;

  private:
    std::vector<Matrix> t0_, t1_;
};

/// S~_i = S_i + T0_i + T1_i S_i for every generator.
ShiftSet perturb(const ShiftSet& shifts, const Perturbation& p);

/// Smallest delta with ||T||_F <= delta ||T||_2 across all perturbation
/// blocks; zero blocks contribute 0.
double delta_factor(const Perturbation& p);

}  // namespace ncasp
