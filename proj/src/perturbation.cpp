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

#include "ncasp/perturbation.hpp"

#include <stdexcept>

#include "ncasp/linalg.hpp"
#include "ncasp/rng.hpp"

namespace ncasp {

Perturbation::Perturbation(std::vector<Matrix> t0, std::vector<Matrix> t1)
    : t0_(std::move(t0)), t1_(std::move(t1)) {
    if (t0_.size() != t1_.size() || t0_.empty())
        throw std::invalid_argument("Perturbation: T0/T1 lists must be non-empty and equal length");
    const auto n = t0_[0].rows();
    for (size_t i = 0; i < t0_.size(); ++i)
        if (t0_[i].rows() != n || t0_[i].cols() != n || t1_[i].rows() != n || t1_[i].cols() != n)
            throw std::invalid_argument("Perturbation: blocks must be square with common dimension");
}

Perturbation Perturbation::zero(int count, int dim) {
    std::vector<Matrix> z(static_cast<size_t>(count), Matrix::Zero(dim, dim));
    return Perturbation(z, z);
}

Perturbation Perturbation::from_specs(const std::vector<Spec>& specs, int dim,
                                      std::uint64_t seed) {
    std::vector<Matrix> t0, t1;
    for (size_t i = 0; i < specs.size(); ++i) {
        const Spec& spec = specs[i];
        std::mt19937_64 g(seed_mix(seed, static_cast<std::uint64_t>(i)));
        auto draw = [&]() {
            return spec.distribution == Distribution::uniform
                       ? uniform(g, -spec.epsilon, spec.epsilon)
                       : spec.epsilon * gaussian(g);
        };
        Matrix a = Matrix::Zero(dim, dim), b = Matrix::Zero(dim, dim);
        if (spec.mode == Mode::additive || spec.mode == Mode::both)
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) a(r, c) = draw();
        if (spec.mode == Mode::relative || spec.mode == Mode::both)
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) b(r, c) = draw();
        t0.push_back(std::move(a));
        t1.push_back(std::move(b));
    }
    return Perturbation(std::move(t0), std::move(t1));
}

Perturbation Perturbation::random(int count, int dim, Mode mode, double epsilon,
                                  Distribution dist, std::uint64_t seed) {
    std::vector<Spec> specs(static_cast<size_t>(count), Spec{mode, epsilon, dist});
    return from_specs(specs, dim, seed);
}

Matrix Perturbation::shift_change(int i, const Matrix& s_i) const {
    return t0_[static_cast<size_t>(i)] + t1_[static_cast<size_t>(i)] * s_i;
}

Perturbation Perturbation::scaled(double factor) const {
    auto t0 = t0_;
    auto t1 = t1_;
    for (auto& m : t0) m *= factor;
    for (auto& m : t1) m *= factor;
    return Perturbation(std::move(t0), std::move(t1));
}

ShiftSet perturb(const ShiftSet& shifts, const Perturbation& p) {
    if (p.count() != shifts.count() || p.dim() != shifts.dim())
        throw std::invalid_argument("perturb: dimension mismatch");
    std::vector<Matrix> out;
    out.reserve(static_cast<size_t>(shifts.count()));
    for (int i = 0; i < shifts.count(); ++i) out.push_back(shifts[i] + p.shift_change(i, shifts[i]));
    return ShiftSet(std::move(out));
}

double delta_factor(const Perturbation& p) {
    double delta = 0.0;
    auto block = [&](const Matrix& t) {
        double spec = operator_norm(t);
        if (spec > 0.0) delta = std::max(delta, t.norm() / spec);
    };
    for (int i = 0; i < p.count(); ++i) {
        block(p.t0(i));
        block(p.t1(i));
    }
    return delta;
}

}  // namespace ncasp
