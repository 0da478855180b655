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

#include "ncasp/quaternion.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "ncasp/linalg.hpp"

namespace ncasp {

QuaternionSignal QuaternionSignal::zero(int n) {
    return {Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
}

Vector QuaternionSignal::stacked() const {
    const int n = length();
    Vector v(4 * n);
    v.segment(0, n) = w;
    v.segment(n, n) = x;
    v.segment(2 * n, n) = y;
    v.segment(3 * n, n) = z;
    return v;
}

QuaternionSignal QuaternionSignal::from_stacked(const Vector& v) {
    if (v.size() % 4 != 0) throw std::invalid_argument("QuaternionSignal: stacked length not divisible by 4");
    const Eigen::Index n = v.size() / 4;
    return {v.segment(0, n), v.segment(n, n), v.segment(2 * n, n), v.segment(3 * n, n)};
}

int QuaternionFilter::max_taps() const {
    int t = 0;
    for (const auto& p : taps) t = std::max(t, static_cast<int>(p.size()));
    return t;
}

QuaternionFilter QuaternionFilter::zero(int taps) {
    QuaternionFilter f;
    for (auto& p : f.taps) p = Vector::Zero(taps);
    return f;
}

HamiltonEntry hamilton_product(int a, int b) {
    if (a < 0 || a > 3 || b < 0 || b > 3) throw std::invalid_argument("hamilton_product: basis index");
    if (a == 0) return {1, b};
    if (b == 0) return {1, a};
    if (a == b) return {-1, 0};  // i^2 = j^2 = k^2 = -1
    // cyclic: ij = k, jk = i, ki = j; reversed order flips the sign
    static constexpr int third[4][4] = {{0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
    const bool forward = (b - a + 3) % 3 == 1;  // (i,j), (j,k), (k,i)
    return {forward ? 1 : -1, third[a][b]};
}

ShiftSet quaternion_generator_matrices() {
    std::vector<Matrix> gens;
    for (int g = 1; g <= 3; ++g) {
        Matrix m = Matrix::Zero(4, 4);
        for (int b = 0; b < 4; ++b) {
            HamiltonEntry e = hamilton_product(g, b);
            m(e.basis, b) = e.sign;
        }
        gens.push_back(std::move(m));
    }
    return ShiftSet(std::move(gens));
}

std::vector<NcPolynomial> quaternion_relations() {
    const int m = 3;
    auto gi = NcPolynomial::generator(m, 0);
    auto gj = NcPolynomial::generator(m, 1);
    auto gk = NcPolynomial::generator(m, 2);
    auto one = NcPolynomial::one(m);
    return {
        gi * gi + one,       // i^2 = -1
        gj * gj + one,       // j^2 = -1
        gk * gk + one,       // k^2 = -1
        gi * gj - gk,        // ij = k
        gj * gk - gi,        // jk = i
        gk * gi - gj,        // ki = j
        gi * gj * gk + one,  // ijk = -1
    };
}

Matrix circulant_shift(int n) {
    if (n < 1) throw std::invalid_argument("circulant_shift: need n >= 1");
    Matrix c = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) c((j + 1) % n, j) = 1.0;
    return c;
}

namespace {

// p(C) x as iterated delays; taps may be empty
Vector tap_convolve(const Vector& taps, const Matrix& shift, const Vector& x) {
    Vector acc = Vector::Zero(x.size());
    Vector power = x;  // C^t x
    for (Eigen::Index t = 0; t < taps.size(); ++t) {
        if (t > 0) power = shift * power;
        acc += taps(t) * power;
    }
    return acc;
}

}  // namespace

QuaternionSignal quaternion_convolve(const QuaternionFilter& f, const QuaternionSignal& u,
                                     const Matrix& shift) {
    const int n = u.length();
    if (u.x.size() != n || u.y.size() != n || u.z.size() != n)
        throw std::invalid_argument("quaternion_convolve: channel lengths differ");
    if (shift.rows() != n || shift.cols() != n)
        throw std::invalid_argument("quaternion_convolve: shift dimension mismatch");

    const std::array<const Vector*, 4> channels = {&u.w, &u.x, &u.y, &u.z};
    std::array<Vector, 4> out;
    out.fill(Vector::Zero(n));
    for (int a = 0; a < 4; ++a) {
        if (f.taps[static_cast<size_t>(a)].size() == 0) continue;
        for (int b = 0; b < 4; ++b) {
            HamiltonEntry e = hamilton_product(a, b);
            out[static_cast<size_t>(e.basis)] +=
                e.sign * tap_convolve(f.taps[static_cast<size_t>(a)], shift, *channels[static_cast<size_t>(b)]);
        }
    }
    return {out[0], out[1], out[2], out[3]};
}

ShiftSet quaternion_block_shifts(int signal_length) {
    const Matrix c = circulant_shift(signal_length);
    const Matrix eye_n = Matrix::Identity(signal_length, signal_length);
    ShiftSet gens = quaternion_generator_matrices();
    std::vector<Matrix> shifts;
    shifts.push_back(kronecker(Matrix::Identity(4, 4), c));
    for (int g = 0; g < 3; ++g) shifts.push_back(kronecker(gens[g], eye_n));
    return ShiftSet(std::move(shifts));
}

std::vector<Word> quaternion_word_basis(int taps) {
    if (taps < 1) throw std::invalid_argument("quaternion_word_basis: need at least one tap");
    std::vector<Word> words;
    for (int a = 0; a < 4; ++a)
        for (int d = 0; d < taps; ++d) {
            std::vector<int> letters;
            if (a > 0) letters.push_back(a);  // block generator index of e_a
            letters.insert(letters.end(), static_cast<size_t>(d), 0);
            words.emplace_back(std::move(letters));
        }
    return words;
}

Vector quaternion_filter_coefficients(const QuaternionFilter& f, int taps) {
    Vector c = Vector::Zero(4 * taps);
    for (int a = 0; a < 4; ++a)
        for (Eigen::Index d = 0; d < f.taps[static_cast<size_t>(a)].size() && d < taps; ++d)
            c(a * taps + d) = f.taps[static_cast<size_t>(a)](d);
    return c;
}

HamiltonEntry reduce_quaternion_word(const Word& w) {
    HamiltonEntry acc{1, 0};
    for (int l : w.letters()) {
        if (l < 0 || l > 2) throw std::invalid_argument("reduce_quaternion_word: letter out of range");
        HamiltonEntry step = hamilton_product(acc.basis, l + 1);
        acc = {acc.sign * step.sign, step.basis};
    }
    return acc;
}

QuaternionIlReport quaternion_il_emptiness_check(const QuaternionFilter& f, int max_degree,
                                                 const std::vector<double>& radii) {
    if (max_degree < 1) throw std::invalid_argument("quaternion_il_emptiness_check: max_degree >= 1");
    QuaternionIlReport rep;

    rep.sampled_words = enumerate_monomials(3, max_degree);
    std::set<std::pair<int, int>> closure;
    for (const auto& w : rep.sampled_words) {
        HamiltonEntry e = reduce_quaternion_word(w);
        rep.reductions.push_back(e);
        closure.insert({e.sign, e.basis});
    }
    rep.distinct_signed_elements = static_cast<int>(closure.size());

    // For the reduced family p_1 1 + p_2 i + p_3 j + p_4 k at a scalar
    // time-frequency lambda, the right-multiplied derivative has norm
    // |q'(lambda)| * |lambda| with |q'| the Euclidean norm of the four tap
    // derivatives: left multiplication by a quaternion is a scaled rotation.
    auto il_norm = [&](double lambda) {
        double sq = 0.0;
        for (const auto& taps : f.taps) {
            double d = 0.0, power = 1.0;
            for (Eigen::Index t = 1; t < taps.size(); ++t) {
                d += static_cast<double>(t) * taps(t) * power;
                power *= lambda;
            }
            sq += d * d;
        }
        return std::sqrt(sq) * std::abs(lambda);
    };
    rep.radii = radii;
    for (double r : radii) {
        double sup = 0.0;
        const int grid = 512;
        for (int s = -grid; s <= grid; ++s) sup = std::max(sup, il_norm(r * s / grid));
        rep.il_norm_sup.push_back(sup);
    }

    // log-log regression of the sup against the radius
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (size_t t = 0; t < radii.size(); ++t) {
        if (rep.il_norm_sup[t] <= 0.0) continue;
        double lx = std::log(radii[t]), ly = std::log(rep.il_norm_sup[t]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count >= 2) rep.loglog_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return rep;
}

}  // namespace ncasp
