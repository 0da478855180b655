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

#include <array>
#include <cstdint>
#include <vector>

#include "ncasp/shift_set.hpp"
#include "ncasp/word.hpp"

namespace ncasp {

/// A quaternion-valued time signal: four real channels of common length N,
/// the coefficients of 1, i, j, k.
struct QuaternionSignal {
    Vector w, x, y, z;

    int length() const { return static_cast<int>(w.size()); }
    static QuaternionSignal zero(int n);

    /// Channels stacked as (w; x; y; z) in R^{4N}.
    Vector stacked() const;
    static QuaternionSignal from_stacked(const Vector& v);
};

/// A quaternion filter p1(t) 1 + p2(t) i + p3(t) j + p4(t) k: four tap
/// vectors over powers of the time shift.
struct QuaternionFilter {
    std::array<Vector, 4> taps;

    int max_taps() const;
    static QuaternionFilter zero(int taps);
};

/// The Hamilton product e_a e_b = sign * e_c on the basis (1, i, j, k),
/// derived from i^2 = j^2 = k^2 = -1 and the cyclic relations.
struct HamiltonEntry {
    int sign;
    int basis;
};
HamiltonEntry hamilton_product(int a, int b);

/// Left-multiplication matrices of i, j, k on the basis (1, i, j, k).
/// Together with the implicit identity these realize the quaternion algebra;
/// validate_model confirms the seven defining relations.
ShiftSet quaternion_generator_matrices();

/// The seven defining relations as polynomials over the generators (i, j, k):
/// i^2+1, j^2+1, k^2+1, ij-k, jk-i, ki-j, ijk+1.
std::vector<NcPolynomial> quaternion_relations();

/// N x N circular delay: e_t -> e_{t+1 mod N}.
Matrix circulant_shift(int n);

/// Filtering per the Hamilton product: every output channel is the signed sum
/// of circular convolutions p_a(C) x_b routed by hamilton_product. Matches
/// the 4N x 4N block realization built from the generator matrices.
QuaternionSignal quaternion_convolve(const QuaternionFilter& f, const QuaternionSignal& u,
                                     const Matrix& shift);

/// Folds a word over the generators (i, j, k) to its signed basis element;
/// every monomial reduces to one of +-1, +-i, +-j, +-k.
HamiltonEntry reduce_quaternion_word(const Word& w);

/// The 4N x 4N shift tuple of the quaternion convolutional model on stacked
/// signals: the time shift I4 (x) C followed by M_i (x) I, M_j (x) I,
/// M_k (x) I. Generator 0 is time, generators 1..3 the imaginary units.
ShiftSet quaternion_block_shifts(int signal_length);

/// The filter family p1(t) 1 + p2(t) i + p3(t) j + p4(t) k as words over
/// quaternion_block_shifts: time powers t^d and e_a t^d for a in {i, j, k},
/// d < taps. Coefficient order matches QuaternionFilter taps stacked
/// channel-major: (p1; p2; p3; p4).
std::vector<Word> quaternion_word_basis(int taps);

/// Coefficient vector over quaternion_word_basis(taps) for a filter.
Vector quaternion_filter_coefficients(const QuaternionFilter& f, int taps);

struct QuaternionIlReport {
    std::vector<Word> sampled_words;          // all words of degree <= max_degree
    std::vector<HamiltonEntry> reductions;    // signed basis element per word
    int distinct_signed_elements = 0;         // closure size; 8 for the quaternions
    std::vector<double> radii;                // R grid
    std::vector<double> il_norm_sup;          // sup over |lambda| <= R of the IL norm
    double loglog_slope = 0.0;                // growth exponent of the sup in R
};

/// Demonstrates why no quaternion filter with a nonconstant tap polynomial is
/// integral Lipschitz: monomials in i, j, k collapse to the 8 signed basis
/// elements, and the right-multiplied derivative norms of the reduced family
/// grow without bound in the time-frequency radius.
QuaternionIlReport quaternion_il_emptiness_check(const QuaternionFilter& f, int max_degree,
                                                 const std::vector<double>& radii = {1, 2, 4, 8, 16});

}  // namespace ncasp
