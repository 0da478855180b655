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

#include <map>
#include <string>
#include <string_view>

#include "ncasp/word.hpp"

namespace ncasp {

/// A free non-commutative polynomial over m generators: a canonical map from
/// words to real coefficients. Canonical means no stored zero coefficients,
/// so two polynomials are equal iff their term maps are equal. Values are
/// immutable in spirit: all arithmetic returns new polynomials.
class NcPolynomial {
  public:
    explicit NcPolynomial(int num_generators);

    static NcPolynomial zero(int num_generators) { return NcPolynomial(num_generators); }
    static NcPolynomial one(int num_generators) { return constant(num_generators, 1.0); }
    static NcPolynomial constant(int num_generators, double c);
    static NcPolynomial generator(int num_generators, int index);
    static NcPolynomial monomial(int num_generators, const Word& w, double c = 1.0);

    int num_generators() const { return num_generators_; }
    const std::map<Word, double>& terms() const { return terms_; }
    double coeff(const Word& w) const;
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial

    /// Adds c to the coefficient of w, pruning exact zeros.
    NcPolynomial& add_term(const Word& w, double c);

    NcPolynomial operator-() const;
    NcPolynomial operator+(const NcPolynomial& other) const;
    NcPolynomial operator-(const NcPolynomial& other) const;
    NcPolynomial operator*(const NcPolynomial& other) const;  // word concatenation; non-commutative
    NcPolynomial operator*(double s) const;
    friend NcPolynomial operator*(double s, const NcPolynomial& p) { return p * s; }

    bool operator==(const NcPolynomial& other) const = default;

    /// Term-per-line text form, e.g. "2.5 * g0.g1", with a leading
    /// "generators m" header; parses back losslessly.
    std::string to_text() const;
    static NcPolynomial from_text(std::string_view text);

  private:
    void check_compatible(const NcPolynomial& other) const;
    void check_word(const Word& w) const;

    int num_generators_;
    std::map<Word, double> terms_;
};

}  // namespace ncasp
