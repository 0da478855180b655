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

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace ncasp {

/// A monomial in a free non-commutative algebra: the ordered sequence of
/// generator indices it multiplies. The empty word is the unit monomial.
/// Words are ordered by degree first, then lexicographically, so coefficient
/// vectors laid out over enumerate_monomials() are reproducible.
class Word {
  public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> letters) : letters_(letters) {}

    static Word unit() { return Word{}; }

    int degree() const { return static_cast<int>(letters_.size()); }
    bool is_unit() const { return letters_.empty(); }
    const std::vector<int>& letters() const { return letters_; }
    int letter(int pos) const { return letters_[static_cast<size_t>(pos)]; }

    int max_letter() const;

    /// Letter counts (j_1,...,j_m): the multidegree of the monomial.
    std::vector<int> letter_counts(int num_generators) const;

    Word concat(const Word& other) const;

    std::strong_ordering operator<=>(const Word& other) const {
        if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
        return letters_ <=> other.letters_;
    }
    bool operator==(const Word& other) const = default;

    /// "1" for the unit word, otherwise "g0.g1.g0" style.
    std::string to_string() const;

  private:
    std::vector<int> letters_;
};

/// All words of degree <= max_degree over num_generators letters, ordered by
/// (degree, lex). Size is sum_{k<=d} m^k. Deterministic across runs.
std::vector<Word> enumerate_monomials(int num_generators, int max_degree);

/// Inverse of Word::to_string.
Word word_from_string(const std::string& text);

}  // namespace ncasp
