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

#include "ncasp/polynomial.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ncasp {

NcPolynomial::NcPolynomial(int num_generators) : num_generators_(num_generators) {
    if (num_generators < 1) throw std::invalid_argument("NcPolynomial: need at least one generator");
}

NcPolynomial NcPolynomial::constant(int num_generators, double c) {
    NcPolynomial p(num_generators);
    p.add_term(Word::unit(), c);
    return p;
}

NcPolynomial NcPolynomial::generator(int num_generators, int index) {
    NcPolynomial p(num_generators);
    p.add_term(Word{index}, 1.0);
    return p;
}

NcPolynomial NcPolynomial::monomial(int num_generators, const Word& w, double c) {
    NcPolynomial p(num_generators);
    p.add_term(w, c);
    return p;
}

double NcPolynomial::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? 0.0 : it->second;
}

int NcPolynomial::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();  // map is ordered by (degree, lex)
}

NcPolynomial& NcPolynomial::add_term(const Word& w, double c) {
    check_word(w);
    auto [it, inserted] = terms_.try_emplace(w, 0.0);
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
    return *this;
}

NcPolynomial NcPolynomial::operator-() const {
    NcPolynomial out(num_generators_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
    return out;
}

NcPolynomial NcPolynomial::operator+(const NcPolynomial& other) const {
    check_compatible(other);
    NcPolynomial out = *this;
    for (const auto& [w, c] : other.terms_) out.add_term(w, c);
    return out;
}

NcPolynomial NcPolynomial::operator-(const NcPolynomial& other) const {
    check_compatible(other);
    NcPolynomial out = *this;
    for (const auto& [w, c] : other.terms_) out.add_term(w, -c);
    return out;
}

NcPolynomial NcPolynomial::operator*(const NcPolynomial& other) const {
    check_compatible(other);
    NcPolynomial out(num_generators_);
    for (const auto& [wa, ca] : terms_)
        for (const auto& [wb, cb] : other.terms_) out.add_term(wa.concat(wb), ca * cb);
    return out;
}

NcPolynomial NcPolynomial::operator*(double s) const {
    NcPolynomial out(num_generators_);
    if (s == 0.0) return out;
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, c * s);
    return out;
}

void NcPolynomial::check_compatible(const NcPolynomial& other) const {
    if (num_generators_ != other.num_generators_)
        throw std::invalid_argument("NcPolynomial: generator count mismatch");
}

void NcPolynomial::check_word(const Word& w) const {
    if (w.max_letter() >= num_generators_)
        throw std::invalid_argument("NcPolynomial: word letter out of range");
    for (int l : w.letters())
        if (l < 0) throw std::invalid_argument("NcPolynomial: negative generator index");
}

std::string NcPolynomial::to_text() const {
    std::ostringstream os;
    os << "generators " << num_generators_ << '\n';
    char buf[40];
    for (const auto& [w, c] : terms_) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        os << buf << " * " << w.to_string() << '\n';
    }
    return os.str();
}

NcPolynomial NcPolynomial::from_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string keyword;
    int m = 0;
    if (!(is >> keyword >> m) || keyword != "generators" || m < 1)
        throw std::invalid_argument("NcPolynomial::from_text: missing 'generators m' header");
    NcPolynomial p(m);
    std::string line;
    std::getline(is, line);  // consume header remainder
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double c = 0.0;
        std::string star, word_text;
        if (!(ls >> c >> star >> word_text) || star != "*")
            throw std::invalid_argument("NcPolynomial::from_text: malformed term at line " +
                                        std::to_string(line_no));
        try {
            p.add_term(word_from_string(word_text), c);
        } catch (const std::exception&) {
            throw std::invalid_argument("NcPolynomial::from_text: malformed word at line " +
                                        std::to_string(line_no));
        }
    }
    return p;
}

}  // namespace ncasp
