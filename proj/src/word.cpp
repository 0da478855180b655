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

#include "ncasp/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncasp {

int Word::max_letter() const {
    int m = -1;
    for (int l : letters_) m = std::max(m, l);
    return m;
}

std::vector<int> Word::letter_counts(int num_generators) const {
    std::vector<int> counts(static_cast<size_t>(num_generators), 0);
    for (int l : letters_) counts.at(static_cast<size_t>(l))++;
    return counts;
}

Word Word::concat(const Word& other) const {
    std::vector<int> joined = letters_;
    joined.insert(joined.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(joined));
}

std::string Word::to_string() const {
    if (is_unit()) return "1";
    std::string s;
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i > 0) s += '.';
        s += 'g';
        s += std::to_string(letters_[i]);
    }
    return s;
}

Word word_from_string(const std::string& text) {
    if (text == "1") return Word::unit();
    std::vector<int> letters;
    size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != 'g') throw std::invalid_argument("word_from_string: malformed word " + text);
        size_t end = text.find('.', pos);
        if (end == std::string::npos) end = text.size();
        letters.push_back(std::stoi(text.substr(pos + 1, end - pos - 1)));
        pos = end + 1;
    }
    return Word(std::move(letters));
}

std::vector<Word> enumerate_monomials(int num_generators, int max_degree) {
    if (num_generators < 1) throw std::invalid_argument("enumerate_monomials: need at least one generator");
    if (max_degree < 0) throw std::invalid_argument("enumerate_monomials: negative degree");

    std::vector<Word> out;
    std::vector<std::vector<int>> current{{}};  // degree-0 block
    out.emplace_back();
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<std::vector<int>> next;
        next.reserve(current.size() * static_cast<size_t>(num_generators));
        for (const auto& w : current) {
            for (int g = 0; g < num_generators; ++g) {
                auto extended = w;
                extended.push_back(g);
                next.push_back(std::move(extended));
            }
        }
        // extension order is already lexicographic within the degree block
        for (auto& w : next) out.emplace_back(w);
        current = std::move(next);
    }
    return out;
}

}  // namespace ncasp
