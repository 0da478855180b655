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

#include "ncasp/shift_set.hpp"

#include <map>
#include <stdexcept>

namespace ncasp {

ShiftSet::ShiftSet(std::vector<Matrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw std::invalid_argument("ShiftSet: need at least one shift operator");
    const auto n = matrices_[0].rows();
    for (const auto& s : matrices_)
        if (s.rows() != n || s.cols() != n)
            throw std::invalid_argument("ShiftSet: matrices must be square with common dimension");
}

Matrix eval(const NcPolynomial& p, const ShiftSet& shifts) {
    return eval_at<Matrix>(p, std::span<const Matrix>(shifts.matrices()));
}

namespace {

// S_{w_1} (S_{w_2} (... (S_{w_k} x))) with memoized suffixes: the vector for a
// word is one matvec away from the vector of its tail.
const Vector& word_applied(const Word& w, const ShiftSet& shifts, const Vector& x,
                           std::map<Word, Vector>& cache) {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    Word tail(std::vector<int>(w.letters().begin() + 1, w.letters().end()));
    const Vector& below = word_applied(tail, shifts, x, cache);
    auto [ins, unused] = cache.emplace(w, shifts[w.letter(0)] * below);
    return ins->second;
}

}  // namespace

Vector apply_filter(const NcPolynomial& p, const ShiftSet& shifts, const Vector& x) {
    if (p.num_generators() != shifts.count())
        throw std::invalid_argument("apply_filter: generator count mismatch");
    if (x.size() != shifts.dim()) throw std::invalid_argument("apply_filter: signal dimension mismatch");
    std::map<Word, Vector> cache;
    cache.emplace(Word::unit(), x);
    Vector y = Vector::Zero(x.size());
    for (const auto& [w, c] : p.terms()) y += c * word_applied(w, shifts, x, cache);
    return y;
}

RelationReport validate_model(const ShiftSet& shifts, const std::vector<NcPolynomial>& relations,
                              double tol) {
    RelationReport report;
    for (const auto& r : relations) {
        RelationReport::Entry e;
        e.relation = r.to_text();
        e.residual = eval(r, shifts).norm();
        e.satisfied = e.residual <= tol;
        report.all_satisfied = report.all_satisfied && e.satisfied;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace ncasp
