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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ncasp/experiments.hpp"
#include "ncasp/linalg.hpp"
#include "ncasp/multigraph.hpp"
#include "ncasp/quaternion.hpp"
#include "ncasp/rng.hpp"
#include "ncasp/shift_set.hpp"

using namespace ncasp;

namespace {

NcPolynomial example_filter() {
    auto t1 = NcPolynomial::generator(2, 0);
    auto t2 = NcPolynomial::generator(2, 1);
    return t1 * t1 + t1 * t2 + 2.0 * (t2 * t1) + t2 * t2 + NcPolynomial::one(2);
}

Vector random_vector(int n, std::mt19937_64& g) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = uniform(g, -1.0, 1.0);
    return x;
}

}  // namespace

TEST_CASE("unit filter returns the signal unchanged") {
    Matrix s = circulant_shift(5);
    ShiftSet shifts({s});
    std::mt19937_64 g(3);
    Vector x = random_vector(5, g);
    CHECK((apply_filter(NcPolynomial::one(1), shifts, x) - x).norm() == doctest::Approx(0.0));
}

TEST_CASE("cyclic shift delays an impulse") {
    const int n = 8;
    ShiftSet shifts({circulant_shift(n)});
    Vector impulse = Vector::Zero(n);
    impulse(0) = 1.0;
    Vector y = apply_filter(NcPolynomial::generator(1, 0), shifts, impulse);
    CHECK(y(1) == doctest::Approx(1.0));
    CHECK(y.norm() == doctest::Approx(1.0));
}

TEST_CASE("iterated-shift path equals the materialized product") {
    Multigraph g6 = example_multigraph6();
    ShiftSet shifts = shift_from_multigraph(g6, ShiftNormalization::spectral);
    std::mt19937_64 g(5);
    auto p = example_filter();
    for (int trial = 0; trial < 10; ++trial) {
        Vector x = random_vector(6, g);
        Vector via_filter = apply_filter(p, shifts, x);
        Vector via_matrix = eval(p, shifts) * x;
        CHECK((via_filter - via_matrix).norm() < 1e-12 * (1.0 + via_matrix.norm()));
    }
}

TEST_CASE("filtering is linear in the signal") {
    Multigraph g6 = example_multigraph6();
    ShiftSet shifts = shift_from_multigraph(g6, ShiftNormalization::spectral);
    auto p = example_filter();
    std::mt19937_64 g(7);
    Vector x = random_vector(6, g), y = random_vector(6, g);
    double a = uniform(g, -2.0, 2.0), b = uniform(g, -2.0, 2.0);
    Vector lhs = apply_filter(p, shifts, a * x + b * y);
    Vector rhs = a * apply_filter(p, shifts, x) + b * apply_filter(p, shifts, y);
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
}

TEST_CASE("multigraph shift construction and normalization") {
    Multigraph two(2, 1);
    two.add_edge(0, 0, 1, 1.0);
    ShiftSet none = shift_from_multigraph(two, ShiftNormalization::none);
    Matrix expected(2, 2);
    expected << 0, 1, 1, 0;
    CHECK((none[0] - expected).norm() == doctest::Approx(0.0));

    // spectral normalization leaves a norm-1 layer unchanged
    ShiftSet spectral = shift_from_multigraph(two, ShiftNormalization::spectral);
    CHECK((spectral[0] - expected).norm() < 1e-12);

    Multigraph g6 = example_multigraph6();
    CHECK(g6.num_nodes() == 6);
    CHECK(g6.num_layers() == 2);
    for (int r = 0; r < 2; ++r) {
        CHECK((g6.layer(r) - g6.layer(r).transpose()).norm() == doctest::Approx(0.0));
        CHECK(g6.layer(r).diagonal().norm() == doctest::Approx(0.0));
    }
    ShiftSet normalized = shift_from_multigraph(g6, ShiftNormalization::spectral);
    for (int r = 0; r < 2; ++r) CHECK(operator_norm(normalized[r]) == doctest::Approx(1.0).epsilon(1e-9));

    ShiftSet degree = shift_from_multigraph(g6, ShiftNormalization::degree);
    for (int r = 0; r < 2; ++r)
        CHECK(degree[r].cwiseAbs().rowwise().sum().maxCoeff() == doctest::Approx(1.0));

    Multigraph empty_layer(3, 2);
    empty_layer.add_edge(0, 0, 1, 1.0);
    CHECK_THROWS_AS(shift_from_multigraph(empty_layer, ShiftNormalization::spectral),
                    std::invalid_argument);
}

TEST_CASE("validate_model reports relation residuals") {
    auto t1 = NcPolynomial::generator(2, 0);
    auto t2 = NcPolynomial::generator(2, 1);
    auto commutator = t1 * t2 - t2 * t1;

    // generic multigraph layers do not commute
    ShiftSet generic = shift_from_multigraph(example_multigraph6(), ShiftNormalization::spectral);
    RelationReport generic_report = validate_model(generic, {commutator});
    CHECK_FALSE(generic_report.all_satisfied);
    CHECK(generic_report.entries[0].residual > 1e-3);

    // equal shifts commute
    ShiftSet equal({generic[0], generic[0]});
    CHECK(validate_model(equal, {commutator}).all_satisfied);

    // quaternion realization satisfies i^2 + 1 = 0
    ShiftSet quat = quaternion_generator_matrices();
    auto gi = NcPolynomial::generator(3, 0);
    RelationReport quat_report = validate_model(quat, {gi * gi + NcPolynomial::one(3)});
    CHECK(quat_report.all_satisfied);
}

TEST_CASE("multigraph file round-trip and loader errors") {
    Multigraph g6 = example_multigraph6();
    const std::string path = "multigraph_roundtrip.tmp";
    g6.save(path);
    Multigraph loaded = Multigraph::load(path);
    REQUIRE(loaded.num_nodes() == 6);
    REQUIRE(loaded.num_layers() == 2);
    for (int r = 0; r < 2; ++r) CHECK((loaded.layer(r) - g6.layer(r)).norm() == doctest::Approx(0.0));
    std::remove(path.c_str());

    const std::string bad = "multigraph_bad.tmp";
    {
        std::ofstream out(bad);
        out << "3 1\n0 0 7 1.0\n";  // node out of range
    }
    CHECK_THROWS_WITH_AS(Multigraph::load(bad), doctest::Contains("line 2"), std::runtime_error);
    std::remove(bad.c_str());
}

TEST_CASE("signal dimension mismatches are rejected") {
    ShiftSet shifts({circulant_shift(4)});
    Vector x = Vector::Zero(5);
    CHECK_THROWS_AS(apply_filter(NcPolynomial::one(1), shifts, x), std::invalid_argument);
    Matrix a(2, 2), b(3, 3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS(ShiftSet({a, b}), std::invalid_argument);
}
