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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ncasp/data.hpp"
#include "ncasp/rng.hpp"

using namespace ncasp;

namespace {

// builds a MovieLens-style directory with the supplied raw file contents
struct TempDataDir {
    std::string path;
    explicit TempDataDir(const std::string& ratings, const std::string& items) {
        path = (std::filesystem::temp_directory_path() / "ncasp_ml_test").string();
        std::filesystem::create_directories(path);
        std::ofstream(path + "/u.data") << ratings;
        std::ofstream(path + "/u.item") << items;
    }
    ~TempDataDir() { std::filesystem::remove_all(path); }
};

std::string item_line(int id, std::uint32_t genre_mask) {
    std::string line = std::to_string(id) + "|title|01-Jan-1995||http://x";
    for (int g = 0; g < 19; ++g) line += (genre_mask >> g) & 1u ? "|1" : "|0";
    return line + "\n";
}

}  // namespace

TEST_CASE("single rating record parses") {
    TempDataDir dir("1\t1\t5\t874965758\n", item_line(1, 0b1));
    RatingMatrix r = load_movielens(dir.path);
    CHECK(r.num_users() == 1);
    CHECK(r.num_movies() == 1);
    CHECK(r.ratings(0, 0) == 5.0);
    CHECK(r.genres[0] == 0b1);
    CHECK(r.duplicate_records == 0);
}

TEST_CASE("duplicate (user, movie) pairs: last wins with a warning counter") {
    TempDataDir dir("1\t1\t5\t100\n1\t1\t2\t200\n2\t1\t4\t300\n", item_line(1, 0));
    RatingMatrix r = load_movielens(dir.path);
    CHECK(r.ratings(0, 0) == 2.0);
    CHECK(r.duplicate_records == 1);
}

TEST_CASE("malformed records are rejected with line numbers") {
    {
        TempDataDir dir("1\t1\t9\t100\n", item_line(1, 0));  // rating out of range
        CHECK_THROWS_WITH_AS(load_movielens(dir.path), doctest::Contains("line 1"),
                             std::runtime_error);
    }
    {
        TempDataDir dir("1\t1\t5\t100\nnot a record\n", item_line(1, 0));
        CHECK_THROWS_WITH_AS(load_movielens(dir.path), doctest::Contains("line 2"),
                             std::runtime_error);
    }
    CHECK_THROWS_AS(load_movielens("definitely_missing_dir"), std::runtime_error);
}

TEST_CASE("pearson weights: perfect correlation, too few co-raters, constant vectors") {
    // movies 0 and 1 share identical columns over 3 co-raters
    RatingMatrix r;
    r.genre_count = 19;
    r.genres = {0b11, 0b11, 0b100, 0b1000};
    r.ratings = Matrix::Zero(4, 4);
    r.ratings.col(0) << 1, 3, 5, 0;
    r.ratings.col(1) << 1, 3, 5, 0;
    r.ratings.col(2) << 5, 1, 0, 2;  // anti-correlated with 0 on the shared users
    r.ratings.col(3) << 4, 4, 4, 4;  // constant: degenerate variance

    Multigraph g = build_movie_multigraph_for(r, {0, 1, 2, 3}, 3);
    CHECK(g.layer(0)(0, 1) == doctest::Approx(1.0));  // perfect correlation
    CHECK(g.layer(0)(0, 2) == 0.0);                   // negative clipped to zero
    CHECK(g.layer(0)(0, 3) == 0.0);                   // constant rating vector
    CHECK(g.layer(0)(2, 3) == 0.0);

    // absolute-value option keeps the anti-correlation
    Multigraph g_abs = build_movie_multigraph_for(r, {0, 1, 2, 3}, 3, NegativeCorrelation::absolute);
    CHECK(g_abs.layer(0)(0, 2) > 0.9);

    // jaccard: identical sets 1, disjoint sets 0
    CHECK(g.layer(1)(0, 1) == doctest::Approx(1.0));
    CHECK(g.layer(1)(2, 3) == 0.0);
}

TEST_CASE("a movie pair with fewer than two co-raters gets weight zero") {
    RatingMatrix r;
    r.genre_count = 19;
    r.genres = {0, 0};
    r.ratings = Matrix::Zero(3, 2);
    r.ratings(0, 0) = 5.0;  // only user 0 rated movie 0
    r.ratings(1, 1) = 3.0;
    r.ratings(2, 1) = 4.0;
    Multigraph g = build_movie_multigraph_for(r, {0, 1}, 1);
    CHECK(g.layer(0)(0, 1) == 0.0);
}

TEST_CASE("top-movie selection counts ratings with deterministic ties") {
    RatingMatrix r;
    r.genre_count = 19;
    r.genres = {0, 0, 0};
    r.ratings = Matrix::Zero(3, 3);
    r.ratings.col(0) << 1, 2, 0;
    r.ratings.col(1) << 1, 2, 3;
    r.ratings.col(2) << 0, 2, 1;  // tie with movie 0 -> lower index first
    auto top = select_top_movies(r, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == 1);
    CHECK(top[1] == 0);
}

TEST_CASE("knn sparsification bounds the row occupancy") {
    RecFixture fx = synth_recommendation(30, 120, 0.3, 17);
    const int knn = 8;
    Multigraph g = build_movie_multigraph_for(fx.ratings, fx.movies, knn);
    for (int layer = 0; layer < 2; ++layer)
        for (int u = 0; u < g.num_nodes(); ++u) {
            int nonzeros = 0;
            for (int v = 0; v < g.num_nodes(); ++v)
                if (g.layer(layer)(u, v) != 0.0) ++nonzeros;
            CHECK(nonzeros <= 2 * knn);
        }
    // weights live in [0, 1] and the diagonal stays empty
    for (int layer = 0; layer < 2; ++layer) {
        CHECK(g.layer(layer).minCoeff() >= 0.0);
        CHECK(g.layer(layer).maxCoeff() <= 1.0 + 1e-12);
        CHECK(g.layer(layer).diagonal().norm() == 0.0);
    }
}

TEST_CASE("permuting the movie list permutes the graph accordingly") {
    RecFixture fx = synth_recommendation(12, 60, 0.2, 37);
    Multigraph base = build_movie_multigraph_for(fx.ratings, fx.movies, 4);

    std::vector<int> moved = fx.movies;
    std::swap(moved[0], moved[5]);
    std::swap(moved[2], moved[9]);
    Multigraph permuted = build_movie_multigraph_for(fx.ratings, moved, 4);
    // node j of `permuted` is movie moved[j]; map back through fx.movies
    std::vector<int> where(fx.movies.size());
    for (size_t j = 0; j < moved.size(); ++j) {
        auto it = std::find(fx.movies.begin(), fx.movies.end(), moved[j]);
        where[j] = static_cast<int>(it - fx.movies.begin());
    }
    for (int layer = 0; layer < 2; ++layer)
        for (size_t a = 0; a < moved.size(); ++a)
            for (size_t b = 0; b < moved.size(); ++b)
                CHECK(permuted.layer(layer)(static_cast<int>(a), static_cast<int>(b)) ==
                      base.layer(layer)(where[a], where[b]));
}

TEST_CASE("multigraph construction is invariant to user order") {
    RecFixture fx = synth_recommendation(16, 60, 0.2, 23);
    Multigraph base = build_movie_multigraph_for(fx.ratings, fx.movies, 5);

    std::vector<int> users(static_cast<size_t>(fx.ratings.num_users()));
    std::iota(users.begin(), users.end(), 0);
    std::mt19937_64 g(29);
    for (size_t i = users.size(); i > 1; --i) std::swap(users[i - 1], users[static_cast<size_t>(g() % i)]);
    RatingMatrix shuffled = restrict_users(fx.ratings, users);
    Multigraph moved = build_movie_multigraph_for(shuffled, fx.movies, 5);
    for (int layer = 0; layer < 2; ++layer)
        CHECK((base.layer(layer) - moved.layer(layer)).norm() < 1e-12);
}

TEST_CASE("zero-noise twins make the held-out rating exactly recoverable") {
    RecFixture fx = synth_recommendation(20, 80, 0.0, 31);
    // the planted twin of the target is its strongest rating-layer neighbor
    const Matrix& pearson = fx.graph.layer(0);
    int best = -1;
    double best_w = -1.0;
    for (int v = 0; v < fx.graph.num_nodes(); ++v)
        if (v != fx.target && pearson(fx.target, v) > best_w) {
            best_w = pearson(fx.target, v);
            best = v;
        }
    REQUIRE(best >= 0);
    CHECK(best_w == doctest::Approx(1.0));

    auto signals = user_signals(fx.ratings, fx.movies, fx.target);
    REQUIRE(!signals.empty());
    for (const auto& s : signals) CHECK(s(fx.target) == s(best));  // 1-NN prediction is exact
}

TEST_CASE("the default-size synthetic fixture builds quickly") {
    auto start = std::chrono::steady_clock::now();
    RecFixture fx = synth_recommendation(50, 200, 0.3, 53);
    auto signals = user_signals(fx.ratings, fx.movies, fx.target);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(signals.size() == 200);
    CHECK(seconds < 5.0);
}

TEST_CASE("synthesis is deterministic per seed") {
    RecFixture a = synth_recommendation(15, 50, 0.4, 99);
    RecFixture b = synth_recommendation(15, 50, 0.4, 99);
    CHECK((a.ratings.ratings - b.ratings.ratings).norm() == 0.0);
    CHECK(a.movies == b.movies);
    for (int layer = 0; layer < 2; ++layer)
        CHECK((a.graph.layer(layer) - b.graph.layer(layer)).norm() == 0.0);

    RecFixture c = synth_recommendation(15, 50, 0.4, 100);
    CHECK((a.ratings.ratings - c.ratings.ratings).norm() > 0.0);
}

TEST_CASE("full MovieLens-100K loads when the dataset directory is present") {
    const char* dir = std::getenv("NCASP_MOVIELENS_DIR");
    if (dir == nullptr || !std::filesystem::exists(std::filesystem::path(dir) / "u.data")) {
        MESSAGE("NCASP_MOVIELENS_DIR not set; skipping the full-dataset check");
        return;
    }
    RatingMatrix r = load_movielens(dir);
    CHECK(r.num_users() == 943);
    int ratings = 0;
    for (int u = 0; u < r.num_users(); ++u)
        for (int m = 0; m < r.num_movies(); ++m)
            if (r.ratings(u, m) != 0.0) ++ratings;
    CHECK(ratings + r.duplicate_records == 100000);
}

TEST_CASE("train/test split: ratio, determinism, label extraction") {
    RecFixture fx = synth_recommendation(12, 100, 0.3, 41);
    auto signals = user_signals(fx.ratings, fx.movies, fx.target);
    REQUIRE(signals.size() == 100);  // everyone rates the target by construction

    auto split = train_test_split(signals, fx.target, 0.9, 7);
    CHECK(split.train_inputs.size() == 90);
    CHECK(split.test_inputs.size() == 10);
    for (const auto& s : split.train_inputs) CHECK(s(fx.target) == 0.0);
    for (double label : split.train_labels) {
        CHECK(label >= 1.0);
        CHECK(label <= 5.0);
    }

    auto again = train_test_split(signals, fx.target, 0.9, 7);
    for (size_t i = 0; i < split.train_labels.size(); ++i)
        CHECK(split.train_labels[i] == again.train_labels[i]);

    // the full ratio grid stays usable
    for (double ratio : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK_NOTHROW(train_test_split(signals, fx.target, ratio, 3));
    CHECK_THROWS_AS(train_test_split(signals, fx.target, 0.001, 3), std::invalid_argument);
}
