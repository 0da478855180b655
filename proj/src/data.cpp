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

#include "ncasp/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ncasp/rng.hpp"

namespace ncasp {

namespace {

constexpr int kMovieLensGenres = 19;

std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

}  // namespace

RatingMatrix load_movielens(const std::string& dir) {
    const std::string item_path = dir + "/u.item";
    const std::string data_path = dir + "/u.data";
    std::ifstream items(item_path);
    if (!items) throw std::runtime_error("load_movielens: missing " + item_path);
    std::ifstream data(data_path);
    if (!data) throw std::runtime_error("load_movielens: missing " + data_path);

    RatingMatrix out;
    out.genre_count = kMovieLensGenres;
    std::string line;
    int line_no = 0;
    int max_movie = 0;
    while (std::getline(items, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_on(line, '|');
        if (fields.size() < static_cast<size_t>(kMovieLensGenres) + 1)
            throw std::runtime_error("load_movielens: malformed item record at u.item line " +
                                     std::to_string(line_no));
        int id = 0;
        try {
            id = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw std::runtime_error("load_movielens: malformed movie id at u.item line " +
                                     std::to_string(line_no));
        }
        if (id < 1) throw std::runtime_error("load_movielens: movie id out of range at u.item line " +
                                             std::to_string(line_no));
        max_movie = std::max(max_movie, id);
        if (static_cast<size_t>(id) > out.genres.size()) out.genres.resize(static_cast<size_t>(id), 0);
        std::uint32_t mask = 0;
        for (int g = 0; g < kMovieLensGenres; ++g) {
            const std::string& flag = fields[fields.size() - static_cast<size_t>(kMovieLensGenres) + g];
            if (flag == "1") mask |= (1u << g);
            else if (flag != "0")
                throw std::runtime_error("load_movielens: malformed genre flag at u.item line " +
                                         std::to_string(line_no));
        }
        out.genres[static_cast<size_t>(id - 1)] = mask;
    }

    struct Record {
        int user, movie, rating;
    };
    std::vector<Record> records;
    int max_user = 0;
    line_no = 0;
    while (std::getline(data, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Record r{};
        long timestamp = 0;
        if (!(ls >> r.user >> r.movie >> r.rating >> timestamp) || r.user < 1 || r.movie < 1 ||
            r.rating < 1 || r.rating > 5)
            throw std::runtime_error("load_movielens: malformed rating at u.data line " +
                                     std::to_string(line_no));
        max_user = std::max(max_user, r.user);
        max_movie = std::max(max_movie, r.movie);
        records.push_back(r);
    }

    out.ratings = Matrix::Zero(max_user, max_movie);
    out.genres.resize(static_cast<size_t>(max_movie), 0);
    for (const auto& r : records) {
        if (out.ratings(r.user - 1, r.movie - 1) != 0.0) ++out.duplicate_records;  // last wins
        out.ratings(r.user - 1, r.movie - 1) = r.rating;
    }
    return out;
}

std::vector<int> select_top_movies(const RatingMatrix& data, int count) {
    if (count < 1 || count > data.num_movies())
        throw std::invalid_argument("select_top_movies: count out of range");
    std::vector<std::pair<int, int>> by_count;  // (-ratings, movie)
    for (int m = 0; m < data.num_movies(); ++m) {
        int c = 0;
        for (int u = 0; u < data.num_users(); ++u)
            if (data.ratings(u, m) != 0.0) ++c;
        by_count.emplace_back(-c, m);
    }
    std::sort(by_count.begin(), by_count.end());
    std::vector<int> movies;
    for (int i = 0; i < count; ++i) movies.push_back(by_count[static_cast<size_t>(i)].second);
    return movies;
}

namespace {

double pearson_weight(const Matrix& ratings, int a, int b, NegativeCorrelation neg) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    int n = 0;
    for (int u = 0; u < ratings.rows(); ++u) {
        double ra = ratings(u, a), rb = ratings(u, b);
        if (ra == 0.0 || rb == 0.0) continue;
        ++n;
        sa += ra;
        sb += rb;
        saa += ra * ra;
        sbb += rb * rb;
        sab += ra * rb;
    }
    if (n < 2) return 0.0;
    double var_a = saa - sa * sa / n;
    double var_b = sbb - sb * sb / n;
    if (var_a <= 0.0 || var_b <= 0.0) return 0.0;  // constant co-rating vector
    double r = (sab - sa * sb / n) / std::sqrt(var_a * var_b);
    r = std::clamp(r, -1.0, 1.0);
    if (neg == NegativeCorrelation::absolute) return std::abs(r);
    return r > 0.0 ? r : 0.0;
}

double jaccard_weight(std::uint32_t a, std::uint32_t b) {
    const int inter = __builtin_popcount(a & b);
    const int uni = __builtin_popcount(a | b);
    return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

// keep the knn strongest per row (higher weight first, then lower index),
// symmetrize by max
Matrix knn_sparsify(const Matrix& w, int knn) {
    const int n = static_cast<int>(w.rows());
    Matrix kept = Matrix::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        std::vector<std::pair<double, int>> candidates;
        for (int v = 0; v < n; ++v)
            if (v != u && w(u, v) > 0.0) candidates.emplace_back(w(u, v), v);
        std::sort(candidates.begin(), candidates.end(), [](const auto& l, const auto& r) {
            if (l.first != r.first) return l.first > r.first;
            return l.second < r.second;
        });
        const int keep = std::min<int>(knn, static_cast<int>(candidates.size()));
        for (int t = 0; t < keep; ++t) kept(u, candidates[static_cast<size_t>(t)].second) =
            candidates[static_cast<size_t>(t)].first;
    }
    return kept.cwiseMax(kept.transpose());
}

}  // namespace

Multigraph build_movie_multigraph_for(const RatingMatrix& data, const std::vector<int>& movies,
                                      int knn, NegativeCorrelation neg) {
    const int n = static_cast<int>(movies.size());
    if (n < 2) throw std::invalid_argument("build_movie_multigraph_for: need at least two movies");
    if (knn < 1) throw std::invalid_argument("build_movie_multigraph_for: knn must be positive");

    Matrix pearson = Matrix::Zero(n, n);
    Matrix jaccard = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double pw = pearson_weight(data.ratings, movies[static_cast<size_t>(a)],
                                       movies[static_cast<size_t>(b)], neg);
            double jw = jaccard_weight(data.genres[static_cast<size_t>(movies[static_cast<size_t>(a)])],
                                       data.genres[static_cast<size_t>(movies[static_cast<size_t>(b)])]);
            pearson(a, b) = pearson(b, a) = pw;
            jaccard(a, b) = jaccard(b, a) = jw;
        }
    pearson = knn_sparsify(pearson, knn);
    jaccard = knn_sparsify(jaccard, knn);

    Multigraph g(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (pearson(a, b) > 0.0) g.add_edge(0, a, b, pearson(a, b));
            if (jaccard(a, b) > 0.0) g.add_edge(1, a, b, jaccard(a, b));
        }
    return g;
}

Multigraph build_movie_multigraph(const RatingMatrix& data, int top_movies, int knn,
                                  NegativeCorrelation neg) {
    return build_movie_multigraph_for(data, select_top_movies(data, top_movies), knn, neg);
}

RecFixture synth_recommendation(int n_movies, int n_users, double noise, std::uint64_t seed) {
    if (n_movies < 4 || n_users < 4)
        throw std::invalid_argument("synth_recommendation: fixture too small");
    RecFixture fx;
    fx.ratings.genre_count = 8;
    fx.ratings.ratings = Matrix::Zero(n_users, n_movies);
    fx.ratings.genres.resize(static_cast<size_t>(n_movies), 0);

    std::mt19937_64 g(seed_mix(seed, 0xda7a));
    std::vector<double> movie_angle(static_cast<size_t>(n_movies));
    for (int m = 0; m < n_movies; ++m) {
        movie_angle[static_cast<size_t>(m)] = uniform(g, 0.0, 2.0 * M_PI);
        int genre = static_cast<int>(movie_angle[static_cast<size_t>(m)] / (2.0 * M_PI) * 8.0) % 8;
        std::uint32_t mask = 1u << genre;
        if (uniform01(g) < 0.4) mask |= 1u << ((genre + 1) % 8);
        fx.ratings.genres[static_cast<size_t>(m)] = mask;
    }
    // movie 1 is a twin of movie 0: same factor, same genres
    movie_angle[1] = movie_angle[0];
    fx.ratings.genres[1] = fx.ratings.genres[0];

    for (int u = 0; u < n_users; ++u) {
        double user_angle = uniform(g, 0.0, 2.0 * M_PI);
        for (int m = 0; m < n_movies; ++m) {
            // everyone rates the target pair; other movies are rated sparsely
            bool rated = m <= 1 || uniform01(g) < 0.6;
            if (!rated) continue;
            double affinity = std::cos(movie_angle[static_cast<size_t>(m)] - user_angle);
            double value = 3.0 + 2.0 * affinity + noise * gaussian(g);
            fx.ratings.ratings(u, m) = std::clamp(std::round(value), 1.0, 5.0);
        }
        // the twin always matches the target column exactly
        fx.ratings.ratings(u, 1) = fx.ratings.ratings(u, 0);
    }

    fx.movies = select_top_movies(fx.ratings, n_movies);
    fx.target = static_cast<int>(
        std::find(fx.movies.begin(), fx.movies.end(), 0) - fx.movies.begin());
    fx.graph = build_movie_multigraph_for(fx.ratings, fx.movies, std::min(8, n_movies - 1));
    return fx;
}

std::vector<Vector> user_signals(const RatingMatrix& data, const std::vector<int>& movies,
                                 int target) {
    if (target < 0 || target >= static_cast<int>(movies.size()))
        throw std::invalid_argument("user_signals: target out of range");
    std::vector<Vector> signals;
    for (int u = 0; u < data.num_users(); ++u) {
        if (data.ratings(u, movies[static_cast<size_t>(target)]) == 0.0) continue;
        Vector s(static_cast<Eigen::Index>(movies.size()));
        for (size_t j = 0; j < movies.size(); ++j) s(static_cast<Eigen::Index>(j)) =
            data.ratings(u, movies[j]);
        signals.push_back(std::move(s));
    }
    return signals;
}

SplitSignals train_test_split(const std::vector<Vector>& signals, int target, double ratio,
                              std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) throw std::invalid_argument("train_test_split: ratio in (0,1)");
    const int n = static_cast<int>(signals.size());
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 g(seed_mix(seed, 0x5917));
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[static_cast<size_t>(g() % i)]);

    const int train_count = static_cast<int>(std::lround(ratio * n));
    if (train_count < 1 || train_count >= n)
        throw std::invalid_argument("train_test_split: a side would be empty");

    SplitSignals out;
    for (int i = 0; i < n; ++i) {
        const Vector& s = signals[static_cast<size_t>(order[static_cast<size_t>(i)])];
        Vector input = s;
        double label = input(target);
        input(target) = 0.0;  // held out
        if (i < train_count) {
            out.train_inputs.push_back(std::move(input));
            out.train_labels.push_back(label);
        } else {
            out.test_inputs.push_back(std::move(input));
            out.test_labels.push_back(label);
        }
    }
    return out;
}

RatingMatrix restrict_users(const RatingMatrix& data, const std::vector<int>& users) {
    RatingMatrix out;
    out.genres = data.genres;
    out.genre_count = data.genre_count;
    out.ratings = Matrix::Zero(static_cast<Eigen::Index>(users.size()), data.num_movies());
    for (size_t i = 0; i < users.size(); ++i) out.ratings.row(static_cast<Eigen::Index>(i)) =
        data.ratings.row(users[i]);
    return out;
}

}  // namespace ncasp
