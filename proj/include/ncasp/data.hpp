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

#include <cstdint>
#include <string>
#include <vector>

#include "ncasp/multigraph.hpp"
#include "ncasp/shift_set.hpp"

namespace ncasp {

/// User-by-movie ratings in {1..5} with 0 marking a missing entry, plus one
/// genre bitset per movie.
struct RatingMatrix {
    Matrix ratings;                     // users x movies
    std::vector<std::uint32_t> genres;  // bitmask per movie
    int genre_count = 0;
    int duplicate_records = 0;  // (user, movie) pairs seen more than once; last wins

    int num_users() const { return static_cast<int>(ratings.rows()); }
    int num_movies() const { return static_cast<int>(ratings.cols()); }
};

/// Parses a MovieLens-100K style directory: tab-separated ratings in u.data
/// (user, item, rating, timestamp) and pipe-separated items in u.item with 19
/// trailing genre flags. Malformed lines are rejected with their line number.
RatingMatrix load_movielens(const std::string& dir);

/// The `count` most-rated movies; ties broken toward the lower movie index.
std::vector<int> select_top_movies(const RatingMatrix& data, int count);

enum class NegativeCorrelation { clip, absolute };

/// Two-layer movie graph on an explicit node list: layer 0 holds Pearson
/// correlations over co-rating users (fewer than two co-raters or degenerate
/// variance gives weight 0), layer 1 Jaccard similarity of genre bitsets.
/// Each node keeps its knn strongest edges per layer (ties: higher weight,
/// then lower neighbor index); the kept sets are symmetrized by max.
Multigraph build_movie_multigraph_for(const RatingMatrix& data, const std::vector<int>& movies,
                                      int knn, NegativeCorrelation neg = NegativeCorrelation::clip);

/// Same pipeline on the top-rated movie selection.
Multigraph build_movie_multigraph(const RatingMatrix& data, int top_movies, int knn,
                                  NegativeCorrelation neg = NegativeCorrelation::clip);

/// A desk-scale recommendation task: synthetic two-factor ratings, the movie
/// multigraph built by the Pearson/Jaccard pipeline, and the target node
/// whose rating is predicted. Node j of the graph is movie movies[j].
struct RecFixture {
    RatingMatrix ratings;
    std::vector<int> movies;
    int target = 0;  // node index
    Multigraph graph;
};

/// Latent two-factor rating model with planted twin movies (the target and
/// its duplicate share rating columns, so the held-out rating is exactly
/// recoverable at zero noise). Deterministic per seed.
RecFixture synth_recommendation(int n_movies, int n_users, double noise, std::uint64_t seed);

/// One signal per user who rated the target: the user's ratings over the
/// graph nodes (target rating included; splitting removes it).
std::vector<Vector> user_signals(const RatingMatrix& data, const std::vector<int>& movies,
                                 int target);

struct SplitSignals {
    std::vector<Vector> train_inputs, test_inputs;  // target entry zeroed
    std::vector<double> train_labels, test_labels;  // the held-out target ratings
};

/// Deterministic shuffled split; the target-movie rating is removed from each
/// input and kept as its label. Both sides must be non-empty.
SplitSignals train_test_split(const std::vector<Vector>& signals, int target, double ratio,
                              std::uint64_t seed);

/// Ratings restricted to a user subset, for rebuilding the multigraph from a
/// smaller training set (estimation-error perturbations are measured, not
/// injected).
RatingMatrix restrict_users(const RatingMatrix& data, const std::vector<int>& users);

}  // namespace ncasp
