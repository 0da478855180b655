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

#include <string>
#include <vector>

#include "ncasp/shift_set.hpp"

namespace ncasp {

/// A set of nodes with several weighted edge layers, one adjacency matrix per
/// layer. Adjacency matrices have zero diagonal and finite weights. Layers
/// added through add_edge are symmetric by construction; add_directed_edge
/// leaves the transpose entry alone.
class Multigraph {
  public:
    Multigraph() = default;  // empty placeholder; every operation requires a sized graph
    Multigraph(int num_nodes, int num_layers);

    int num_nodes() const { return num_nodes_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    const Matrix& layer(int r) const { return layers_[static_cast<size_t>(r)]; }

    void add_edge(int layer, int u, int v, double weight);           // sets both (u,v) and (v,u)
    void add_directed_edge(int layer, int u, int v, double weight);  // sets (u,v) only

    /// File format: header "n m", then one edge per line "layer u v weight".
    /// Edges load symmetrically. Out-of-range nodes or layers are rejected
    /// with the offending line number.
    static Multigraph load(const std::string& path);
    void save(const std::string& path) const;

  private:
    void check_edge(int layer, int u, int v, double weight) const;

    int num_nodes_ = 0;
    std::vector<Matrix> layers_;
};

enum class ShiftNormalization { none, degree, spectral };

/// One shift operator per edge layer. `spectral` divides each layer by its
/// operator 2-norm, `degree` by its maximum absolute row sum. A zero layer
/// cannot be normalized and is rejected.
ShiftSet shift_from_multigraph(const Multigraph& graph,
                               ShiftNormalization normalization = ShiftNormalization::spectral);

}  // namespace ncasp
