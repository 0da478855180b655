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

#include "ncasp/multigraph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ncasp/linalg.hpp"

namespace ncasp {

Multigraph::Multigraph(int num_nodes, int num_layers) : num_nodes_(num_nodes) {
    if (num_nodes < 1) throw std::invalid_argument("Multigraph: need at least one node");
    if (num_layers < 1) throw std::invalid_argument("Multigraph: need at least one edge layer");
    layers_.assign(static_cast<size_t>(num_layers), Matrix::Zero(num_nodes, num_nodes));
}

void Multigraph::check_edge(int layer, int u, int v, double weight) const {
    if (layer < 0 || layer >= num_layers()) throw std::out_of_range("Multigraph: layer out of range");
    if (u < 0 || u >= num_nodes_ || v < 0 || v >= num_nodes_)
        throw std::out_of_range("Multigraph: node out of range");
    if (u == v) throw std::invalid_argument("Multigraph: self-loops not allowed (zero diagonal)");
    if (!std::isfinite(weight)) throw std::invalid_argument("Multigraph: non-finite weight");
}

void Multigraph::add_edge(int layer, int u, int v, double weight) {
    check_edge(layer, u, v, weight);
    layers_[static_cast<size_t>(layer)](u, v) = weight;
    layers_[static_cast<size_t>(layer)](v, u) = weight;
}

void Multigraph::add_directed_edge(int layer, int u, int v, double weight) {
    check_edge(layer, u, v, weight);
    layers_[static_cast<size_t>(layer)](u, v) = weight;
}

Multigraph Multigraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Multigraph::load: cannot open " + path);
    int n = 0, m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("Multigraph::load: malformed header in " + path);
    Multigraph g(n, m);
    std::string line;
    std::getline(in, line);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int layer = 0, u = 0, v = 0;
        double w = 0.0;
        if (!(ls >> layer >> u >> v >> w))
            throw std::runtime_error("Multigraph::load: malformed edge at line " + std::to_string(line_no));
        try {
            g.add_edge(layer, u, v, w);
        } catch (const std::exception& e) {
            throw std::runtime_error("Multigraph::load: line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return g;
}

void Multigraph::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Multigraph::save: cannot open " + path);
    out << num_nodes_ << ' ' << num_layers() << '\n';
    char buf[40];
    for (int r = 0; r < num_layers(); ++r)
        for (int u = 0; u < num_nodes_; ++u)
            for (int v = u + 1; v < num_nodes_; ++v) {
                double w = layers_[static_cast<size_t>(r)](u, v);
                if (w != 0.0) {
                    std::snprintf(buf, sizeof buf, "%.17g", w);
                    out << r << ' ' << u << ' ' << v << ' ' << buf << '\n';
                }
            }
}

ShiftSet shift_from_multigraph(const Multigraph& graph, ShiftNormalization normalization) {
    std::vector<Matrix> shifts;
    shifts.reserve(static_cast<size_t>(graph.num_layers()));
    for (int r = 0; r < graph.num_layers(); ++r) {
        Matrix s = graph.layer(r);
        switch (normalization) {
            case ShiftNormalization::none:
                break;
            case ShiftNormalization::degree: {
                double max_row = s.cwiseAbs().rowwise().sum().maxCoeff();
                if (max_row == 0.0)
                    throw std::invalid_argument("shift_from_multigraph: empty layer cannot be normalized");
                s /= max_row;
                break;
            }
            case ShiftNormalization::spectral: {
                double nrm = operator_norm(s);
                if (nrm == 0.0)
                    throw std::invalid_argument("shift_from_multigraph: empty layer cannot be normalized");
                s /= nrm;
                break;
            }
        }
        shifts.push_back(std::move(s));
    }
    return ShiftSet(std::move(shifts));
}

}  // namespace ncasp
