#include "egat/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace egat {

Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edge_list) {
    if (num_nodes < 0) throw StructuralError("build_graph: negative node count");
    Graph g;
    g.num_nodes = num_nodes;
    g.edges.reserve(edge_list.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edge_list) {
        if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes) {
            throw StructuralError("build_graph: endpoint (" + std::to_string(a) + ", " +
                                  std::to_string(b) + ") out of range for " +
                                  std::to_string(num_nodes) + " nodes");
        }
        const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
        if (!seen.insert(e).second) {
            throw StructuralError("build_graph: duplicate undirected edge (" +
                                  std::to_string(e.first) + ", " + std::to_string(e.second) + ")");
        }
        g.edges.push_back(e);
    }
    g.self_loop_flags.assign(g.edges.size(), 0);
    return g;
}

std::vector<std::vector<int>> incident_edges(const Graph& g) {
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(g.num_nodes));
    for (int p = 0; p < g.num_edges(); ++p) {
        const auto& [i, j] = g.edges[static_cast<std::size_t>(p)];
        inc[static_cast<std::size_t>(i)].push_back(p);
        if (j != i) inc[static_cast<std::size_t>(j)].push_back(p);
    }
    return inc;
}

std::vector<int> node_degrees(const Graph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.num_nodes), 0);
    for (const auto& [i, j] : g.edges) {
        deg[static_cast<std::size_t>(i)] += 1;
        if (j != i) deg[static_cast<std::size_t>(j)] += 1;
    }
    return deg;
}

FeatureMatrix synthesize_edge_degree_features(const Graph& g) {
    const auto deg = node_degrees(g);
    FeatureMatrix feats(g.num_edges(), 1);
    for (int p = 0; p < g.num_edges(); ++p) {
        const auto& [i, j] = g.edges[static_cast<std::size_t>(p)];
        // Edges sharing an endpoint with {i, j}; the edge itself is excluded.
        // In a simple graph the only edge incident to both i and j is p.
        const int count = (i == j) ? deg[static_cast<std::size_t>(i)] - 1
                                   : deg[static_cast<std::size_t>(i)] +
                                         deg[static_cast<std::size_t>(j)] - 2;
        feats.at(p, 0) = static_cast<double>(count);
    }
    return feats;
}

std::pair<Graph, FeatureMatrix> add_virtual_self_loops(const Graph& g,
                                                       const FeatureMatrix& edge_feats) {
    if (edge_feats.rows != g.num_edges()) {
        throw StructuralError("add_virtual_self_loops: feature rows (" +
                              std::to_string(edge_feats.rows) + ") do not match edge count (" +
                              std::to_string(g.num_edges()) + ")");
    }
    const int cols = edge_feats.cols;
    std::vector<char> has_loop(static_cast<std::size_t>(g.num_nodes), 0);
    for (const auto& [i, j] : g.edges) {
        if (i == j) has_loop[static_cast<std::size_t>(i)] = 1;
    }
    const auto inc = incident_edges(g);

    Graph out = g;
    std::vector<double> appended;
    for (int v = 0; v < g.num_nodes; ++v) {
        if (has_loop[static_cast<std::size_t>(v)]) continue;
        out.edges.emplace_back(v, v);
        out.self_loop_flags.push_back(1);
        std::vector<double> mean(static_cast<std::size_t>(cols), 0.0);
        const auto& edges_of_v = inc[static_cast<std::size_t>(v)];
        if (!edges_of_v.empty()) {
            for (int p : edges_of_v) {
                for (int c = 0; c < cols; ++c) mean[static_cast<std::size_t>(c)] += edge_feats.at(p, c);
            }
            for (double& m : mean) m /= static_cast<double>(edges_of_v.size());
        }
        appended.insert(appended.end(), mean.begin(), mean.end());
    }

    FeatureMatrix out_feats(out.num_edges(), cols);
    std::copy(edge_feats.values.begin(), edge_feats.values.end(), out_feats.values.begin());
    std::copy(appended.begin(), appended.end(),
              out_feats.values.begin() + static_cast<std::ptrdiff_t>(edge_feats.values.size()));
    return {std::move(out), std::move(out_feats)};
}

} // namespace egat
