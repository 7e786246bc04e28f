#ifndef EGAT_GRAPH_HPP
#define EGAT_GRAPH_HPP

#include <utility>
#include <vector>

#include "egat/errors.hpp"

namespace egat {

/// Dense row-major matrix of per-node or per-edge features.
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    FeatureMatrix(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    double* row(int r) { return values.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return values.data() + static_cast<std::size_t>(r) * cols; }
};

/// Undirected simple graph. Edges are stored canonically with i <= j, in
/// input order; virtual self-loops appended by add_virtual_self_loops are
/// flagged so downstream code can tell them from original edges.
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<char> self_loop_flags;

    int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Validates endpoints and duplicates, canonicalizes each pair to i <= j.
Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edge_list);

/// One topological feature per edge: the number of other edges sharing at
/// least one endpoint with it. Must run before self-loop augmentation.
FeatureMatrix synthesize_edge_degree_features(const Graph& g);

/// Appends an (i, i) edge for every node that lacks one. The new edge's
/// features are the per-dimension mean of the node's incident edge features;
/// isolated nodes get zeros. Returns the augmented graph and feature matrix.
std::pair<Graph, FeatureMatrix> add_virtual_self_loops(const Graph& g,
                                                       const FeatureMatrix& edge_feats);

/// Edges incident to each node (indices into g.edges), in edge order.
std::vector<std::vector<int>> incident_edges(const Graph& g);

/// Node degrees counting each incident edge once (self-loop counts once).
std::vector<int> node_degrees(const Graph& g);

} // namespace egat

#endif // EGAT_GRAPH_HPP
