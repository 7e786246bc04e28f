#include "egat/structures.hpp"

#include <algorithm>
#include <string>

namespace egat {

namespace {

std::vector<int> shared_endpoints(const std::pair<int, int>& a, const std::pair<int, int>& b) {
    std::vector<int> shared;
    for (int v : {a.first, a.second}) {
        if (v == b.first || v == b.second) {
            if (shared.empty() || shared.back() != v) shared.push_back(v);
        }
    }
    std::sort(shared.begin(), shared.end());
    shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
    return shared;
}

} // namespace

std::pair<SparseMapping, SparseMapping> build_node_structures(const Graph& g) {
    const int n = g.num_nodes;
    const int m = g.num_edges();
    SparseMapping a_h, m_e;
    a_h.shape = {n, n};
    m_e.shape = {n, n, m};
    for (int p = 0; p < m; ++p) {
        const auto& [i, j] = g.edges[static_cast<std::size_t>(p)];
        m_e.entries.push_back({i, j, p});
        a_h.entries.push_back({i, j, 0});
        if (i != j) {
            m_e.entries.push_back({j, i, p});
            a_h.entries.push_back({j, i, 0});
        }
    }
    std::sort(a_h.entries.begin(), a_h.entries.end());
    std::sort(m_e.entries.begin(), m_e.entries.end());
    return {std::move(a_h), std::move(m_e)};
}

std::pair<SparseMapping, SparseMapping> build_line_graph(const Graph& g) {
    const int n = g.num_nodes;
    const int m = g.num_edges();
    SparseMapping a_e, m_h;
    a_e.shape = {m, m};
    m_h.shape = {m, m, n};

    // Edges adjacent to each edge, found through shared endpoints.
    const auto inc = incident_edges(g);
    for (int p = 0; p < m; ++p) {
        a_e.entries.push_back({p, p, 0});
        const auto& ep = g.edges[static_cast<std::size_t>(p)];
        std::vector<int> neighbors;
        for (int v : {ep.first, ep.second}) {
            for (int q : inc[static_cast<std::size_t>(v)]) {
                if (q != p) neighbors.push_back(q);
            }
        }
        std::sort(neighbors.begin(), neighbors.end());
        neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
        for (int q : neighbors) {
            a_e.entries.push_back({p, q, 0});
            // Smallest shared node index when more than one endpoint is shared.
            const auto shared = shared_endpoints(ep, g.edges[static_cast<std::size_t>(q)]);
            m_h.entries.push_back({p, q, shared.front()});
        }
    }
    std::sort(a_e.entries.begin(), a_e.entries.end());
    std::sort(m_h.entries.begin(), m_h.entries.end());
    return {std::move(a_e), std::move(m_h)};
}

AdjacencyFeatureTensor scatter_to_adjacency(const SparseMapping& mapping,
                                            const FeatureMatrix& feats) {
    if (mapping.rank() != 3) {
        throw StructuralError("scatter_to_adjacency: rank-3 mapping required");
    }
    if (mapping.shape[2] != feats.rows) {
        throw StructuralError("scatter_to_adjacency: mapping last dimension (" +
                              std::to_string(mapping.shape[2]) + ") does not match feature rows (" +
                              std::to_string(feats.rows) + ")");
    }
    AdjacencyFeatureTensor out;
    out.rows = mapping.shape[0];
    out.cols = mapping.shape[1];
    out.feat_dim = feats.cols;
    out.slots.reserve(mapping.nnz());
    out.source_rows.reserve(mapping.nnz());
    out.values.reserve(mapping.nnz() * static_cast<std::size_t>(feats.cols));
    bool any_diagonal = false;
    for (const auto& e : mapping.entries) {  // entries sorted, so slots are too
        out.slots.push_back({e[0], e[1]});
        out.source_rows.push_back(e[2]);
        const double* row = feats.row(e[2]);
        out.values.insert(out.values.end(), row, row + feats.cols);
        if (e[0] == e[1]) any_diagonal = true;
    }
    out.implicit_zero_diagonal = !any_diagonal && out.rows == out.cols;
    return out;
}

std::vector<double> AdjacencyFeatureTensor::value_at(int r, int c) const {
    const std::array<int, 2> key{r, c};
    const auto it = std::lower_bound(slots.begin(), slots.end(), key);
    if (it != slots.end() && *it == key) {
        const std::size_t s = static_cast<std::size_t>(it - slots.begin());
        const auto base = values.begin() + static_cast<std::ptrdiff_t>(s * feat_dim);
        return {base, base + feat_dim};
    }
    if (implicit_zero_diagonal && r == c && r < rows) {
        return std::vector<double>(static_cast<std::size_t>(feat_dim), 0.0);
    }
    return {};
}

bool AdjacencyFeatureTensor::has_slot(int r, int c) const {
    const std::array<int, 2> key{r, c};
    return std::binary_search(slots.begin(), slots.end(), key);
}

namespace {

// Slots come from the mapping tensor: one slot per (center, neighbor) pair,
// carrying the mapped entity index (or -1 where the mapping has no entry,
// i.e. the edge-adjacency diagonal).
AttentionPlan build_plan(const SparseMapping& adjacency, const SparseMapping& mapping,
                         int num_centers, int num_neighbor_rows, int num_via_rows) {
    std::vector<int> centers, neighbors, vias;
    centers.reserve(adjacency.nnz());
    neighbors.reserve(adjacency.nnz());
    vias.reserve(adjacency.nnz());

    std::size_t mi = 0;
    for (const auto& e : adjacency.entries) {
        centers.push_back(e[0]);
        neighbors.push_back(e[1]);
        while (mi < mapping.entries.size() &&
               std::array<int, 2>{mapping.entries[mi][0], mapping.entries[mi][1]} <
                   std::array<int, 2>{e[0], e[1]}) {
            ++mi;
        }
        if (mi < mapping.entries.size() && mapping.entries[mi][0] == e[0] &&
            mapping.entries[mi][1] == e[1]) {
            vias.push_back(mapping.entries[mi][2]);
            ++mi;
        } else {
            vias.push_back(-1);
        }
    }

    AttentionPlan plan;
    plan.seg.offsets.assign(static_cast<std::size_t>(num_centers) + 1, 0);
    for (int c : centers) plan.seg.offsets[static_cast<std::size_t>(c) + 1] += 1;
    for (int c = 0; c < num_centers; ++c) {
        plan.seg.offsets[static_cast<std::size_t>(c) + 1] +=
            plan.seg.offsets[static_cast<std::size_t>(c)];
    }
    plan.slot_seg = centers;  // adjacency entries are sorted by (center, neighbor)
    plan.center = IndexMap::build(std::move(centers), num_centers);
    plan.neighbor = IndexMap::build(std::move(neighbors), num_neighbor_rows);
    plan.via = IndexMap::build(std::move(vias), num_via_rows);
    return plan;
}

} // namespace

GraphStructures build_structures(const Graph& augmented) {
    // Every node must own a self-loop so no attention segment is empty.
    std::vector<char> has_loop(static_cast<std::size_t>(augmented.num_nodes), 0);
    for (const auto& [i, j] : augmented.edges) {
        if (i == j) has_loop[static_cast<std::size_t>(i)] = 1;
    }
    for (int v = 0; v < augmented.num_nodes; ++v) {
        if (!has_loop[static_cast<std::size_t>(v)]) {
            throw StructuralError("build_structures: node " + std::to_string(v) +
                                  " has no self-loop; augment the graph first");
        }
    }

    GraphStructures s;
    s.graph = augmented;
    std::tie(s.a_h, s.m_e) = build_node_structures(augmented);
    std::tie(s.a_e, s.m_h) = build_line_graph(augmented);
    const int n = augmented.num_nodes;
    const int m = augmented.num_edges();
    s.node_plan = build_plan(s.a_h, s.m_e, n, n, m);
    s.edge_plan = build_plan(s.a_e, s.m_h, m, m, n);
    return s;
}

} // namespace egat
