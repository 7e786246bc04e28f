#ifndef EGAT_STRUCTURES_HPP
#define EGAT_STRUCTURES_HPP

#include <utility>
#include <vector>

#include "egat/graph.hpp"
#include "egat/sparse.hpp"

namespace egat {

/// Node or edge features rearranged into adjacency form: slot (r, c) holds
/// the feature row of the entity mapped there. Slots are sorted by (r, c).
/// When the mapping carries no diagonal entries (the edge-adjacency case),
/// diagonal slots read as zero vectors.
struct AdjacencyFeatureTensor {
    int rows = 0;
    int cols = 0;
    int feat_dim = 0;
    std::vector<std::array<int, 2>> slots;
    std::vector<int> source_rows;  // per slot, row index into the scattered matrix
    std::vector<double> values;    // per slot, feat_dim reals
    bool implicit_zero_diagonal = false;

    /// Feature vector at (r, c); empty if the slot is absent and not an
    /// implicit zero diagonal slot.
    std::vector<double> value_at(int r, int c) const;
    bool has_slot(int r, int c) const;
};

/// A_H (N x N, both orientations plus the self-loop diagonal) and
/// M_E (N x N x M, one-hot over edges in the last dimension).
std::pair<SparseMapping, SparseMapping> build_node_structures(const Graph& g);

/// A_E (M x M, edges adjacent when they share an endpoint, plus the
/// identity diagonal) and M_H (M x M x N, one-hot of the shared node for
/// distinct adjacent edges; diagonal slots carry nothing).
std::pair<SparseMapping, SparseMapping> build_line_graph(const Graph& g);

/// Rearranges feats into adjacency form through the mapping. Equivalent to
/// reshaping the mapping to (rows*cols) x last, multiplying, and reshaping
/// back.
AdjacencyFeatureTensor scatter_to_adjacency(const SparseMapping& mapping,
                                            const FeatureMatrix& feats);

/// Flattened neighborhood slots for one attention block. Slot s carries the
/// pair (center[s], neighbor[s]) and the entity between them (via[s]): the
/// connecting edge in the node block, the shared node in the edge block
/// (-1 on the diagonal, which reads as the zero virtual node).
struct AttentionPlan {
    Segments seg;      // one segment per center, slots sorted by (center, neighbor)
    IndexMap center;
    IndexMap neighbor;
    IndexMap via;
    std::vector<int> slot_seg;  // per slot, its segment id (== center index)
};

/// Everything the layers need, prebuilt once per graph.
struct GraphStructures {
    Graph graph;  // self-loop augmented
    SparseMapping a_h, m_e, a_e, m_h;
    AttentionPlan node_plan;
    AttentionPlan edge_plan;

    int num_nodes() const { return graph.num_nodes; }
    int num_edges() const { return graph.num_edges(); }
};

/// Builds mappings and attention plans for a self-loop augmented graph.
GraphStructures build_structures(const Graph& augmented);

} // namespace egat

#endif // EGAT_STRUCTURES_HPP
