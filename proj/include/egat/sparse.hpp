#ifndef EGAT_SPARSE_HPP
#define EGAT_SPARSE_HPP

#include <array>
#include <vector>

#include "egat/errors.hpp"

namespace egat {

/// Coordinate-form 0/1 sparse tensor of rank 2 or 3. Houses the adjacency
/// matrices and the node/edge mapping tensors. Entries are kept sorted
/// lexicographically; only the unit coordinates are stored.
struct SparseMapping {
    std::vector<int> shape;                  // 2 or 3 dimensions
    std::vector<std::array<int, 3>> entries; // rank-2 entries use {r, c, 0}

    int rank() const { return static_cast<int>(shape.size()); }
    std::size_t nnz() const { return entries.size(); }

    bool contains(int r, int c) const;
    bool contains(int r, int c, int k) const;

    /// Checks coordinates are in range, sorted, and duplicate-free.
    void validate() const;
};

/// Per-segment slot ranges (CSR offsets over slot arrays).
struct Segments {
    std::vector<int> offsets;
    int count() const { return static_cast<int>(offsets.size()) - 1; }
    int total() const { return offsets.empty() ? 0 : offsets.back(); }
};

/// Slot-to-row index list plus its transpose, so scatter-style gradient
/// accumulation can run as a fixed-order gather per row.
struct IndexMap {
    std::vector<int> src;  // per slot; -1 reads as a zero row
    std::vector<int> t_offsets;
    std::vector<int> t_slots;
    int num_src_rows = 0;

    static IndexMap build(std::vector<int> src, int num_src_rows);
};

/// Compressed-sparse-row matrix with a lazily built transpose, so that
/// products against the transpose reduce in a fixed per-row order.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> offsets; // size rows + 1
    std::vector<int> col_idx;
    std::vector<double> values;

    static CsrMatrix from_coo(int rows, int cols,
                              const std::vector<std::array<int, 2>>& coords,
                              const std::vector<double>& vals);

    /// Flattens a rank-3 mapping to ((d0*d1) x d2), unit values.
    static CsrMatrix from_mapping_2d(const SparseMapping& m);

    CsrMatrix transposed() const;
};

} // namespace egat

#endif // EGAT_SPARSE_HPP
