#include "egat/sparse.hpp"

#include <algorithm>
#include <string>

namespace egat {

bool SparseMapping::contains(int r, int c) const {
    const std::array<int, 3> key{r, c, 0};
    return std::binary_search(entries.begin(), entries.end(), key);
}

bool SparseMapping::contains(int r, int c, int k) const {
    const std::array<int, 3> key{r, c, k};
    return std::binary_search(entries.begin(), entries.end(), key);
}

void SparseMapping::validate() const {
    if (rank() != 2 && rank() != 3) throw StructuralError("SparseMapping: rank must be 2 or 3");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        for (int d = 0; d < rank(); ++d) {
            if (e[static_cast<std::size_t>(d)] < 0 ||
                e[static_cast<std::size_t>(d)] >= shape[static_cast<std::size_t>(d)]) {
                throw StructuralError("SparseMapping: coordinate out of range");
            }
        }
        if (rank() == 2 && e[2] != 0) throw StructuralError("SparseMapping: rank-2 entry uses dim 3");
        if (i > 0 && !(entries[i - 1] < e)) {
            throw StructuralError("SparseMapping: entries not sorted or duplicated");
        }
    }
}

IndexMap IndexMap::build(std::vector<int> src, int num_src_rows) {
    IndexMap map;
    map.src = std::move(src);
    map.num_src_rows = num_src_rows;
    map.t_offsets.assign(static_cast<std::size_t>(num_src_rows) + 1, 0);
    for (int r : map.src) {
        if (r >= 0) map.t_offsets[static_cast<std::size_t>(r) + 1] += 1;
    }
    for (int r = 0; r < num_src_rows; ++r) {
        map.t_offsets[static_cast<std::size_t>(r) + 1] += map.t_offsets[static_cast<std::size_t>(r)];
    }
    map.t_slots.resize(static_cast<std::size_t>(map.t_offsets.back()));
    std::vector<int> cursor(map.t_offsets.begin(), map.t_offsets.end() - 1);
    for (std::size_t s = 0; s < map.src.size(); ++s) {
        const int r = map.src[s];
        if (r >= 0) map.t_slots[static_cast<std::size_t>(cursor[static_cast<std::size_t>(r)]++)] =
            static_cast<int>(s);
    }
    return map;
}

CsrMatrix CsrMatrix::from_coo(int rows, int cols,
                              const std::vector<std::array<int, 2>>& coords,
                              const std::vector<double>& vals) {
    if (coords.size() != vals.size()) throw StructuralError("CsrMatrix: coords/values size mismatch");
    std::vector<std::size_t> order(coords.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return coords[a] < coords[b];
    });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx.reserve(coords.size());
    m.values.reserve(coords.size());
    for (std::size_t i : order) {
        const auto& [r, c] = coords[i];
        if (r < 0 || r >= rows || c < 0 || c >= cols) {
            throw StructuralError("CsrMatrix: coordinate out of range");
        }
        m.offsets[static_cast<std::size_t>(r) + 1] += 1;
        m.col_idx.push_back(c);
        m.values.push_back(vals[i]);
    }
    for (int r = 0; r < rows; ++r) m.offsets[static_cast<std::size_t>(r) + 1] += m.offsets[static_cast<std::size_t>(r)];
    return m;
}

CsrMatrix CsrMatrix::from_mapping_2d(const SparseMapping& m) {
    if (m.rank() != 3) throw StructuralError("from_mapping_2d: rank-3 mapping required");
    std::vector<std::array<int, 2>> coords;
    coords.reserve(m.entries.size());
    for (const auto& e : m.entries) {
        coords.push_back({e[0] * m.shape[1] + e[1], e[2]});
    }
    std::vector<double> vals(coords.size(), 1.0);
    return from_coo(m.shape[0] * m.shape[1], m.shape[2], coords, vals);
}

CsrMatrix CsrMatrix::transposed() const {
    std::vector<std::array<int, 2>> coords;
    std::vector<double> vals;
    coords.reserve(col_idx.size());
    vals.reserve(col_idx.size());
    for (int r = 0; r < rows; ++r) {
        for (int t = offsets[static_cast<std::size_t>(r)]; t < offsets[static_cast<std::size_t>(r) + 1]; ++t) {
            coords.push_back({col_idx[static_cast<std::size_t>(t)], r});
            vals.push_back(values[static_cast<std::size_t>(t)]);
        }
    }
    return from_coo(cols, rows, coords, vals);
}

} // namespace egat
