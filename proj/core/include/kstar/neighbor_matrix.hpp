#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/distance.hpp"

namespace kstar {

// For each member of one class, a binary vector over neighbor ranks 1..n-1:
// 1 where the ranked neighbor shares the class, 0 where it differs. Every row
// holds exactly |S_c|-1 ones, and the first 0 of the row for sample p sits at
// column rank(p)-1.
struct NeighborMatrix {
    int class_id = 0;
    std::size_t cols = 0;                  // n - 1
    std::vector<std::uint32_t> row_order;  // sample indices in display order
    std::vector<std::vector<std::uint8_t>> rows;
};

// Rows are ordered by descending rank of the first differently-labeled
// neighbor (ties by ascending sample index), which makes the same-class mass
// of a clustered class sit left of the diagonal.
NeighborMatrix build_neighbor_matrix(const EmbeddingSet& set, const ClassIndex& index, int c,
                                     const Metric& m, int threads = 1);

// 0/1 cells, one row per line.
void write_matrix_csv(const NeighborMatrix& mat, const std::string& path);

// Same-class cells green (#2ca02c), different-class gray (#bbbbbb), with a
// dashed diagonal from (rank 0, first row) to (rank |S_c|, last row) as a
// reading aid. Cells are run-length merged so large matrices stay small.
void write_matrix_svg(const NeighborMatrix& mat, const std::string& path,
                      const std::string& class_name);

} // namespace kstar
