#pragma once

#include <cstdint>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/distance.hpp"

namespace kstar {

struct NeighborEntry {
    std::uint32_t index;
    double dist;
};

// All n-1 other samples ordered by (distance to the query, sample index).
// The index tie-break makes the order total, so runs are reproducible even
// with exact duplicate points.
using NeighborOrder = std::vector<NeighborEntry>;

// Reference path, O(n log n) per query. Retained as the test oracle and for
// the neighbor matrix, which needs the whole order.
NeighborOrder sorted_neighbors(const EmbeddingSet& set, std::size_t p, const Metric& m);

// Rank of the first differently-labeled neighbor of p, 1-based, computed by
// counting: 1 + |{q same class as p, q != p, (dist(q,p), q) < (d*, q*)}|
// where (d*, q*) is the lexicographic minimum over differently-labeled
// samples. O(n) per query, no sort, and it equals the scan position of the
// first differently-labeled entry in sorted_neighbors(p) exactly.
// Throws SingleClassError when no differently-labeled sample exists.
std::uint32_t first_heterogeneous_rank(const EmbeddingSet& set, const ClassIndex& index,
                                       std::size_t p, const Metric& m);

// Ranks for every sample. threads = 0 picks hardware concurrency. Queries are
// independent; workers share the set read-only and write disjoint slots, so
// the result is identical for any worker count.
std::vector<std::uint32_t> all_ranks(const EmbeddingSet& set, const ClassIndex& index,
                                     const Metric& m, int threads = 1);

} // namespace kstar
