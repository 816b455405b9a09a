#include "kstar/neighbors.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>

namespace kstar {

NeighborOrder sorted_neighbors(const EmbeddingSet& set, std::size_t p, const Metric& m) {
    NeighborOrder order;
    order.reserve(set.n - 1);
    const double* pr = set.row(p);
    for (std::size_t q = 0; q < set.n; ++q) {
        if (q == p) continue;
        order.push_back({static_cast<std::uint32_t>(q), distance(pr, set.row(q), set.d, m)});
    }
    std::sort(order.begin(), order.end(), [](const NeighborEntry& x, const NeighborEntry& y) {
        if (x.dist != y.dist) return x.dist < y.dist;
        return x.index < y.index;
    });
    return order;
}

std::uint32_t first_heterogeneous_rank(const EmbeddingSet& set, const ClassIndex& index,
                                       std::size_t p, const Metric& m) {
    const int lp = set.labels[p];
    const double* pr = set.row(p);

    // Lexicographic minimum of (distance, index) over differently-labeled
    // samples. Scanning in index order means a strict distance comparison
    // already realizes the index tie-break.
    double best_d = std::numeric_limits<double>::infinity();
    std::uint32_t best_q = 0;
    bool found = false;
    for (std::size_t q = 0; q < set.n; ++q) {
        if (set.labels[q] == lp) continue;
        const double dist = distance(pr, set.row(q), set.d, m);
        if (!found || dist < best_d) {
            best_d = dist;
            best_q = static_cast<std::uint32_t>(q);
            found = true;
        }
    }
    if (!found) {
        throw SingleClassError("sample " + std::to_string(p) +
                               " has no differently-labeled sample to rank against");
    }

    // Same-class neighbors strictly before (best_d, best_q) in the total
    // order. This count plus one is exactly the scan position of the first
    // differently-labeled entry in the sorted neighbor list.
    std::uint32_t before = 0;
    for (std::uint32_t q : index.members[static_cast<std::size_t>(lp)]) {
        if (q == p) continue;
        const double dist = distance(pr, set.row(q), set.d, m);
        if (dist < best_d || (dist == best_d && q < best_q)) ++before;
    }
    return before + 1;
}

std::vector<std::uint32_t> all_ranks(const EmbeddingSet& set, const ClassIndex& index,
                                     const Metric& m, int threads) {
    std::vector<std::uint32_t> ranks(set.n);
    std::size_t workers = threads <= 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : static_cast<std::size_t>(threads);
    workers = std::min(workers, set.n);

    if (workers <= 1) {
        for (std::size_t p = 0; p < set.n; ++p) {
            ranks[p] = first_heterogeneous_rank(set, index, p, m);
        }
        return ranks;
    }

    // Contiguous query ranges per worker; slots are disjoint, so the result
    // does not depend on scheduling or worker count.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (set.n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(set.n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t p = begin; p < end; ++p) {
                    ranks[p] = first_heterogeneous_rank(set, index, p, m);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return ranks;
}

} // namespace kstar
