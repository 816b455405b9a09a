#pragma once

#include <cstdint>
#include <string>

#include "kstar/dataset.hpp"

namespace kstar {

// Synthetic labeled latent spaces with planted structure, used as ground
// truth in end-to-end tests. Generation is sequential and bit-deterministic
// for a given spec and seed on every platform (own PRNG and gaussian
// transform, no std:: distributions).
struct SynthSpec {
    enum class Layout { clustered, overlapped, fractured };

    Layout layout = Layout::clustered;
    std::size_t classes = 4;
    std::size_t per_class = 100;
    std::size_t dim = 16;
    std::uint64_t seed = 0;

    // clustered: pairwise center distance, in units of the unit cluster sigma.
    double separation = 10.0;
    // overlapped: delta added to the calibrated base separation for dim.
    // offset = 0 plants partial overlap that reads as a near-uniform rank
    // distribution; positive offsets pull the pair apart, negative push it
    // toward coincidence (which skews positive, toward the fractured side).
    double offset = 0.0;
    // fractured: sub-blobs per class, laid along one axis with the other
    // classes' shards in between.
    std::size_t shards = 8;
    bool interleave = true;
};

// Center distance at which a two-blob pair's rank distribution is flattest,
// calibrated per dimension at per_class = 400. Piecewise-linear in log2(dim)
// between calibrated points.
double overlapped_base_separation(std::size_t dim);

// Throws SpecError on invariant violations (classes < 2, per_class < 4,
// shards outside [2, per_class/2], separation < 0, dim < 1, or an overlapped
// offset that would drive the pair separation negative).
EmbeddingSet generate(const SynthSpec& spec);

} // namespace kstar
