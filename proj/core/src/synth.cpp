#include "kstar/synth.hpp"

#include <cmath>
#include <cstdint>

namespace kstar {

namespace {

// splitmix64, Vigna's public-domain mixer. Chosen over std::mt19937 plus
// std::normal_distribution because the standard distributions differ between
// standard library implementations, and generated fixtures must be stable.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Box-Muller on top of SplitMix64. u1 is shifted into (0,1] so the log
// argument never hits zero.
struct GaussianStream {
    SplitMix64 rng;
    bool has_spare = false;
    double spare = 0.0;

    explicit GaussianStream(std::uint64_t seed) : rng(seed) {}

    double operator()() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

// Center spacing of adjacent shard slots in the fractured layout, in cluster
// sigmas. Calibrated so the between-shard mixing keeps every class markedly
// positive-skewed across dimensions 1 through 64.
constexpr double kFracturedGap = 2.0;

// Distance between the base points of different overlapped pairs. Far enough
// that tails of one pair never reach another.
constexpr double kPairSpacing = 50.0;

void check(bool ok, const std::string& what) {
    if (!ok) throw SpecError(what);
}

} // namespace

double overlapped_base_separation(std::size_t dim) {
    // Calibrated center distances at which a two-blob pair's normalized rank
    // distribution has zero skew, measured at per_class = 400 over 60 to 100
    // seeds per point. Indexed by log2(dim), interpolated linearly between
    // powers of two, end slope continued beyond dim = 64.
    static constexpr double kTable[] = {3.3, 3.9, 4.6, 5.25, 6.05, 6.95, 8.1};
    constexpr std::size_t kLast = sizeof(kTable) / sizeof(kTable[0]) - 1;
    const double x = std::log2(static_cast<double>(dim));
    if (x <= 0.0) return kTable[0];
    if (x >= static_cast<double>(kLast)) {
        return kTable[kLast] + (x - static_cast<double>(kLast)) * (kTable[kLast] - kTable[kLast - 1]);
    }
    const auto i = static_cast<std::size_t>(x);
    const double frac = x - static_cast<double>(i);
    return kTable[i] + frac * (kTable[i + 1] - kTable[i]);
}

EmbeddingSet generate(const SynthSpec& spec) {
    check(spec.classes >= 2, "need at least 2 classes, got " + std::to_string(spec.classes));
    check(spec.per_class >= 4, "need at least 4 samples per class, got " +
                                   std::to_string(spec.per_class));
    check(spec.dim >= 1, "need at least 1 dimension");
    if (spec.layout == SynthSpec::Layout::clustered) {
        check(spec.separation >= 0.0, "separation must be >= 0");
    }
    if (spec.layout == SynthSpec::Layout::fractured) {
        check(spec.shards >= 2, "need at least 2 shards");
        check(spec.shards * 2 <= spec.per_class,
              "shards may not exceed per_class / 2, got " + std::to_string(spec.shards) +
                  " shards for " + std::to_string(spec.per_class) + " samples");
    }
    double pair_sep = 0.0;
    if (spec.layout == SynthSpec::Layout::overlapped) {
        pair_sep = overlapped_base_separation(spec.dim) + spec.offset;
        check(pair_sep >= 0.0, "offset " + std::to_string(spec.offset) +
                                   " drives the pair separation negative");
    }

    const std::size_t c_count = spec.classes;
    const std::size_t per = spec.per_class;
    const std::size_t d = spec.dim;

    EmbeddingSet set;
    set.n = c_count * per;
    set.d = d;
    set.points.resize(set.n * d);
    set.labels.reserve(set.n);
    set.ids.reserve(set.n);
    set.class_names.reserve(c_count);
    for (std::size_t c = 0; c < c_count; ++c) set.class_names.push_back("c" + std::to_string(c));

    // Per-shard sample counts for the fractured layout; the remainder goes to
    // the leading shards.
    std::vector<std::size_t> shard_sizes;
    if (spec.layout == SynthSpec::Layout::fractured) {
        shard_sizes.assign(spec.shards, per / spec.shards);
        for (std::size_t j = 0; j < per % spec.shards; ++j) ++shard_sizes[j];
    }

    GaussianStream gauss(spec.seed);
    std::vector<double> center(d, 0.0);
    std::size_t row = 0;
    for (std::size_t c = 0; c < c_count; ++c) {
        std::size_t shard = 0;
        std::size_t left_in_shard = shard_sizes.empty() ? per : shard_sizes[0];
        for (std::size_t i = 0; i < per; ++i, ++row) {
            std::fill(center.begin(), center.end(), 0.0);
            switch (spec.layout) {
            case SynthSpec::Layout::clustered:
                // Unit blobs on a scaled simplex: with C <= d the centers sit
                // on orthogonal axes and every pair is exactly `separation`
                // apart; otherwise they line up along the first axis.
                if (c_count <= d) {
                    center[c] = spec.separation / std::sqrt(2.0);
                } else {
                    center[0] = static_cast<double>(c) * spec.separation;
                }
                break;
            case SynthSpec::Layout::overlapped: {
                // Classes pair up; the two blobs of a pair sit pair_sep apart
                // along the first axis, and pairs are isolated from each other.
                const std::size_t pair = c / 2;
                const std::size_t base_axis = d >= 2 ? 1 : 0;
                center[base_axis] += static_cast<double>(pair) * kPairSpacing;
                if (c % 2 == 1) center[0] += pair_sep;
                break;
            }
            case SynthSpec::Layout::fractured: {
                if (left_in_shard == 0) {
                    ++shard;
                    left_in_shard = shard_sizes[shard];
                }
                --left_in_shard;
                // Interleaved: slot order cycles through the classes, so each
                // shard has other classes' shards as its line neighbors.
                const std::size_t slot = spec.interleave ? shard * c_count + c
                                                         : c * spec.shards + shard;
                center[0] = static_cast<double>(slot) * kFracturedGap;
                break;
            }
            }
            double* dst = set.points.data() + row * d;
            for (std::size_t j = 0; j < d; ++j) dst[j] = center[j] + gauss();
            set.labels.push_back(static_cast<int>(c));
            set.ids.push_back(std::to_string(row));
        }
    }
    set.source_dtype = Dtype::f64;
    return set;
}

} // namespace kstar
