#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/distance.hpp"
#include "kstar/neighbors.hpp"

namespace kstar {

enum class Pattern { Fractured, Overlapped, Clustered };

const char* pattern_name(Pattern p);  // "Fractured" / "Overlapped" / "Clustered"
const char* pattern_glyph(Pattern p); // UTF-8 star / club / spade

// Per-sample ranks plus per-class normalized distributions. normalized[c]
// holds rank/|S_c| for each member of class c in ascending sample order, as a
// multiset: duplicate values are common and must be kept.
struct KStarResult {
    std::vector<std::uint32_t> ranks;
    std::vector<std::vector<double>> normalized;
    Metric metric;
};

KStarResult compute_kstar(const EmbeddingSet& set, const ClassIndex& index, const Metric& m,
                          int threads = 1);

// One table row for one class.
struct ClassStats {
    int class_id = 0;
    std::size_t n_samples = 0;
    double mu = 0.0;    // mean of normalized ranks
    double sigma = 0.0; // population standard deviation
    double gamma = 0.0; // population skewness, 0 by convention when sigma ~ 0
    Pattern pattern = Pattern::Overlapped;
    std::optional<double> accuracy;
};

// Population moments with divisor |S| (no Bessel or Fisher-Pearson
// correction): mu = mean, sigma = sqrt(m2), gamma = m3 / m2^1.5, and
// gamma = 0 whenever sigma <= 1e-12.
void moments(const std::vector<double>& values, double& mu, double& sigma, double& gamma);

ClassStats class_statistics(const KStarResult& result, int c);

// gamma > 0.5 Fractured; -0.5 <= gamma <= 0.5 Overlapped, boundaries
// inclusive; gamma < -0.5 Clustered. Degenerate sigma <= 1e-12: the
// distribution is constant, so the position decides, mu >= 0.5 Clustered
// else Fractured.
Pattern classify_pattern(double gamma, double sigma, double mu);

// Fraction of members of class c whose predicted label equals c.
double class_accuracy(const ClassIndex& index, const std::vector<int>& preds, int c);

// One aggregate row per pattern that has at least one class.
struct PatternSummary {
    Pattern pattern = Pattern::Overlapped;
    std::size_t n_classes = 0;
    double mean_mu = 0.0;
    double mean_gamma = 0.0;
    std::optional<double> mean_accuracy;
};

// Unweighted means over the classes carrying each pattern. Patterns with no
// classes get no row. Row order: Fractured, Overlapped, Clustered.
std::vector<PatternSummary> aggregate_by_pattern(const std::vector<ClassStats>& stats);

} // namespace kstar
