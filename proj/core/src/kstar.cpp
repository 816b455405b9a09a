#include "kstar/kstar.hpp"

#include <cmath>

namespace kstar {

const char* pattern_name(Pattern p) {
    switch (p) {
    case Pattern::Fractured: return "Fractured";
    case Pattern::Overlapped: return "Overlapped";
    case Pattern::Clustered: return "Clustered";
    }
    return "?";
}

const char* pattern_glyph(Pattern p) {
    switch (p) {
    case Pattern::Fractured: return "★";  // filled star
    case Pattern::Overlapped: return "♣"; // club
    case Pattern::Clustered: return "♠";  // spade
    }
    return "?";
}

KStarResult compute_kstar(const EmbeddingSet& set, const ClassIndex& index, const Metric& m,
                          int threads) {
    KStarResult result;
    result.metric = m;
    result.ranks = all_ranks(set, index, m, threads);
    result.normalized.resize(index.members.size());
    for (std::size_t c = 0; c < index.members.size(); ++c) {
        auto& values = result.normalized[c];
        values.reserve(index.sizes[c]);
        const double size = static_cast<double>(index.sizes[c]);
        for (std::uint32_t p : index.members[c]) {
            values.push_back(static_cast<double>(result.ranks[p]) / size);
        }
    }
    return result;
}

void moments(const std::vector<double>& values, double& mu, double& sigma, double& gamma) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    mu = sum / n;

    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double dev = v - mu;
        m2 += dev * dev;
        m3 += dev * dev * dev;
    }
    m2 /= n;
    m3 /= n;
    sigma = std::sqrt(m2);
    gamma = (sigma <= 1e-12) ? 0.0 : m3 / (m2 * sigma);
}

Pattern classify_pattern(double gamma, double sigma, double mu) {
    if (sigma <= 1e-12) {
        // Constant distribution: all mass at one value, so the value's
        // position decides which limiting shape this is.
        return mu >= 0.5 ? Pattern::Clustered : Pattern::Fractured;
    }
    if (gamma > 0.5) return Pattern::Fractured;
    if (gamma < -0.5) return Pattern::Clustered;
    return Pattern::Overlapped;
}

ClassStats class_statistics(const KStarResult& result, int c) {
    ClassStats stats;
    stats.class_id = c;
    const auto& values = result.normalized[static_cast<std::size_t>(c)];
    stats.n_samples = values.size();
    moments(values, stats.mu, stats.sigma, stats.gamma);
    stats.pattern = classify_pattern(stats.gamma, stats.sigma, stats.mu);
    return stats;
}

double class_accuracy(const ClassIndex& index, const std::vector<int>& preds, int c) {
    const auto& members = index.members[static_cast<std::size_t>(c)];
    std::size_t correct = 0;
    for (std::uint32_t p : members) {
        if (preds[p] == c) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(members.size());
}

std::vector<PatternSummary> aggregate_by_pattern(const std::vector<ClassStats>& stats) {
    std::vector<PatternSummary> out;
    for (Pattern p : {Pattern::Fractured, Pattern::Overlapped, Pattern::Clustered}) {
        PatternSummary row;
        row.pattern = p;
        double sum_mu = 0.0, sum_gamma = 0.0, sum_acc = 0.0;
        bool all_have_acc = true;
        for (const auto& s : stats) {
            if (s.pattern != p) continue;
            ++row.n_classes;
            sum_mu += s.mu;
            sum_gamma += s.gamma;
            if (s.accuracy) sum_acc += *s.accuracy;
            else all_have_acc = false;
        }
        if (row.n_classes == 0) continue;
        const double n = static_cast<double>(row.n_classes);
        row.mean_mu = sum_mu / n;
        row.mean_gamma = sum_gamma / n;
        if (all_have_acc) row.mean_accuracy = sum_acc / n;
        out.push_back(row);
    }
    return out;
}

} // namespace kstar
