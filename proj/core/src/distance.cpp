#include "kstar/distance.hpp"

#include <cmath>

#include "kstar/dataset.hpp"

namespace kstar {

namespace {

// Neumaier variant of compensated summation. Used once d is large enough for
// plain accumulation error to threaten neighbor-rank flips.
struct CompensatedSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    double value() const { return s + c; }
};

constexpr std::size_t kCompensateAbove = 4096;

template <typename Term>
double accumulate(std::size_t d, Term term) {
    if (d > kCompensateAbove) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < d; ++i) acc.add(term(i));
        return acc.value();
    }
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += term(i);
    return s;
}

} // namespace

Metric Metric::minkowski(double order) {
    if (!(order > 0.0)) {
        throw ValidationError("minkowski order must be > 0, got " + format_double(order));
    }
    return {Kind::minkowski, order};
}

std::string Metric::name() const {
    if (kind == Kind::cosine) return "cosine";
    if (std::isinf(r)) return "maxnorm";
    if (r == 1.0) return "cityblock";
    if (r == 2.0) return "euclidean";
    return "minkowski(" + format_double(r) + ")";
}

Metric Metric::parse(const std::string& text) {
    if (text == "euclidean") return euclidean();
    if (text == "cityblock") return cityblock();
    if (text == "maxnorm") return maxnorm();
    if (text == "cosine") return cosine();
    throw ValidationError("unknown metric `" + text +
                          "`; expected euclidean, cityblock, maxnorm, or cosine");
}

double distance(const double* a, const double* b, std::size_t d, const Metric& m) {
    if (m.kind == Metric::Kind::cosine) {
        const double dot = accumulate(d, [&](std::size_t i) { return a[i] * b[i]; });
        const double na2 = accumulate(d, [&](std::size_t i) { return a[i] * a[i]; });
        const double nb2 = accumulate(d, [&](std::size_t i) { return b[i] * b[i]; });
        if (na2 == 0.0 || nb2 == 0.0) {
            throw ZeroVectorError("cosine distance is undefined against a zero vector");
        }
        return 1.0 - dot / (std::sqrt(na2) * std::sqrt(nb2));
    }
    if (std::isinf(m.r)) {
        double best = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = std::abs(a[i] - b[i]);
            if (diff > best) best = diff;
        }
        return best;
    }
    if (m.r == 2.0) {
        const double s = accumulate(d, [&](std::size_t i) {
            const double diff = a[i] - b[i];
            return diff * diff;
        });
        return std::sqrt(s);
    }
    if (m.r == 1.0) {
        return accumulate(d, [&](std::size_t i) { return std::abs(a[i] - b[i]); });
    }
    const double s =
        accumulate(d, [&](std::size_t i) { return std::pow(std::abs(a[i] - b[i]), m.r); });
    return std::pow(s, 1.0 / m.r);
}

double distance(const std::vector<double>& a, const std::vector<double>& b, const Metric& m) {
    if (a.size() != b.size()) {
        throw DimensionError("distance between vectors of length " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    }
    return distance(a.data(), b.data(), a.size(), m);
}

} // namespace kstar
