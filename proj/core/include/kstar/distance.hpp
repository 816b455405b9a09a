#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "kstar/errors.hpp"

namespace kstar {

// Minkowski family of order r (r=1 city-block, r=2 euclidean, r=inf max-norm)
// plus cosine distance. Any r > 0 is accepted at the library level; the CLI
// exposes the four named metrics.
struct Metric {
    enum class Kind { minkowski, cosine };

    Kind kind = Kind::minkowski;
    double r = 2.0;

    static Metric euclidean() { return {Kind::minkowski, 2.0}; }
    static Metric cityblock() { return {Kind::minkowski, 1.0}; }
    static Metric maxnorm() { return {Kind::minkowski, std::numeric_limits<double>::infinity()}; }
    static Metric cosine() { return {Kind::cosine, 0.0}; }
    static Metric minkowski(double order);

    // "euclidean", "cityblock", "maxnorm", "cosine", or "minkowski(r)".
    std::string name() const;
    // Accepts the four CLI names; ValidationError otherwise.
    static Metric parse(const std::string& text);
};

// minkowski(r): (sum |a_i - b_i|^r)^(1/r); minkowski(inf): max |a_i - b_i|;
// cosine: 1 - a.b / (|a||b|), ZeroVectorError when either norm is 0.
// Accumulates in float64 with compensated summation once d exceeds 4096.
double distance(const double* a, const double* b, std::size_t d, const Metric& m);

// Checked variant, throws DimensionError on length mismatch.
double distance(const std::vector<double>& a, const std::vector<double>& b, const Metric& m);

} // namespace kstar
