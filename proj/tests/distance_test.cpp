#include <doctest.h>

#include <cmath>
#include <random>

#include "kstar/distance.hpp"
#include "test_util.hpp"

using kstar::Metric;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(d);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("classic right triangle distances") {
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{3.0, 4.0};
    CHECK(kstar::distance(a, b, Metric::euclidean()) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(kstar::distance(a, b, Metric::cityblock()) == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(kstar::distance(a, b, Metric::maxnorm()) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("fractional and large minkowski orders behave") {
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{1.0, 1.0};
    CHECK(kstar::distance(a, b, Metric::minkowski(3.0)) ==
          doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(kstar::distance(a, b, Metric::minkowski(0.5)) ==
          doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(Metric::minkowski(0.0), kstar::ValidationError);
    CHECK_THROWS_AS(Metric::minkowski(-1.0), kstar::ValidationError);
}

TEST_CASE("cosine distance endpoints") {
    const std::vector<double> x{1.0, 0.0};
    const std::vector<double> y{0.0, 2.0};
    const std::vector<double> x4{4.0, 0.0};
    const std::vector<double> nx{-3.0, 0.0};
    CHECK(kstar::distance(x, y, Metric::cosine()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kstar::distance(x, x4, Metric::cosine()) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kstar::distance(x, nx, Metric::cosine()) == doctest::Approx(2.0).epsilon(1e-15));
    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(kstar::distance(x, zero, Metric::cosine()), kstar::ZeroVectorError);
    CHECK_THROWS_AS(kstar::distance(zero, y, Metric::cosine()), kstar::ZeroVectorError);
}

TEST_CASE("mismatched lengths are rejected") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(kstar::distance(a, b, Metric::euclidean()), kstar::DimensionError);
}

TEST_CASE("metric names parse both ways") {
    CHECK(Metric::parse("euclidean").name() == "euclidean");
    CHECK(Metric::parse("cityblock").name() == "cityblock");
    CHECK(Metric::parse("maxnorm").name() == "maxnorm");
    CHECK(Metric::parse("cosine").name() == "cosine");
    CHECK(Metric::parse("euclidean").kind == Metric::Kind::minkowski);
    CHECK(Metric::parse("euclidean").r == 2.0);
    CHECK_THROWS_AS(Metric::parse("manhattan"), kstar::ValidationError);
}

TEST_CASE("metric axioms hold on fuzzed pairs") {
    std::mt19937 rng(7);
    const Metric metrics[] = {Metric::euclidean(), Metric::cityblock(), Metric::maxnorm(),
                              Metric::cosine(), Metric::minkowski(3.0)};
    for (int it = 0; it < 200; ++it) {
        std::uniform_int_distribution<std::size_t> dim(1, 16);
        const std::size_t d = dim(rng);
        // strictly positive coordinates keep cosine well defined
        const auto a = random_vec(rng, d, 0.1, 2.0);
        const auto b = random_vec(rng, d, 0.1, 2.0);
        const auto c = random_vec(rng, d, 0.1, 2.0);
        for (const auto& m : metrics) {
            const double ab = kstar::distance(a, b, m);
            const double ba = kstar::distance(b, a, m);
            const double aa = kstar::distance(a, a, m);
            CHECK(ab >= 0.0);
            CHECK(testutil::close_rel(ab, ba, 1e-12));
            CHECK(aa <= 1e-12);
            if (m.kind == Metric::Kind::minkowski && m.r >= 1.0) {
                const double ac = kstar::distance(a, c, m);
                const double cb = kstar::distance(c, b, m);
                CHECK(ab <= ac + cb + 1e-9 * (1.0 + ac + cb));
            }
        }
        // the usual norm ordering on a shared pair
        const double d1 = kstar::distance(a, b, Metric::cityblock());
        const double d2 = kstar::distance(a, b, Metric::euclidean());
        const double dinf = kstar::distance(a, b, Metric::maxnorm());
        CHECK(dinf <= d2 + 1e-12);
        CHECK(d2 <= d1 + 1e-12);
    }
}

TEST_CASE("compensated accumulation survives wide vectors") {
    // d > 4096 switches to the compensated path; a vector of identical
    // entries has an exact closed form to compare against
    const std::size_t d = 5000;
    std::vector<double> a(d, 0.0);
    std::vector<double> b(d, 1e-3);
    CHECK(kstar::distance(a, b, Metric::cityblock()) ==
          doctest::Approx(5.0).epsilon(1e-13));
    CHECK(kstar::distance(a, b, Metric::euclidean()) ==
          doctest::Approx(1e-3 * std::sqrt(5000.0)).epsilon(1e-13));

    // ill-conditioned alternating magnitudes still cancel correctly
    std::vector<double> big(d, 0.0);
    std::vector<double> tiny(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        big[i] = (i % 2 == 0) ? 1e8 : 1.0;
        tiny[i] = (i % 2 == 0) ? 1e8 : 0.0;
    }
    CHECK(kstar::distance(big, tiny, Metric::cityblock()) ==
          doctest::Approx(2500.0).epsilon(1e-12));
}

TEST_CASE("narrow and wide vectors agree through both accumulators") {
    // same data summed short (plain) and long (compensated, via padding
    // with zeros) must give the same distance
    std::mt19937 rng(11);
    const auto a = random_vec(rng, 64, -1.0, 1.0);
    const auto b = random_vec(rng, 64, -1.0, 1.0);
    auto a_pad = a;
    auto b_pad = b;
    a_pad.resize(5000, 0.0);
    b_pad.resize(5000, 0.0);
    for (const auto& m : {Metric::euclidean(), Metric::cityblock(), Metric::minkowski(3.0)}) {
        const double narrow = kstar::distance(a, b, m);
        const double wide = kstar::distance(a_pad, b_pad, m);
        CHECK(testutil::close_rel(narrow, wide, 1e-12));
    }
}
