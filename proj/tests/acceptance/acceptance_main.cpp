// Acceptance battery: ten numbered criteria, one pass/fail line each.
// Exit code is the number of failed criteria. Budgeted criteria print their
// measured wall time in the detail.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/kstar.hpp"
#include "kstar/neighbor_matrix.hpp"
#include "kstar/neighbors.hpp"
#include "kstar/npy.hpp"
#include "kstar/report.hpp"
#include "kstar/synth.hpp"
#include "test_util.hpp"

namespace {

using Clock = std::chrono::steady_clock;

// Pinned parameters. Changing any of these changes what the battery attests.
constexpr int kOracleSeeds = 100;          // criterion 1
constexpr double kOracleBudgetSec = 60.0;  // criterion 1
constexpr int kBoundInstances = 100;       // criterion 2
constexpr double kMomentTol = 1e-12;       // criterion 4
constexpr int kMomentVectors = 1000;       // criterion 4
constexpr double kGammaRef = 1.1547005383792515;  // criterion 4, {1,1,1,5}
constexpr std::uint64_t kPlantedSeed = 20260821;  // criterion 6, single-instance legs
constexpr int kOverlapSeeds = 100;         // criterion 6
constexpr int kOverlapBar = 95;            // criterion 6
constexpr double kPlantedBudgetSec = 30.0; // criterion 6
constexpr double kScaleBudgetSec = 10.0;   // criterion 8
constexpr std::uint64_t kScaleSeed = 7;    // criterion 8

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why; // keep the first reason
        ok = false;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_sec(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", s);
    return buf;
}

const kstar::Metric kMetrics[] = {
    kstar::Metric::euclidean(),
    kstar::Metric::cityblock(),
    kstar::Metric::maxnorm(),
    kstar::Metric::cosine(),
};

// criterion 1: the counting rank equals a scan of the fully sorted neighbor
// list, for every sample, across seeds, sizes, dimensions, and metrics.
void criterion_rank_oracle(Check& c) {
    const auto start = Clock::now();
    long long compared = 0;
    for (int seed = 1; seed <= kOracleSeeds; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(seed));
        const auto set = testutil::fuzz_set(rng); // n in [10,500], d in [1,32]
        const auto index = kstar::build_class_index(set);
        const auto& m = kMetrics[seed % 4];
        for (std::size_t p = 0; p < set.n; ++p) {
            const auto counted = kstar::first_heterogeneous_rank(set, index, p, m);

            const auto order = kstar::sorted_neighbors(set, p, m);
            std::uint32_t scanned = 0;
            for (std::size_t r = 0; r < order.size(); ++r) {
                if (set.labels[order[r].index] != set.labels[p]) {
                    scanned = static_cast<std::uint32_t>(r + 1);
                    break;
                }
            }
            const auto independent = testutil::oracle_rank(set, p, m);
            ++compared;
            if (counted != scanned || counted != independent) {
                c.fail("seed " + std::to_string(seed) + " sample " + std::to_string(p) +
                       ": counted " + std::to_string(counted) + ", scanned " +
                       std::to_string(scanned) + ", independent " + std::to_string(independent));
                return;
            }
        }
    }
    const double took = seconds_since(start);
    c.expect(took < kOracleBudgetSec, "runtime " + fmt_sec(took) + " over budget");
    if (c.ok) {
        c.detail = std::to_string(kOracleSeeds) + " seeds, " + std::to_string(compared) +
                   " samples, " + fmt_sec(took);
    }
}

// criterion 2: ranks stay inside [1, |S_c|] and normalized values inside
// (0, 1] on every fuzzed instance.
void criterion_bounds(Check& c) {
    long long violations = 0;
    long long checked = 0;
    for (int seed = 1; seed <= kBoundInstances; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(1000 + seed));
        const auto set = testutil::fuzz_set(rng);
        const auto index = kstar::build_class_index(set);
        const auto result = kstar::compute_kstar(set, index, kMetrics[seed % 4]);
        for (std::size_t p = 0; p < set.n; ++p) {
            const std::size_t class_size = index.sizes[set.labels[p]];
            if (result.ranks[p] < 1 || result.ranks[p] > class_size) ++violations;
            ++checked;
        }
        for (const auto& cls : result.normalized) {
            for (double v : cls) {
                if (!(v > 0.0) || !(v <= 1.0)) ++violations;
            }
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " violations");
    if (c.ok) c.detail = std::to_string(checked) + " samples, zero violations";
}

// criterion 3: the 1-D two-pair fixture, checked exactly.
void criterion_hand_fixture(Check& c) {
    const auto set = testutil::make_set(1, {0.0, 1.0, 3.0, 4.0}, {0, 0, 1, 1});
    const auto index = kstar::build_class_index(set);
    const auto result = kstar::compute_kstar(set, index, kstar::Metric::euclidean());
    c.expect(result.ranks == std::vector<std::uint32_t>{2, 2, 2, 2}, "ranks not [2,2,2,2]");
    for (int cls = 0; cls < 2; ++cls) {
        const auto stats = kstar::class_statistics(result, cls);
        c.expect(stats.mu == 1.0, "class " + std::to_string(cls) + " mu != 1.0");
        c.expect(stats.sigma == 0.0, "class " + std::to_string(cls) + " sigma != 0");
        c.expect(stats.pattern == kstar::Pattern::Clustered,
                 "class " + std::to_string(cls) + " not Clustered");
    }
}

// criterion 4: moments against the direct-formula long-double oracle.
void criterion_moments(Check& c) {
    double mu, sigma, gamma;
    kstar::moments({1.0, 1.0, 1.0, 5.0}, mu, sigma, gamma);
    c.expect(std::abs(gamma - kGammaRef) <= kMomentTol,
             "gamma(1,1,1,5) = " + std::to_string(gamma));

    std::mt19937 rng(4242);
    std::uniform_int_distribution<std::size_t> n_dist(2, 500);
    std::uniform_real_distribution<double> v_dist(0.0, 1.0);
    for (int it = 0; it < kMomentVectors; ++it) {
        std::vector<double> values(n_dist(rng));
        for (auto& v : values) v = v_dist(rng);
        double omu, osigma, ogamma;
        kstar::moments(values, mu, sigma, gamma);
        testutil::oracle_moments(values, omu, osigma, ogamma);
        if (!testutil::close_rel(mu, omu, kMomentTol) ||
            !testutil::close_rel(sigma, osigma, kMomentTol) ||
            !testutil::close_rel(gamma, ogamma, kMomentTol)) {
            c.fail("vector " + std::to_string(it) + " diverged from oracle");
            return;
        }
    }
    if (c.ok) c.detail = std::to_string(kMomentVectors) + " vectors within 1e-12";
}

// criterion 5: the five threshold probes, boundaries inclusive for the
// middle pattern.
void criterion_thresholds(Check& c) {
    using kstar::Pattern;
    const std::pair<double, Pattern> cases[] = {
        {0.51, Pattern::Fractured},  {0.5, Pattern::Overlapped}, {0.0, Pattern::Overlapped},
        {-0.5, Pattern::Overlapped}, {-0.51, Pattern::Clustered},
    };
    for (const auto& [gamma, want] : cases) {
        const auto got = kstar::classify_pattern(gamma, 1.0, 0.5);
        c.expect(got == want, "gamma " + std::to_string(gamma) + " -> " +
                                  kstar::pattern_name(got));
    }
}

// criterion 6: each planted layout is recovered by the classifier; the
// overlapped layout over a hundred seeds with a tolerance of five misses.
void criterion_planted(Check& c) {
    const auto start = Clock::now();
    const auto metric = kstar::Metric::euclidean();

    kstar::SynthSpec clustered;
    clustered.layout = kstar::SynthSpec::Layout::clustered;
    clustered.classes = 4;
    clustered.per_class = 100;
    clustered.dim = 16;
    clustered.separation = 10.0;
    clustered.seed = kPlantedSeed;
    {
        const auto set = kstar::generate(clustered);
        const auto index = kstar::build_class_index(set);
        const auto result = kstar::compute_kstar(set, index, metric);
        for (int cls = 0; cls < 4; ++cls) {
            const auto stats = kstar::class_statistics(result, cls);
            c.expect(stats.pattern == kstar::Pattern::Clustered,
                     "clustered class " + std::to_string(cls) + " read as " +
                         kstar::pattern_name(stats.pattern));
            c.expect(stats.mu >= 0.9,
                     "clustered class " + std::to_string(cls) + " mu " + std::to_string(stats.mu));
        }
    }

    kstar::SynthSpec fractured = clustered;
    fractured.layout = kstar::SynthSpec::Layout::fractured;
    fractured.shards = 8;
    fractured.interleave = true;
    {
        const auto set = kstar::generate(fractured);
        const auto index = kstar::build_class_index(set);
        const auto result = kstar::compute_kstar(set, index, metric);
        for (int cls = 0; cls < 4; ++cls) {
            const auto stats = kstar::class_statistics(result, cls);
            c.expect(stats.pattern == kstar::Pattern::Fractured,
                     "fractured class " + std::to_string(cls) + " read as " +
                         kstar::pattern_name(stats.pattern));
            c.expect(stats.gamma > 0.5,
                     "fractured class " + std::to_string(cls) + " gamma " +
                         std::to_string(stats.gamma));
            c.expect(stats.mu <= 0.3,
                     "fractured class " + std::to_string(cls) + " mu " + std::to_string(stats.mu));
        }
    }

    kstar::SynthSpec overlapped;
    overlapped.layout = kstar::SynthSpec::Layout::overlapped;
    overlapped.classes = 2;
    overlapped.per_class = 400;
    overlapped.dim = 16;
    overlapped.offset = 0.0;
    int both_overlapped = 0;
    for (int seed = 1; seed <= kOverlapSeeds; ++seed) {
        overlapped.seed = static_cast<std::uint64_t>(seed);
        const auto set = kstar::generate(overlapped);
        const auto index = kstar::build_class_index(set);
        const auto result = kstar::compute_kstar(set, index, metric);
        bool both = true;
        for (int cls = 0; cls < 2; ++cls) {
            both = both && kstar::class_statistics(result, cls).pattern ==
                               kstar::Pattern::Overlapped;
        }
        if (both) ++both_overlapped;
    }
    c.expect(both_overlapped >= kOverlapBar,
             "overlapped pairs " + std::to_string(both_overlapped) + " of " +
                 std::to_string(kOverlapSeeds) + " below the bar of " +
                 std::to_string(kOverlapBar));

    const double took = seconds_since(start);
    c.expect(took < kPlantedBudgetSec, "runtime " + fmt_sec(took) + " over budget");
    if (c.ok) {
        c.detail = "overlapped " + std::to_string(both_overlapped) + "/" +
                   std::to_string(kOverlapSeeds) + ", " + fmt_sec(took);
    }
}

// criterion 7: every matrix row carries |S_c|-1 ones and its first zero at
// the rank column.
void criterion_matrix(Check& c) {
    long long rows_checked = 0;
    for (int seed = 1; seed <= 30; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(7000 + seed));
        const auto set = testutil::fuzz_set(rng, {.n_min = 8, .n_max = 120, .d_max = 8});
        const auto index = kstar::build_class_index(set);
        const auto& m = kMetrics[seed % 4];
        for (std::size_t cls = 0; cls < set.num_classes(); ++cls) {
            const auto mat =
                kstar::build_neighbor_matrix(set, index, static_cast<int>(cls), m);
            for (std::size_t r = 0; r < mat.rows.size(); ++r) {
                std::size_t ones = 0;
                std::size_t first_zero = mat.cols;
                for (std::size_t j = 0; j < mat.cols; ++j) {
                    if (mat.rows[r][j]) {
                        ++ones;
                    } else if (first_zero == mat.cols) {
                        first_zero = j;
                    }
                }
                const auto rank =
                    kstar::first_heterogeneous_rank(set, index, mat.row_order[r], m);
                ++rows_checked;
                if (ones != index.sizes[cls] - 1) {
                    c.fail("seed " + std::to_string(seed) + " class " + std::to_string(cls) +
                           ": row sum " + std::to_string(ones));
                    return;
                }
                if (first_zero != rank - 1) {
                    c.fail("seed " + std::to_string(seed) + " class " + std::to_string(cls) +
                           ": first zero at " + std::to_string(first_zero) + ", rank " +
                           std::to_string(rank));
                    return;
                }
            }
        }
    }
    c.detail = std::to_string(rows_checked) + " rows";
}

// criterion 8: the full pipeline at n=1280, d=1000 finishes inside the
// budget on one thread, and worker count never changes a single output byte.
void criterion_scale_determinism(Check& c) {
    testutil::TempDir dir;

    kstar::SynthSpec spec;
    spec.layout = kstar::SynthSpec::Layout::clustered;
    spec.classes = 16;
    spec.per_class = 80;
    spec.dim = 1000;
    spec.separation = 10.0;
    spec.seed = kScaleSeed;
    auto set = kstar::generate(spec);
    set.source_dtype = kstar::Dtype::f32; // store at single precision like real exports
    kstar::write_embeddings(set, dir.file("big.npy"), kstar::FileFormat::npy_pair,
                            dir.file("big.labels"));

    const auto start = Clock::now();
    const auto single = testutil::run_cli(
        "analyze --input big.npy --labels big.labels --threads 1 --fixed-timestamp --out t1",
        dir.path());
    const double took = seconds_since(start);
    c.expect(single.code == 0, "single-thread run exited " + std::to_string(single.code));
    c.expect(took < kScaleBudgetSec, "runtime " + fmt_sec(took) + " over budget");

    const auto four = testutil::run_cli(
        "analyze --input big.npy --labels big.labels --threads 4 --fixed-timestamp --out t4",
        dir.path());
    const auto sixteen = testutil::run_cli(
        "analyze --input big.npy --labels big.labels --threads 16 --fixed-timestamp --out t16",
        dir.path());
    c.expect(four.code == 0 && sixteen.code == 0, "multi-thread run failed");
    if (!c.ok) return;

    std::vector<std::string> suffixes = {".report.json", ".classes.csv", ".summary.csv", ".md"};
    for (const auto& name : set.class_names) suffixes.push_back("." + name + ".hist.svg");
    for (const auto& suffix : suffixes) {
        const std::string ref = kstar::read_file(dir.file("t1" + suffix));
        if (ref != kstar::read_file(dir.file("t4" + suffix)) ||
            ref != kstar::read_file(dir.file("t16" + suffix))) {
            c.fail("thread counts disagree on " + suffix);
            return;
        }
    }
    c.detail = "n=1280 d=1000 in " + fmt_sec(took) + ", " +
               std::to_string(suffixes.size()) + " artifacts byte-identical x3 thread counts";
}

// criterion 9: binary files re-serialize bit-exactly, the report survives a
// JSON round trip, and the markdown table has one glyph row per class.
void criterion_formats(Check& c) {
    testutil::TempDir dir;

    kstar::SynthSpec spec;
    spec.layout = kstar::SynthSpec::Layout::fractured;
    spec.classes = 5;
    spec.per_class = 40;
    spec.dim = 8;
    spec.shards = 5;
    spec.seed = 9;
    auto set = kstar::generate(spec);
    set.source_dtype = kstar::Dtype::f32;
    kstar::write_embeddings(set, dir.file("a.npy"), kstar::FileFormat::npy_pair,
                            dir.file("a.labels"));

    const auto loaded = kstar::load_embeddings(dir.file("a.npy"), kstar::FileFormat::npy_pair,
                                               dir.file("a.labels"));
    kstar::write_embeddings(loaded, dir.file("b.npy"), kstar::FileFormat::npy_pair,
                            dir.file("b.labels"));
    c.expect(kstar::read_file(dir.file("a.npy")) == kstar::read_file(dir.file("b.npy")),
             "binary round trip changed bytes");

    const auto index = kstar::build_class_index(loaded);
    const auto result = kstar::compute_kstar(loaded, index, kstar::Metric::euclidean());
    const kstar::SourceInfo src{"a.npy", "euclidean", "1970-01-01T00:00:00Z"};
    const auto report = kstar::build_report(loaded, index, result, nullptr, 20, src);
    kstar::write_report_json(report, dir.file("r.json"));
    const auto back = kstar::load_report_json(dir.file("r.json"));
    c.expect(kstar::report_equal(report, back), "json round trip not equal");

    kstar::write_markdown(report, dir.file("r.md"));
    const std::string md = kstar::read_file(dir.file("r.md"));
    const std::size_t table = md.find("## Classes");
    c.expect(table != std::string::npos, "class table missing");
    if (!c.ok) return;
    std::size_t rows = 0;
    bool glyphs_ok = true;
    std::size_t line_start = md.find('\n', table) + 1;
    int header_lines = 0;
    bool table_started = false;
    while (line_start < md.size()) {
        const std::size_t line_end = md.find('\n', line_start);
        const std::string line = md.substr(line_start, line_end - line_start);
        if (!line.empty() && line[0] == '|') {
            table_started = true;
            if (header_lines < 2) {
                ++header_lines; // column names and the separator row
            } else {
                ++rows;
                glyphs_ok = glyphs_ok && (line.find("★") != std::string::npos ||
                                          line.find("♣") != std::string::npos ||
                                          line.find("♠") != std::string::npos);
            }
        } else if (table_started) {
            break; // table ended
        }
        if (line_end == std::string::npos) break;
        line_start = line_end + 1;
    }
    c.expect(rows == spec.classes,
             "class table has " + std::to_string(rows) + " rows, expected " +
                 std::to_string(spec.classes));
    c.expect(glyphs_ok, "a class row is missing its pattern glyph");
}

// criterion 10: four metrics over one set give four reports whose pattern
// counts each total the class count.
void criterion_metric_sweep(Check& c) {
    testutil::TempDir dir;

    kstar::SynthSpec spec;
    spec.layout = kstar::SynthSpec::Layout::clustered;
    spec.classes = 5;
    spec.per_class = 40;
    spec.dim = 8;
    spec.separation = 6.0;
    spec.seed = 11;
    const auto set = kstar::generate(spec);
    kstar::write_embeddings(set, dir.file("mix.csv"), kstar::FileFormat::csv);

    for (const char* metric : {"euclidean", "cityblock", "maxnorm", "cosine"}) {
        const auto res = testutil::run_cli("analyze --input mix.csv --metric " +
                                               std::string(metric) +
                                               " --fixed-timestamp --out m_" + metric,
                                           dir.path());
        if (res.code != 0) {
            c.fail(std::string(metric) + " run exited " + std::to_string(res.code));
            return;
        }
        const auto report =
            kstar::load_report_json(dir.file("m_" + std::string(metric) + ".report.json"));
        std::size_t total = 0;
        for (const auto& row : report.summary) total += row.n_classes;
        if (total != spec.classes) {
            c.fail(std::string(metric) + " pattern totals sum to " + std::to_string(total));
            return;
        }
    }
    c.detail = "4 metrics, totals all " + std::to_string(spec.classes);
}

struct Criterion {
    int number;
    const char* title;
    std::function<void(Check&)> body;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "counting rank equals the sorted-scan oracle", criterion_rank_oracle},
        {2, "rank and normalized-value bounds", criterion_bounds},
        {3, "hand-computed line fixture", criterion_hand_fixture},
        {4, "moment statistics match the direct-formula oracle", criterion_moments},
        {5, "pattern threshold mapping", criterion_thresholds},
        {6, "planted layouts are recovered", criterion_planted},
        {7, "neighbor-matrix row structure", criterion_matrix},
        {8, "large-input runtime and thread determinism", criterion_scale_determinism},
        {9, "binary, json, and markdown fidelity", criterion_formats},
        {10, "pattern totals under every metric", criterion_metric_sweep},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.fail(std::string("exception: ") + e.what());
        }
        if (check.ok) {
            std::printf("[PASS] criterion %d: %s%s%s%s\n", criterion.number, criterion.title,
                        check.detail.empty() ? "" : " (", check.detail.c_str(),
                        check.detail.empty() ? "" : ")");
        } else {
            ++failures;
            std::printf("[FAIL] criterion %d: %s (%s)\n", criterion.number, criterion.title,
                        check.detail.c_str());
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
