#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/kstar.hpp"

namespace kstar {

struct SourceInfo {
    std::string input;     // file identity as given on the command line
    std::string metric;    // metric name
    std::string timestamp; // ISO 8601 UTC
};

// Everything one analysis run produces: per-class rows, per-pattern
// aggregates, whole-dataset averages, and fixed-bin histograms of the
// normalized rank values.
struct AnalysisReport {
    SourceInfo source;
    std::vector<std::string> class_names;
    std::vector<ClassStats> per_class;      // one row per class, id order
    std::vector<PatternSummary> summary;    // only patterns with classes
    struct Overall {
        double mean_mu = 0.0;
        double mean_sigma = 0.0;
        double mean_gamma = 0.0;
        std::optional<double> mean_accuracy;
    } overall;
    std::size_t bins = 20;
    // histograms[c] has `bins` counts over (0,1], right-inclusive, value 1.0
    // in the last bin; counts sum to |S_c|.
    std::vector<std::vector<std::uint64_t>> histograms;
};

// preds may be null. Binning is done in integer arithmetic on the raw ranks,
// bin = ceil(rank * bins / |S_c|) - 1, so edge values land exactly where the
// right-inclusive contract says.
AnalysisReport build_report(const EmbeddingSet& set, const ClassIndex& index,
                            const KStarResult& result, const std::vector<int>* preds,
                            std::size_t bins, const SourceInfo& source);

// Canonical machine-readable form: stable key order, floats printed with 17
// significant digits, "schema": 1. Parsing it back yields a structurally
// equal report.
void write_report_json(const AnalysisReport& report, const std::string& path);
AnalysisReport load_report_json(const std::string& path);

// Exact comparison, bitwise on floats. Round-trip checks use this.
bool report_equal(const AnalysisReport& a, const AnalysisReport& b);

void write_classes_csv(const AnalysisReport& report, const std::string& path);
void write_summary_csv(const AnalysisReport& report, const std::string& path);

// Per-class and per-pattern tables with the pattern glyph column; patterns
// with no classes print "---" cells.
void write_markdown(const AnalysisReport& report, const std::string& path);

// One histogram for class position c. x axis is the normalized rank in
// [0,1]; bars take the pattern's color.
void write_histogram_svg(const AnalysisReport& report, std::size_t c, const std::string& path);

// report.json + classes.csv + summary.csv + md + one hist.svg per class,
// named <stem>.<suffix>. Returns the paths written.
std::vector<std::string> write_report_artifacts(const AnalysisReport& report,
                                                const std::string& stem);

// Side-by-side view of several reports over one class vocabulary.
struct Comparison {
    struct Cell {
        double mu = 0.0;
        double sigma = 0.0;
        double gamma = 0.0;
        Pattern pattern = Pattern::Overlapped;
    };
    std::vector<std::string> sources;     // display name per report
    std::vector<std::string> class_names; // first report's order
    std::vector<std::vector<Cell>> cells; // [report][class]
    std::vector<std::uint8_t> changed;    // class pattern differs between reports
    std::vector<std::vector<PatternSummary>> summaries; // per report
    std::size_t n_changed = 0;
};

// Needs >= 2 reports over identical class name sets (order free); throws
// VocabularyMismatchError otherwise. Flags every class whose pattern is not
// the same in all reports.
Comparison compare(const std::vector<AnalysisReport>& reports);

void write_comparison_json(const Comparison& cmp, const std::string& path);
void write_comparison_markdown(const Comparison& cmp, const std::string& path);

// "1970-01-01T00:00:00Z" shape, current time.
std::string iso8601_utc_now();

// Replaces anything outside [A-Za-z0-9._-] so class names can appear in
// output filenames.
std::string sanitize_for_filename(const std::string& name);

} // namespace kstar
