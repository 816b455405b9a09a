#include "kstar/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <unordered_set>

#include "internal_util.hpp"

namespace kstar {

namespace {

const char* pattern_color(Pattern p) {
    switch (p) {
    case Pattern::Fractured: return "#2ca02c";
    case Pattern::Overlapped: return "#e6b800";
    case Pattern::Clustered: return "#e377c2";
    }
    return "#888888";
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pattern_cell(Pattern p) {
    return std::string(pattern_glyph(p)) + " " + pattern_name(p);
}

} // namespace

AnalysisReport build_report(const EmbeddingSet& set, const ClassIndex& index,
                            const KStarResult& result, const std::vector<int>* preds,
                            std::size_t bins, const SourceInfo& source) {
    if (bins < 1) throw ValidationError("histogram needs at least 1 bin");

    AnalysisReport report;
    report.source = source;
    report.class_names = set.class_names;
    report.bins = bins;

    const std::size_t c_count = set.num_classes();
    report.per_class.reserve(c_count);
    report.histograms.assign(c_count, std::vector<std::uint64_t>(bins, 0));
    for (std::size_t c = 0; c < c_count; ++c) {
        ClassStats stats = class_statistics(result, static_cast<int>(c));
        if (preds) stats.accuracy = class_accuracy(index, *preds, static_cast<int>(c));
        report.per_class.push_back(stats);

        // Integer binning on raw ranks: rank k of class size s lands in
        // ceil(k * bins / s) - 1, the right-inclusive partition of (0,1].
        const std::uint64_t s = index.sizes[c];
        for (std::uint32_t p : index.members[c]) {
            const std::uint64_t k = result.ranks[p];
            const std::uint64_t bin = (k * bins + s - 1) / s - 1;
            ++report.histograms[c][bin];
        }
    }

    report.summary = aggregate_by_pattern(report.per_class);

    double sum_mu = 0.0, sum_sigma = 0.0, sum_gamma = 0.0, sum_acc = 0.0;
    bool all_acc = preds != nullptr;
    for (const auto& s : report.per_class) {
        sum_mu += s.mu;
        sum_sigma += s.sigma;
        sum_gamma += s.gamma;
        if (s.accuracy) sum_acc += *s.accuracy;
        else all_acc = false;
    }
    const double n = static_cast<double>(c_count);
    report.overall.mean_mu = sum_mu / n;
    report.overall.mean_sigma = sum_sigma / n;
    report.overall.mean_gamma = sum_gamma / n;
    if (all_acc) report.overall.mean_accuracy = sum_acc / n;
    return report;
}

bool report_equal(const AnalysisReport& a, const AnalysisReport& b) {
    auto opt_eq = [](const std::optional<double>& x, const std::optional<double>& y) {
        if (x.has_value() != y.has_value()) return false;
        return !x.has_value() || *x == *y;
    };
    if (a.source.input != b.source.input || a.source.metric != b.source.metric ||
        a.source.timestamp != b.source.timestamp) {
        return false;
    }
    if (a.class_names != b.class_names || a.bins != b.bins) return false;
    if (a.per_class.size() != b.per_class.size()) return false;
    for (std::size_t i = 0; i < a.per_class.size(); ++i) {
        const auto& x = a.per_class[i];
        const auto& y = b.per_class[i];
        if (x.class_id != y.class_id || x.n_samples != y.n_samples || x.mu != y.mu ||
            x.sigma != y.sigma || x.gamma != y.gamma || x.pattern != y.pattern ||
            !opt_eq(x.accuracy, y.accuracy)) {
            return false;
        }
    }
    if (a.summary.size() != b.summary.size()) return false;
    for (std::size_t i = 0; i < a.summary.size(); ++i) {
        const auto& x = a.summary[i];
        const auto& y = b.summary[i];
        if (x.pattern != y.pattern || x.n_classes != y.n_classes || x.mean_mu != y.mean_mu ||
            x.mean_gamma != y.mean_gamma || !opt_eq(x.mean_accuracy, y.mean_accuracy)) {
            return false;
        }
    }
    if (a.overall.mean_mu != b.overall.mean_mu || a.overall.mean_sigma != b.overall.mean_sigma ||
        a.overall.mean_gamma != b.overall.mean_gamma ||
        !opt_eq(a.overall.mean_accuracy, b.overall.mean_accuracy)) {
        return false;
    }
    return a.histograms == b.histograms;
}

void write_classes_csv(const AnalysisReport& report, const std::string& path) {
    const bool with_acc = !report.per_class.empty() && report.per_class.front().accuracy.has_value();
    std::string out = "class,n,mu,sigma,gamma,pattern";
    if (with_acc) out += ",accuracy";
    out += '\n';
    for (const auto& s : report.per_class) {
        out += detail::csv_field(report.class_names[static_cast<std::size_t>(s.class_id)]);
        out += ',' + std::to_string(s.n_samples);
        out += ',' + format_double(s.mu);
        out += ',' + format_double(s.sigma);
        out += ',' + format_double(s.gamma);
        out += ',';
        out += pattern_name(s.pattern);
        if (with_acc) out += ',' + format_double(s.accuracy.value_or(0.0));
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_summary_csv(const AnalysisReport& report, const std::string& path) {
    const bool with_acc = report.overall.mean_accuracy.has_value();
    std::string out = "pattern,n_classes,mean_mu,mean_gamma";
    if (with_acc) out += ",mean_accuracy";
    out += '\n';
    for (const auto& row : report.summary) {
        out += pattern_name(row.pattern);
        out += ',' + std::to_string(row.n_classes);
        out += ',' + format_double(row.mean_mu);
        out += ',' + format_double(row.mean_gamma);
        if (with_acc) out += ',' + format_double(row.mean_accuracy.value_or(0.0));
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_markdown(const AnalysisReport& report, const std::string& path) {
    const bool with_acc = report.overall.mean_accuracy.has_value() ||
                          (!report.per_class.empty() &&
                           report.per_class.front().accuracy.has_value());
    std::string out;
    out += "# k* analysis\n\n";
    out += "Input: `" + report.source.input + "`\n";
    out += "Metric: " + report.source.metric + "\n";
    out += "Generated: " + report.source.timestamp + "\n\n";

    out += "## Classes\n\n";
    out += with_acc ? "| Class | n | mu | sigma | gamma | Acc | Pattern |\n"
                      "|:--|--:|--:|--:|--:|--:|:--|\n"
                    : "| Class | n | mu | sigma | gamma | Pattern |\n"
                      "|:--|--:|--:|--:|--:|:--|\n";
    for (const auto& s : report.per_class) {
        out += "| " + report.class_names[static_cast<std::size_t>(s.class_id)];
        out += " | " + std::to_string(s.n_samples);
        out += " | " + fixed2(s.mu);
        out += " | " + fixed2(s.sigma);
        out += " | " + fixed2(s.gamma);
        if (with_acc) out += " | " + (s.accuracy ? fixed2(*s.accuracy * 100.0) : std::string("---"));
        out += " | " + pattern_cell(s.pattern) + " |\n";
    }

    out += "\n## Patterns\n\n";
    out += with_acc ? "| Pattern | mean mu | mean gamma | mean Acc | N |\n"
                      "|:--|--:|--:|--:|--:|\n"
                    : "| Pattern | mean mu | mean gamma | N |\n"
                      "|:--|--:|--:|--:|\n";
    for (Pattern p : {Pattern::Fractured, Pattern::Overlapped, Pattern::Clustered}) {
        const PatternSummary* row = nullptr;
        for (const auto& r : report.summary) {
            if (r.pattern == p) row = &r;
        }
        out += "| " + pattern_cell(p);
        if (row) {
            out += " | " + fixed2(row->mean_mu);
            out += " | " + fixed2(row->mean_gamma);
            if (with_acc) {
                out += " | " + (row->mean_accuracy ? fixed2(*row->mean_accuracy * 100.0)
                                                   : std::string("---"));
            }
            out += " | " + std::to_string(row->n_classes) + " |\n";
        } else {
            out += with_acc ? " | --- | --- | --- | 0 |\n" : " | --- | --- | 0 |\n";
        }
    }
    out += "| All classes | " + fixed2(report.overall.mean_mu) + " | " +
           fixed2(report.overall.mean_gamma);
    if (with_acc) {
        out += " | " + (report.overall.mean_accuracy
                            ? fixed2(*report.overall.mean_accuracy * 100.0)
                            : std::string("---"));
    }
    out += " | " + std::to_string(report.per_class.size()) + " |\n";
    write_file_atomic(path, out);
}

void write_histogram_svg(const AnalysisReport& report, std::size_t c, const std::string& path) {
    const auto& counts = report.histograms[c];
    const auto& stats = report.per_class[c];
    std::uint64_t max_count = 1;
    for (std::uint64_t v : counts) max_count = std::max(max_count, v);

    const double width = 480.0, height = 320.0;
    const double left = 50.0, right = 15.0, top = 40.0, bottom = 40.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const double bar_w = plot_w / static_cast<double>(counts.size());

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\" "
           "viewBox=\"0 0 480 320\">\n";
    out += "  <title>normalized rank histogram, class " +
           detail::xml_escape(report.class_names[c]) + "</title>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += "  <text x=\"" + format_double(left) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"14\">" +
           detail::xml_escape(report.class_names[c]) + " (" + pattern_glyph(stats.pattern) + " " +
           pattern_name(stats.pattern) + ", gamma " + fixed2(stats.gamma) + ")</text>\n";

    const char* color = pattern_color(stats.pattern);
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b] == 0) continue;
        const double h = plot_h * static_cast<double>(counts[b]) / static_cast<double>(max_count);
        const double x = left + bar_w * static_cast<double>(b);
        const double y = top + plot_h - h;
        out += "  <rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) + "\" width=\"" +
               format_double(bar_w * 0.92) + "\" height=\"" + format_double(h) + "\" fill=\"" +
               color + "\"/>\n";
    }

    // axes and the three x ticks that matter for a [0,1] range
    out += "  <line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top + plot_h) +
           "\" x2=\"" + format_double(left + plot_w) + "\" y2=\"" + format_double(top + plot_h) +
           "\" stroke=\"#000000\"/>\n";
    out += "  <line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top) + "\" x2=\"" +
           format_double(left) + "\" y2=\"" + format_double(top + plot_h) +
           "\" stroke=\"#000000\"/>\n";
    for (double tick : {0.0, 0.5, 1.0}) {
        const double x = left + plot_w * tick;
        out += "  <line x1=\"" + format_double(x) + "\" y1=\"" + format_double(top + plot_h) +
               "\" x2=\"" + format_double(x) + "\" y2=\"" + format_double(top + plot_h + 5) +
               "\" stroke=\"#000000\"/>\n";
        out += "  <text x=\"" + format_double(x) + "\" y=\"" + format_double(top + plot_h + 20) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               fixed2(tick) + "</text>\n";
    }
    out += "  <text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(top + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           std::to_string(max_count) + "</text>\n";
    out += "  <text x=\"" + format_double(left + plot_w / 2) + "\" y=\"" +
           format_double(height - 8) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">normalized "
           "rank of first different-class neighbor</text>\n";
    out += "</svg>\n";
    write_file_atomic(path, out);
}

std::vector<std::string> write_report_artifacts(const AnalysisReport& report,
                                                const std::string& stem) {
    std::vector<std::string> written;
    written.push_back(stem + ".report.json");
    write_report_json(report, written.back());
    written.push_back(stem + ".classes.csv");
    write_classes_csv(report, written.back());
    written.push_back(stem + ".summary.csv");
    write_summary_csv(report, written.back());
    written.push_back(stem + ".md");
    write_markdown(report, written.back());

    std::unordered_set<std::string> used;
    for (std::size_t c = 0; c < report.class_names.size(); ++c) {
        std::string base = sanitize_for_filename(report.class_names[c]);
        if (!used.insert(base).second) {
            base += "_" + std::to_string(c);
            used.insert(base);
        }
        written.push_back(stem + "." + base + ".hist.svg");
        write_histogram_svg(report, c, written.back());
    }
    return written;
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string sanitize_for_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char ch : name) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '.' || ch == '_' || ch == '-';
        out += ok ? ch : '_';
    }
    if (out.empty()) out = "_";
    return out;
}

} // namespace kstar
