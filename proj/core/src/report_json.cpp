#include <nlohmann/json.hpp>

#include "kstar/report.hpp"
#include "internal_util.hpp"

namespace kstar {

namespace {

using detail::json_double;
using detail::json_escape;

Pattern parse_pattern(const std::string& name, const std::string& path) {
    if (name == "Fractured") return Pattern::Fractured;
    if (name == "Overlapped") return Pattern::Overlapped;
    if (name == "Clustered") return Pattern::Clustered;
    throw ParseError(path + ": unknown pattern `" + name + "`");
}

} // namespace

// The writer is hand-rolled so key order and float formatting stay fixed:
// identical reports serialize to identical bytes.
void write_report_json(const AnalysisReport& report, const std::string& path) {
    std::string out;
    out += "{\n";
    out += "  \"schema\": 1,\n";
    out += "  \"source\": {\n";
    out += "    \"input\": \"" + json_escape(report.source.input) + "\",\n";
    out += "    \"metric\": \"" + json_escape(report.source.metric) + "\",\n";
    out += "    \"timestamp\": \"" + json_escape(report.source.timestamp) + "\"\n";
    out += "  },\n";
    out += "  \"bins\": " + std::to_string(report.bins) + ",\n";

    out += "  \"classes\": [\n";
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& s = report.per_class[c];
        out += "    {\n";
        out += "      \"name\": \"" + json_escape(report.class_names[c]) + "\",\n";
        out += "      \"n\": " + std::to_string(s.n_samples) + ",\n";
        out += "      \"mu\": " + json_double(s.mu) + ",\n";
        out += "      \"sigma\": " + json_double(s.sigma) + ",\n";
        out += "      \"gamma\": " + json_double(s.gamma) + ",\n";
        out += "      \"pattern\": \"" + std::string(pattern_name(s.pattern)) + "\",\n";
        if (s.accuracy) out += "      \"accuracy\": " + json_double(*s.accuracy) + ",\n";
        out += "      \"histogram\": [";
        for (std::size_t b = 0; b < report.histograms[c].size(); ++b) {
            if (b) out += ", ";
            out += std::to_string(report.histograms[c][b]);
        }
        out += "]\n";
        out += (c + 1 < report.per_class.size()) ? "    },\n" : "    }\n";
    }
    out += "  ],\n";

    out += "  \"patterns\": [\n";
    for (std::size_t i = 0; i < report.summary.size(); ++i) {
        const auto& row = report.summary[i];
        out += "    {\"pattern\": \"" + std::string(pattern_name(row.pattern)) +
               "\", \"n_classes\": " + std::to_string(row.n_classes) +
               ", \"mean_mu\": " + json_double(row.mean_mu) +
               ", \"mean_gamma\": " + json_double(row.mean_gamma);
        if (row.mean_accuracy) out += ", \"mean_accuracy\": " + json_double(*row.mean_accuracy);
        out += (i + 1 < report.summary.size()) ? "},\n" : "}\n";
    }
    out += "  ],\n";

    out += "  \"overall\": {\"mean_mu\": " + json_double(report.overall.mean_mu) +
           ", \"mean_sigma\": " + json_double(report.overall.mean_sigma) +
           ", \"mean_gamma\": " + json_double(report.overall.mean_gamma);
    if (report.overall.mean_accuracy) {
        out += ", \"mean_accuracy\": " + json_double(*report.overall.mean_accuracy);
    }
    out += "}\n";
    out += "}\n";
    write_file_atomic(path, out);
}

AnalysisReport load_report_json(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        if (!doc.is_object() || doc.at("schema").get<int>() != 1) {
            throw ParseError(path + ": unsupported report schema");
        }
        AnalysisReport report;
        const auto& src = doc.at("source");
        report.source.input = src.at("input").get<std::string>();
        report.source.metric = src.at("metric").get<std::string>();
        report.source.timestamp = src.at("timestamp").get<std::string>();
        report.bins = doc.at("bins").get<std::size_t>();

        int class_id = 0;
        for (const auto& cls : doc.at("classes")) {
            report.class_names.push_back(cls.at("name").get<std::string>());
            ClassStats s;
            s.class_id = class_id++;
            s.n_samples = cls.at("n").get<std::size_t>();
            s.mu = cls.at("mu").get<double>();
            s.sigma = cls.at("sigma").get<double>();
            s.gamma = cls.at("gamma").get<double>();
            s.pattern = parse_pattern(cls.at("pattern").get<std::string>(), path);
            if (cls.contains("accuracy")) s.accuracy = cls.at("accuracy").get<double>();
            report.per_class.push_back(s);
            report.histograms.push_back(cls.at("histogram").get<std::vector<std::uint64_t>>());
        }
        for (const auto& row : doc.at("patterns")) {
            PatternSummary sum;
            sum.pattern = parse_pattern(row.at("pattern").get<std::string>(), path);
            sum.n_classes = row.at("n_classes").get<std::size_t>();
            sum.mean_mu = row.at("mean_mu").get<double>();
            sum.mean_gamma = row.at("mean_gamma").get<double>();
            if (row.contains("mean_accuracy")) {
                sum.mean_accuracy = row.at("mean_accuracy").get<double>();
            }
            report.summary.push_back(sum);
        }
        const auto& overall = doc.at("overall");
        report.overall.mean_mu = overall.at("mean_mu").get<double>();
        report.overall.mean_sigma = overall.at("mean_sigma").get<double>();
        report.overall.mean_gamma = overall.at("mean_gamma").get<double>();
        if (overall.contains("mean_accuracy")) {
            report.overall.mean_accuracy = overall.at("mean_accuracy").get<double>();
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace kstar
