#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "kstar/report.hpp"
#include "internal_util.hpp"

namespace kstar {

namespace {

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

Comparison compare(const std::vector<AnalysisReport>& reports) {
    if (reports.size() < 2) {
        throw ValidationError("comparison needs at least 2 reports, got " +
                              std::to_string(reports.size()));
    }
    const std::set<std::string> vocab(reports[0].class_names.begin(),
                                      reports[0].class_names.end());
    for (std::size_t r = 1; r < reports.size(); ++r) {
        const std::set<std::string> other(reports[r].class_names.begin(),
                                          reports[r].class_names.end());
        if (other != vocab) {
            std::string diff;
            for (const auto& name : vocab) {
                if (!other.count(name)) diff += " -" + name;
            }
            for (const auto& name : other) {
                if (!vocab.count(name)) diff += " +" + name;
            }
            throw VocabularyMismatchError("report " + std::to_string(r + 1) + " (" +
                                          reports[r].source.input +
                                          ") differs in class vocabulary:" + diff);
        }
    }

    Comparison cmp;
    cmp.class_names = reports[0].class_names;
    for (const auto& rep : reports) cmp.sources.push_back(rep.source.input);

    cmp.cells.resize(reports.size());
    for (std::size_t r = 0; r < reports.size(); ++r) {
        std::unordered_map<std::string, std::size_t> pos;
        for (std::size_t c = 0; c < reports[r].class_names.size(); ++c) {
            pos.emplace(reports[r].class_names[c], c);
        }
        cmp.cells[r].reserve(cmp.class_names.size());
        for (const auto& name : cmp.class_names) {
            const auto& s = reports[r].per_class[pos.at(name)];
            cmp.cells[r].push_back({s.mu, s.sigma, s.gamma, s.pattern});
        }
        cmp.summaries.push_back(reports[r].summary);
    }

    cmp.changed.assign(cmp.class_names.size(), 0);
    for (std::size_t c = 0; c < cmp.class_names.size(); ++c) {
        for (std::size_t r = 1; r < reports.size(); ++r) {
            if (cmp.cells[r][c].pattern != cmp.cells[0][c].pattern) {
                cmp.changed[c] = 1;
                break;
            }
        }
        if (cmp.changed[c]) ++cmp.n_changed;
    }
    return cmp;
}

void write_comparison_json(const Comparison& cmp, const std::string& path) {
    using detail::json_double;
    using detail::json_escape;
    std::string out;
    out += "{\n";
    out += "  \"schema\": 1,\n";
    out += "  \"sources\": [";
    for (std::size_t r = 0; r < cmp.sources.size(); ++r) {
        if (r) out += ", ";
        out += "\"" + json_escape(cmp.sources[r]) + "\"";
    }
    out += "],\n";
    out += "  \"n_changed\": " + std::to_string(cmp.n_changed) + ",\n";
    out += "  \"classes\": [\n";
    for (std::size_t c = 0; c < cmp.class_names.size(); ++c) {
        out += "    {\"name\": \"" + json_escape(cmp.class_names[c]) + "\", \"changed\": ";
        out += cmp.changed[c] ? "true" : "false";
        out += ", \"per_source\": [";
        for (std::size_t r = 0; r < cmp.cells.size(); ++r) {
            const auto& cell = cmp.cells[r][c];
            if (r) out += ", ";
            out += "{\"mu\": " + json_double(cell.mu) + ", \"sigma\": " + json_double(cell.sigma) +
                   ", \"gamma\": " + json_double(cell.gamma) + ", \"pattern\": \"" +
                   pattern_name(cell.pattern) + "\"}";
        }
        out += "]}";
        out += (c + 1 < cmp.class_names.size()) ? ",\n" : "\n";
    }
    out += "  ],\n";
    out += "  \"summaries\": [\n";
    for (std::size_t r = 0; r < cmp.summaries.size(); ++r) {
        out += "    [";
        for (std::size_t i = 0; i < cmp.summaries[r].size(); ++i) {
            const auto& row = cmp.summaries[r][i];
            if (i) out += ", ";
            out += "{\"pattern\": \"" + std::string(pattern_name(row.pattern)) +
                   "\", \"n_classes\": " + std::to_string(row.n_classes) +
                   ", \"mean_mu\": " + json_double(row.mean_mu) +
                   ", \"mean_gamma\": " + json_double(row.mean_gamma);
            if (row.mean_accuracy) {
                out += ", \"mean_accuracy\": " + json_double(*row.mean_accuracy);
            }
            out += "}";
        }
        out += "]";
        out += (r + 1 < cmp.summaries.size()) ? ",\n" : "\n";
    }
    out += "  ]\n";
    out += "}\n";
    write_file_atomic(path, out);
}

void write_comparison_markdown(const Comparison& cmp, const std::string& path) {
    std::string out;
    out += "# k* comparison\n\n";
    out += "Sources:\n\n";
    for (std::size_t r = 0; r < cmp.sources.size(); ++r) {
        out += std::to_string(r + 1) + ". `" + cmp.sources[r] + "`\n";
    }
    out += "\nClasses with a pattern change: " + std::to_string(cmp.n_changed) + " of " +
           std::to_string(cmp.class_names.size()) + "\n";

    out += "\n## Classes\n\n";
    out += "| Class |";
    for (std::size_t r = 0; r < cmp.sources.size(); ++r) {
        const std::string tag = " " + std::to_string(r + 1);
        out += tag + ": mu |" + tag + ": gamma |" + tag + ": pattern |";
    }
    out += " Changed |\n|:--|";
    for (std::size_t r = 0; r < cmp.sources.size(); ++r) out += "--:|--:|:--|";
    out += ":-:|\n";
    for (std::size_t c = 0; c < cmp.class_names.size(); ++c) {
        out += "| " + cmp.class_names[c] + " |";
        for (std::size_t r = 0; r < cmp.cells.size(); ++r) {
            const auto& cell = cmp.cells[r][c];
            out += " " + fixed2(cell.mu) + " | " + fixed2(cell.gamma) + " | " +
                   pattern_glyph(cell.pattern) + " " + pattern_name(cell.pattern) + " |";
        }
        out += cmp.changed[c] ? " yes |\n" : " |\n";
    }

    out += "\n## Patterns per source\n\n";
    out += "| Source | Pattern | mean mu | mean gamma | N |\n|:--|:--|--:|--:|--:|\n";
    for (std::size_t r = 0; r < cmp.summaries.size(); ++r) {
        for (const auto& row : cmp.summaries[r]) {
            out += "| " + std::to_string(r + 1) + " | " + pattern_glyph(row.pattern) + " " +
                   pattern_name(row.pattern) + " | " + fixed2(row.mean_mu) + " | " +
                   fixed2(row.mean_gamma) + " | " + std::to_string(row.n_classes) + " |\n";
        }
    }
    write_file_atomic(path, out);
}

} // namespace kstar
