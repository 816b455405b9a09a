#include "kstar/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kstar/npy.hpp"
#include "internal_util.hpp"

namespace kstar {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool parse_double_field(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

std::vector<std::string_view> split_fields(const std::string& line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.emplace_back(line.data() + start, line.size() - start);
            break;
        }
        fields.emplace_back(line.data() + start, comma - start);
        start = comma + 1;
    }
    return fields;
}

// Assigns dense ids in first-appearance order so report rows keep input order.
struct LabelMapper {
    std::unordered_map<std::string, int> to_id;
    std::vector<std::string> names;

    int id_for(const std::string& name) {
        auto it = to_id.find(name);
        if (it != to_id.end()) return it->second;
        int id = static_cast<int>(names.size());
        to_id.emplace(name, id);
        names.push_back(name);
        return id;
    }
};

EmbeddingSet load_csv(const std::string& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);

    EmbeddingSet set;
    LabelMapper mapper;
    bool saw_data = false;
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (!saw_data) {
            // Header detection: a first row whose coordinate cells do not all
            // parse as numbers is treated as a header and skipped.
            bool numeric = fields.size() >= 2;
            for (std::size_t i = 1; i < fields.size() && numeric; ++i) {
                double v;
                numeric = parse_double_field(fields[i], v);
            }
            if (!numeric) {
                if (lineno == 1) continue;
                throw ParseError(path + " line " + std::to_string(lineno) +
                                 ": expected `label,coord,...`");
            }
            set.d = fields.size() - 1;
            saw_data = true;
        }
        if (fields.size() < 2) {
            throw ParseError(path + " line " + std::to_string(lineno) +
                             ": expected `label,coord,...`");
        }
        if (fields.size() - 1 != set.d) {
            throw ValidationError(path + " line " + std::to_string(lineno) + ": ragged row, got " +
                                  std::to_string(fields.size() - 1) + " coordinates, expected " +
                                  std::to_string(set.d));
        }
        set.labels.push_back(mapper.id_for(std::string(trim(fields[0]))));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v;
            if (!parse_double_field(fields[i], v)) {
                throw ParseError(path + " line " + std::to_string(lineno) + ": bad number `" +
                                 std::string(fields[i]) + "`");
            }
            set.points.push_back(v);
        }
        ++set.n;
    }
    set.class_names = std::move(mapper.names);
    set.ids.reserve(set.n);
    for (std::size_t p = 0; p < set.n; ++p) set.ids.push_back(std::to_string(p));
    set.source_dtype = Dtype::f64;
    return set;
}

EmbeddingSet load_jsonl(const std::string& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);

    EmbeddingSet set;
    LabelMapper mapper;
    std::size_t lineno = 0;
    bool first = true;
    for (const auto& line : lines) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("label") || !obj.contains("x")) {
            throw ParseError(path + " line " + std::to_string(lineno) +
                             ": expected an object with `label` and `x`");
        }
        if (!obj["label"].is_string() || !obj["x"].is_array()) {
            throw ParseError(path + " line " + std::to_string(lineno) +
                             ": `label` must be a string and `x` an array");
        }
        const auto& x = obj["x"];
        if (first) {
            set.d = x.size();
            first = false;
        } else if (x.size() != set.d) {
            throw ValidationError(path + " line " + std::to_string(lineno) + ": ragged row, got " +
                                  std::to_string(x.size()) + " coordinates, expected " +
                                  std::to_string(set.d));
        }
        for (const auto& v : x) {
            if (!v.is_number()) {
                throw ParseError(path + " line " + std::to_string(lineno) +
                                 ": `x` entries must be numbers");
            }
            set.points.push_back(v.get<double>());
        }
        set.labels.push_back(mapper.id_for(obj["label"].get<std::string>()));
        if (obj.contains("id")) {
            if (!obj["id"].is_string()) {
                throw ParseError(path + " line " + std::to_string(lineno) +
                                 ": `id` must be a string");
            }
            set.ids.push_back(obj["id"].get<std::string>());
        } else {
            set.ids.push_back(std::to_string(set.n));
        }
        ++set.n;
    }
    set.class_names = std::move(mapper.names);
    set.source_dtype = Dtype::f64;
    return set;
}

std::string derive_labels_path(const std::string& path) {
    std::filesystem::path p(path);
    p.replace_extension(".labels");
    return p.string();
}

EmbeddingSet load_npy_pair(const std::string& path, std::string labels_path) {
    if (labels_path.empty()) labels_path = derive_labels_path(path);
    npy::Array arr = npy::read(path);

    const std::string ltext = read_file(labels_path);
    auto lines = split_lines(ltext);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.size() != arr.rows) {
        throw DimensionError(labels_path + ": " + std::to_string(lines.size()) +
                             " labels for " + std::to_string(arr.rows) + " rows in " + path);
    }

    EmbeddingSet set;
    set.points = std::move(arr.data);
    set.n = arr.rows;
    set.d = arr.cols;
    set.source_dtype = arr.dtype;
    LabelMapper mapper;
    set.labels.reserve(set.n);
    for (const auto& line : lines) set.labels.push_back(mapper.id_for(std::string(trim(line))));
    set.class_names = std::move(mapper.names);
    set.ids.reserve(set.n);
    for (std::size_t p = 0; p < set.n; ++p) set.ids.push_back(std::to_string(p));
    return set;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path);
    return std::move(buf).str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("failed writing " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp + " to " + path);
    }
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void validate_embedding_set(const EmbeddingSet& set) {
    if (set.n < 2) throw ValidationError("need at least 2 samples, got " + std::to_string(set.n));
    if (set.d < 1) throw ValidationError("need at least 1 dimension");
    if (set.points.size() != set.n * set.d) {
        throw DimensionError("points buffer holds " + std::to_string(set.points.size()) +
                             " values, expected " + std::to_string(set.n * set.d));
    }
    if (set.labels.size() != set.n) {
        throw DimensionError(std::to_string(set.labels.size()) + " labels for " +
                             std::to_string(set.n) + " samples");
    }
    if (set.ids.size() != set.n) {
        throw DimensionError(std::to_string(set.ids.size()) + " ids for " +
                             std::to_string(set.n) + " samples");
    }
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        if (!std::isfinite(set.points[i])) {
            throw ValidationError("non-finite coordinate at row " + std::to_string(i / set.d) +
                                  ", column " + std::to_string(i % set.d));
        }
    }
    const std::size_t c = set.class_names.size();
    if (c < 2) {
        throw SingleClassError("found " + std::to_string(c) +
                               " distinct class(es); at least 2 are required because the rank "
                               "of the first differently-labeled neighbor does not exist");
    }
    std::vector<std::size_t> counts(c, 0);
    for (int label : set.labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= c) {
            throw ValidationError("label id " + std::to_string(label) + " outside 0.." +
                                  std::to_string(c - 1));
        }
        ++counts[static_cast<std::size_t>(label)];
    }
    for (std::size_t i = 0; i < c; ++i) {
        if (counts[i] == 0) {
            throw ValidationError("class id " + std::to_string(i) + " has no samples");
        }
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : set.ids) {
        if (!seen.insert(id).second) throw ValidationError("duplicate sample id `" + id + "`");
    }
}

EmbeddingSet load_embeddings(const std::string& path, FileFormat fmt,
                             const std::string& labels_path) {
    EmbeddingSet set;
    switch (fmt) {
    case FileFormat::csv: set = load_csv(path); break;
    case FileFormat::jsonl: set = load_jsonl(path); break;
    case FileFormat::npy_pair: set = load_npy_pair(path, labels_path); break;
    }
    validate_embedding_set(set);
    return set;
}

void write_embeddings(const EmbeddingSet& set, const std::string& path, FileFormat fmt,
                      const std::string& labels_path) {
    switch (fmt) {
    case FileFormat::csv: {
        std::string out;
        for (std::size_t p = 0; p < set.n; ++p) {
            out += detail::csv_field(set.class_names[static_cast<std::size_t>(set.labels[p])]);
            for (std::size_t j = 0; j < set.d; ++j) {
                out += ',';
                out += format_double(set.points[p * set.d + j]);
            }
            out += '\n';
        }
        write_file_atomic(path, out);
        break;
    }
    case FileFormat::jsonl: {
        std::string out;
        for (std::size_t p = 0; p < set.n; ++p) {
            out += "{\"id\": \"" + detail::json_escape(set.ids[p]) + "\", \"label\": \"" +
                   detail::json_escape(set.class_names[static_cast<std::size_t>(set.labels[p])]) +
                   "\", \"x\": [";
            for (std::size_t j = 0; j < set.d; ++j) {
                if (j) out += ", ";
                out += format_double(set.points[p * set.d + j]);
            }
            out += "]}\n";
        }
        write_file_atomic(path, out);
        break;
    }
    case FileFormat::npy_pair: {
        npy::Array arr;
        arr.data = set.points;
        arr.rows = set.n;
        arr.cols = set.d;
        arr.dtype = set.source_dtype;
        npy::write(path, arr);
        std::string out;
        for (std::size_t p = 0; p < set.n; ++p) {
            out += set.class_names[static_cast<std::size_t>(set.labels[p])];
            out += '\n';
        }
        write_file_atomic(labels_path.empty() ? derive_labels_path(path) : labels_path, out);
        break;
    }
    }
}

ClassIndex build_class_index(const EmbeddingSet& set) {
    ClassIndex index;
    index.members.resize(set.num_classes());
    for (std::size_t p = 0; p < set.n; ++p) {
        index.members[static_cast<std::size_t>(set.labels[p])].push_back(
            static_cast<std::uint32_t>(p));
    }
    index.sizes.reserve(index.members.size());
    for (const auto& m : index.members) index.sizes.push_back(m.size());
    return index;
}

std::vector<int> load_predictions(const std::string& path, const EmbeddingSet& set) {
    const std::string text = read_file(path);
    auto lines = split_lines(text);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() != set.n) {
        throw DimensionError(path + ": " + std::to_string(lines.size()) + " predictions for " +
                             std::to_string(set.n) + " samples");
    }
    std::unordered_map<std::string, int> to_id;
    for (std::size_t i = 0; i < set.class_names.size(); ++i) {
        to_id.emplace(set.class_names[i], static_cast<int>(i));
    }
    const int other_id = static_cast<int>(set.class_names.size());
    std::vector<int> preds;
    preds.reserve(lines.size());
    for (const auto& line : lines) {
        auto it = to_id.find(std::string(trim(line)));
        preds.push_back(it == to_id.end() ? other_id : it->second);
    }
    return preds;
}

FileFormat format_from_extension(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".csv") return FileFormat::csv;
    if (ext == ".npy") return FileFormat::npy_pair;
    if (ext == ".jsonl") return FileFormat::jsonl;
    throw IoError("cannot infer format from `" + path + "`; pass --format");
}

} // namespace kstar
