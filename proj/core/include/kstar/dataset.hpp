#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kstar/errors.hpp"

namespace kstar {

enum class Dtype { f32, f64 };

enum class FileFormat { csv, npy_pair, jsonl };

// n labeled points in d-dimensional latent space. Coordinates are held as
// float64 regardless of the source dtype so downstream moment statistics are
// stable; source_dtype remembers what to write back. Immutable by convention
// once built, safe to share read-only across worker threads.
struct EmbeddingSet {
    std::vector<double> points; // row-major, n * d
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<int> labels;            // dense class ids, 0..C-1
    std::vector<std::string> ids;       // unique per sample, defaults to row index
    std::vector<std::string> class_names; // id -> name, first-appearance order
    Dtype source_dtype = Dtype::f64;

    const double* row(std::size_t p) const { return points.data() + p * d; }
    std::size_t num_classes() const { return class_names.size(); }
};

// Per-class member lists. members[c] holds the row indices with label c in
// ascending order; the lists partition 0..n-1.
struct ClassIndex {
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<std::size_t> sizes;
};

// Throws ValidationError / SingleClassError / DimensionError when an
// EmbeddingSet invariant fails. load_embeddings calls this; call it yourself
// for sets assembled in memory.
void validate_embedding_set(const EmbeddingSet& set);

// labels_path is only meaningful for npy_pair (the sibling label text file)
// and required there.
EmbeddingSet load_embeddings(const std::string& path, FileFormat fmt,
                             const std::string& labels_path = "");

// Writes in any ingestible format. CSV and jsonl print shortest round-trip
// decimals; npy_pair reproduces the source dtype bit-exactly.
void write_embeddings(const EmbeddingSet& set, const std::string& path, FileFormat fmt,
                      const std::string& labels_path = "");

ClassIndex build_class_index(const EmbeddingSet& set);

// One predicted label per line, n lines. Labels outside the set's vocabulary
// map to the designated "other" id, num_classes().
std::vector<int> load_predictions(const std::string& path, const EmbeddingSet& set);

// Maps .csv/.npy/.jsonl; anything else is an IoError.
FileFormat format_from_extension(const std::string& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Whole-file read/write helpers. Writes go to a temp file in the same
// directory followed by an atomic rename, so readers never see partial output.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace kstar
