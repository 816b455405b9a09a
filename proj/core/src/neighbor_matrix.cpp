#include "kstar/neighbor_matrix.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "kstar/neighbors.hpp"
#include "internal_util.hpp"

namespace kstar {

namespace {

std::vector<std::uint8_t> matrix_row(const EmbeddingSet& set, std::size_t p, int c,
                                     const Metric& m) {
    const NeighborOrder order = sorted_neighbors(set, p, m);
    std::vector<std::uint8_t> row(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        row[r] = set.labels[order[r].index] == c ? 1 : 0;
    }
    return row;
}

std::uint32_t rank_from_row(const std::vector<std::uint8_t>& row) {
    for (std::size_t r = 0; r < row.size(); ++r) {
        if (row[r] == 0) return static_cast<std::uint32_t>(r + 1);
    }
    // Every neighbor shares the class, which validation rules out upstream.
    return static_cast<std::uint32_t>(row.size() + 1);
}

} // namespace

NeighborMatrix build_neighbor_matrix(const EmbeddingSet& set, const ClassIndex& index, int c,
                                     const Metric& m, int threads) {
    const auto& members = index.members[static_cast<std::size_t>(c)];
    if (index.members.size() < 2) {
        throw SingleClassError("neighbor matrix needs at least 2 classes");
    }

    std::vector<std::vector<std::uint8_t>> rows(members.size());
    std::size_t workers = threads <= 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : static_cast<std::size_t>(threads);
    workers = std::min(workers, members.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            rows[i] = matrix_row(set, members[i], c, m);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        const std::size_t chunk = (members.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(members.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, w, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) {
                        rows[i] = matrix_row(set, members[i], c, m);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    // Display order: descending rank of the first differently-labeled
    // neighbor, ties by ascending sample index.
    std::vector<std::uint32_t> ranks(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) ranks[i] = rank_from_row(rows[i]);
    std::vector<std::size_t> perm(members.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (ranks[a] != ranks[b]) return ranks[a] > ranks[b];
        return members[a] < members[b];
    });

    NeighborMatrix mat;
    mat.class_id = c;
    mat.cols = set.n - 1;
    mat.row_order.reserve(members.size());
    mat.rows.reserve(members.size());
    for (std::size_t i : perm) {
        mat.row_order.push_back(members[i]);
        mat.rows.push_back(std::move(rows[i]));
    }
    return mat;
}

void write_matrix_csv(const NeighborMatrix& mat, const std::string& path) {
    std::string out;
    out.reserve(mat.rows.size() * (mat.cols * 2 + 1));
    for (const auto& row : mat.rows) {
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (r) out += ',';
            out += row[r] ? '1' : '0';
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_matrix_svg(const NeighborMatrix& mat, const std::string& path,
                      const std::string& class_name) {
    const double cell = 3.0;
    const double margin = 30.0;
    const double width = margin * 2 + cell * static_cast<double>(mat.cols);
    const double height = margin * 2 + cell * static_cast<double>(mat.rows.size());
    const std::size_t class_size = mat.rows.size();

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
           " " + format_double(height) + "\">\n";
    out += "  <title>neighbor ranks, class " + detail::xml_escape(class_name) + "</title>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (std::size_t i = 0; i < mat.rows.size(); ++i) {
        const auto& row = mat.rows[i];
        const double y = margin + cell * static_cast<double>(i);
        std::size_t start = 0;
        while (start < row.size()) {
            std::size_t end = start;
            while (end < row.size() && row[end] == row[start]) ++end;
            const double x = margin + cell * static_cast<double>(start);
            const double w = cell * static_cast<double>(end - start);
            out += "  <rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
                   "\" width=\"" + format_double(w) + "\" height=\"" + format_double(cell) +
                   "\" fill=\"" + (row[start] ? "#2ca02c" : "#bbbbbb") + "\"/>\n";
            start = end;
        }
    }

    // Diagonal reading aid from rank 0 at the first row to rank |S_c| at the
    // last row.
    out += "  <line x1=\"" + format_double(margin) + "\" y1=\"" + format_double(margin) +
           "\" x2=\"" + format_double(margin + cell * static_cast<double>(class_size)) +
           "\" y2=\"" + format_double(margin + cell * static_cast<double>(mat.rows.size())) +
           "\" stroke=\"#000000\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";

    out += "  <text x=\"" + format_double(margin) + "\" y=\"" + format_double(margin - 10.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\">class " +
           detail::xml_escape(class_name) + ", rows sorted by first different-class rank</text>\n";
    out += "</svg>\n";
    write_file_atomic(path, out);
}

} // namespace kstar
