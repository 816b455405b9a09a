#include "kstar/npy.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "kstar/errors.hpp"

namespace kstar::npy {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::uint64_t load_le(const unsigned char* p, std::size_t bytes) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void store_le(std::string& out, std::uint64_t v, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

// Pulls the quoted or parenthesized value following 'key': out of the header
// dict literal. The header is machine-written, so this does not need a full
// Python parser, just tolerant scanning.
std::string dict_value(const std::string& header, const std::string& key, const std::string& path) {
    std::size_t pos = header.find("'" + key + "'");
    if (pos == std::string::npos) pos = header.find("\"" + key + "\"");
    if (pos == std::string::npos) throw ParseError(path + ": npy header lacks `" + key + "`");
    pos = header.find(':', pos);
    if (pos == std::string::npos) throw ParseError(path + ": malformed npy header");
    ++pos;
    while (pos < header.size() && header[pos] == ' ') ++pos;
    if (pos >= header.size()) throw ParseError(path + ": malformed npy header");
    if (header[pos] == '\'' || header[pos] == '"') {
        const char quote = header[pos];
        std::size_t end = header.find(quote, pos + 1);
        if (end == std::string::npos) throw ParseError(path + ": malformed npy header");
        return header.substr(pos + 1, end - pos - 1);
    }
    if (header[pos] == '(') {
        std::size_t end = header.find(')', pos);
        if (end == std::string::npos) throw ParseError(path + ": malformed npy header");
        return header.substr(pos, end - pos + 1);
    }
    std::size_t end = header.find_first_of(",}", pos);
    if (end == std::string::npos) throw ParseError(path + ": malformed npy header");
    std::string v = header.substr(pos, end - pos);
    while (!v.empty() && v.back() == ' ') v.pop_back();
    return v;
}

} // namespace

Array read(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, 6) != 0) {
        throw ParseError(path + ": not an npy file");
    }
    const auto* u = reinterpret_cast<const unsigned char*>(bytes.data());
    const unsigned major = u[6];
    const unsigned minor = u[7];
    if (major != 1 && major != 2) {
        throw ParseError(path + ": unsupported npy version " + std::to_string(major) + "." +
                         std::to_string(minor));
    }
    const std::size_t len_bytes = (major == 1) ? 2 : 4;
    if (bytes.size() < 8 + len_bytes) throw ParseError(path + ": truncated npy header");
    const std::uint64_t header_len = load_le(u + 8, len_bytes);
    const std::size_t data_off = 8 + len_bytes + header_len;
    if (bytes.size() < data_off) throw ParseError(path + ": truncated npy header");
    const std::string header = bytes.substr(8 + len_bytes, header_len);

    const std::string descr = dict_value(header, "descr", path);
    Array arr;
    if (descr == "<f4") arr.dtype = Dtype::f32;
    else if (descr == "<f8") arr.dtype = Dtype::f64;
    else throw ParseError(path + ": unsupported dtype `" + descr + "`, need <f4 or <f8");

    const std::string order = dict_value(header, "fortran_order", path);
    if (order != "False") throw ParseError(path + ": fortran-order arrays are not supported");

    std::string shape = dict_value(header, "shape", path);
    // expect "(n, d)" with exactly two entries
    std::uint64_t dims[2] = {0, 0};
    int ndims = 0;
    std::size_t pos = 1; // past '('
    while (pos < shape.size() && shape[pos] != ')') {
        while (pos < shape.size() && (shape[pos] == ' ' || shape[pos] == ',')) ++pos;
        if (pos >= shape.size() || shape[pos] == ')') break;
        if (shape[pos] < '0' || shape[pos] > '9') {
            throw ParseError(path + ": malformed shape " + shape);
        }
        std::uint64_t v = 0;
        while (pos < shape.size() && shape[pos] >= '0' && shape[pos] <= '9') {
            v = v * 10 + static_cast<std::uint64_t>(shape[pos] - '0');
            ++pos;
        }
        if (ndims < 2) dims[ndims] = v;
        ++ndims;
    }
    if (ndims != 2) {
        throw ParseError(path + ": expected a 2-d array, shape was " + shape);
    }
    arr.rows = dims[0];
    arr.cols = dims[1];

    const std::size_t item = (arr.dtype == Dtype::f32) ? 4 : 8;
    const std::size_t expect = arr.rows * arr.cols * item;
    if (bytes.size() - data_off != expect) {
        throw ParseError(path + ": data section holds " + std::to_string(bytes.size() - data_off) +
                         " bytes, expected " + std::to_string(expect));
    }
    arr.data.resize(arr.rows * arr.cols);
    const unsigned char* p = u + data_off;
    if (arr.dtype == Dtype::f32) {
        for (std::size_t i = 0; i < arr.data.size(); ++i, p += 4) {
            arr.data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4)));
        }
    } else {
        for (std::size_t i = 0; i < arr.data.size(); ++i, p += 8) {
            arr.data[i] = std::bit_cast<double>(load_le(p, 8));
        }
    }
    return arr;
}

void write(const std::string& path, const Array& arr) {
    if (arr.data.size() != arr.rows * arr.cols) {
        throw DimensionError("npy buffer holds " + std::to_string(arr.data.size()) +
                             " values, expected " + std::to_string(arr.rows * arr.cols));
    }
    std::string dict = "{'descr': '";
    dict += (arr.dtype == Dtype::f32) ? "<f4" : "<f8";
    dict += "', 'fortran_order': False, 'shape': (";
    dict += std::to_string(arr.rows) + ", " + std::to_string(arr.cols) + "), }";
    // pad so the full preamble is a multiple of 64, newline terminated
    std::size_t total = 10 + dict.size() + 1;
    const std::size_t pad = (64 - total % 64) % 64;
    dict.append(pad, ' ');
    dict += '\n';

    std::string out;
    out.reserve(10 + dict.size() + arr.data.size() * 8);
    out.append(kMagic, 6);
    out += '\x01';
    out += '\x00';
    store_le(out, dict.size(), 2);
    out += dict;
    if (arr.dtype == Dtype::f32) {
        for (double v : arr.data) {
            store_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
        }
    } else {
        for (double v : arr.data) store_le(out, std::bit_cast<std::uint64_t>(v), 8);
    }
    write_file_atomic(path, out);
}

} // namespace kstar::npy
