#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kstar/dataset.hpp"

namespace kstar::npy {

// 2-D little-endian float array in the binary .npy container,
// magic "\x93NUMPY", versions 1.0 and 2.0, C order.
struct Array {
    std::vector<double> data; // row-major, rows * cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    Dtype dtype = Dtype::f64;
};

Array read(const std::string& path);

// Always writes a version 1.0 header. data is narrowed to float32 when
// dtype says so; every finite float32 survives the f32 -> f64 -> f32 trip
// with identical bits.
void write(const std::string& path, const Array& arr);

} // namespace kstar::npy
