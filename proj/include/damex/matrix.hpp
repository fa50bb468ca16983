#ifndef DAMEX_MATRIX_HPP
#define DAMEX_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace damex {

/// Row-major numeric matrix for intermediate results (rank-transformed
/// points, score tables). Unlike Dataset it carries no labels and performs no
/// validation beyond shape.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
};

}  // namespace damex

#endif
