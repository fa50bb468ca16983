#include "damex/marginals.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "damex/errors.hpp"

namespace damex {

EmpiricalMarginals EmpiricalMarginals::fit(const Dataset& train) {
    if (train.rows() < 2) {
        throw std::invalid_argument("insufficient data: need at least 2 rows, got " +
                                    std::to_string(train.rows()));
    }
    EmpiricalMarginals marginals;
    marginals.sample_size_ = train.rows();
    marginals.columns_.resize(train.cols());
    for (std::size_t j = 0; j < train.cols(); ++j) {
        auto& column = marginals.columns_[j];
        column.resize(train.rows());
        for (std::size_t i = 0; i < train.rows(); ++i) {
            column[i] = train.at(i, j);
        }
        std::sort(column.begin(), column.end());
    }
    return marginals;
}

EmpiricalMarginals EmpiricalMarginals::from_sorted_columns(
    std::vector<std::vector<double>> columns) {
    if (columns.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    const std::size_t n = columns.front().size();
    if (n < 2) {
        throw std::invalid_argument("insufficient data: need at least 2 rows, got " +
                                    std::to_string(n));
    }
    for (const auto& column : columns) {
        if (column.size() != n) {
            throw dimension_error("inconsistent dimension");
        }
        if (!std::is_sorted(column.begin(), column.end())) {
            throw std::invalid_argument("marginal column not sorted");
        }
    }
    EmpiricalMarginals marginals;
    marginals.sample_size_ = n;
    marginals.columns_ = std::move(columns);
    return marginals;
}

double EmpiricalMarginals::ecdf(std::size_t feature, double x) const {
    const auto& column = columns_.at(feature);
    const auto count = std::upper_bound(column.begin(), column.end(), x) - column.begin();
    return static_cast<double>(count) / static_cast<double>(sample_size_ + 1);
}

std::vector<double> EmpiricalMarginals::transform_point(std::span<const double> point) const {
    if (point.size() != dim()) {
        throw dimension_error("wrong dimension: expected " + std::to_string(dim()) +
                                    ", got " + std::to_string(point.size()));
    }
    std::vector<double> v(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        v[j] = 1.0 / (1.0 - ecdf(j, point[j]));
    }
    return v;
}

Matrix EmpiricalMarginals::transform(const Dataset& points) const {
    if (points.cols() != dim()) {
        throw dimension_error("wrong dimension: expected " + std::to_string(dim()) +
                                    ", got " + std::to_string(points.cols()));
    }
    Matrix out(points.rows(), points.cols());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto v = transform_point(points.row(i));
        std::copy(v.begin(), v.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace damex
