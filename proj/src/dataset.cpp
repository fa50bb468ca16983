#include "damex/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "damex/errors.hpp"

namespace damex {

namespace {

void check_values(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::isfinite(values[i * cols + j])) {
                throw std::invalid_argument("invalid value at (row " + std::to_string(i + 1) +
                                            ", col " + std::to_string(j + 1) + ")");
            }
        }
    }
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::size_t rows, std::size_t cols,
                 std::optional<std::vector<int>> labels, std::vector<std::string> feature_names)
    : values_(std::move(values)),
      rows_(rows),
      cols_(cols),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("empty dataset");
    if (values_.size() != rows_ * cols_) throw dimension_error("inconsistent dimension");
    check_values(values_, rows_, cols_);
    if (labels_ && labels_->size() != rows_) {
        throw std::invalid_argument("label count does not match row count");
    }
    if (labels_) {
        for (int v : *labels_) {
            if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
        }
    }
    if (!feature_names_.empty() && feature_names_.size() != cols_) {
        throw std::invalid_argument("feature name count does not match column count");
    }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::optional<std::vector<int>> labels,
                           std::vector<std::string> feature_names) {
    if (rows.empty()) throw std::invalid_argument("empty dataset");
    const std::size_t cols = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw dimension_error("inconsistent dimension");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Dataset(std::move(flat), rows.size(), cols, std::move(labels), std::move(feature_names));
}

}  // namespace damex
