#ifndef DAMEX_DATASET_HPP
#define DAMEX_DATASET_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace damex {

/// Immutable n x d table of finite feature values with optional binary
/// labels (0 = normal, 1 = anomaly) and optional feature names. Row-major.
class Dataset {
public:
    /// Validating constructor; throws std::invalid_argument on empty input,
    /// a dimension mismatch, a non-finite value, or a label count mismatch.
    Dataset(std::vector<double> values, std::size_t rows, std::size_t cols,
            std::optional<std::vector<int>> labels = std::nullopt,
            std::vector<std::string> feature_names = {});

    /// Builds from ragged row input, enforcing the same invariants.
    static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                             std::optional<std::vector<int>> labels = std::nullopt,
                             std::vector<std::string> feature_names = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_.data() + i * cols_, cols_);
    }
    const std::vector<double>& values() const noexcept { return values_; }

    bool has_labels() const noexcept { return labels_.has_value(); }
    const std::vector<int>& labels() const { return *labels_; }

    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

private:
    std::vector<double> values_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::optional<std::vector<int>> labels_;
    std::vector<std::string> feature_names_;
};

}  // namespace damex

#endif
