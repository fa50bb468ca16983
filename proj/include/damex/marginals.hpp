#ifndef DAMEX_MARGINALS_HPP
#define DAMEX_MARGINALS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "damex/dataset.hpp"
#include "damex/matrix.hpp"

namespace damex {

/// Per-feature empirical CDFs fitted on training data, and the induced
/// standardization onto the Pareto scale.
///
/// The ECDF uses the n+1 denominator, F(x) = #{train values <= x} / (n+1),
/// so F < 1 everywhere and the transform v_j = 1 / (1 - F_j(x_j)) is finite
/// for any input, training point or not. Transformed coordinates lie in
/// [1, n+1].
class EmpiricalMarginals {
public:
    /// Needs at least two rows to carry distributional information.
    static EmpiricalMarginals fit(const Dataset& train);

    std::size_t dim() const noexcept { return columns_.size(); }
    std::size_t sample_size() const noexcept { return sample_size_; }

    /// F_j(x) for the j-th (0-based) feature.
    double ecdf(std::size_t feature, double x) const;

    /// v_j = 1 / (1 - F_j(x_j)) for every coordinate.
    std::vector<double> transform_point(std::span<const double> point) const;

    /// Row-wise transform_point.
    Matrix transform(const Dataset& points) const;

    /// Reassemble from persisted state: one ascending-sorted column of
    /// training values per feature.
    static EmpiricalMarginals from_sorted_columns(std::vector<std::vector<double>> columns);

    const std::vector<std::vector<double>>& sorted_columns() const noexcept { return columns_; }

private:
    EmpiricalMarginals() = default;

    std::vector<std::vector<double>> columns_;  // each ascending
    std::size_t sample_size_ = 0;
};

}  // namespace damex

#endif
