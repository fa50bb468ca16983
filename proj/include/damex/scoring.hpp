#ifndef DAMEX_SCORING_HPP
#define DAMEX_SCORING_HPP

#include <span>
#include <vector>

#include "damex/model.hpp"

namespace damex {

/// s(x) = mass(cone of T(x)) / ||T(x)||_inf. Smaller means more abnormal;
/// points landing in uncharged cones score exactly zero.
double score_point(const DamexModel& model, std::span<const double> point);

/// score_point over every row.
std::vector<double> score_batch(const DamexModel& model, const Dataset& points);

/// Whether the standardized point clears the radial threshold n/k.
bool is_extreme(const DamexModel& model, std::span<const double> point);

/// Everything scoring knows about one point, for reporting.
struct PointReport {
    double score = 0.0;
    double sup_norm = 0.0;   // of the standardized point
    bool extreme = false;
    bool charged = false;    // assigned cone holds mass
    FeatureSubset cone;      // dominant coordinates of the standardized point
};

PointReport describe_point(const DamexModel& model, std::span<const double> point);

}  // namespace damex

#endif
