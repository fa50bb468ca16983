#ifndef DAMEX_CONES_HPP
#define DAMEX_CONES_HPP

#include <cstddef>
#include <span>

#include "damex/cone_mass.hpp"
#include "damex/matrix.hpp"

namespace damex {

double sup_norm(std::span<const double> v);

/// Subset of coordinates that dominate v: j is a member iff
/// v_j > epsilon * ||v||_inf. The thickened cones partition the nonnegative
/// orthant minus the origin, so every nonzero v maps to exactly one subset.
/// Rejects the origin (no direction) and epsilon outside [0, 1).
FeatureSubset assign_cone(std::span<const double> v, double epsilon);

/// Empirical cone masses over the k most-extreme standardized points.
struct ConeEstimate {
    ConeMassMap cones;
    std::size_t n_extreme = 0;   // rows with ||v||_inf >= n/k
    double total_mass = 0.0;     // n_extreme / k

    /// Number of sub-cones holding any mass.
    std::size_t charged_count() const noexcept { return cones.size(); }
};

/// Counts standardized rows whose sup norm clears the radial threshold n/k
/// (inclusive) and distributes their mass count/k over the assigned cones.
ConeEstimate estimate_cone_masses(const Matrix& standardized, std::size_t k, double epsilon);

/// Drops every cone whose mass is <= mu_min; cones must beat the floor
/// strictly to stay charged.
ConeMassMap threshold_masses(const ConeMassMap& cones, double mu_min);

/// Data-driven floor: average mass over the charged cones. Zero when nothing
/// is charged.
double auto_mu_min(const ConeEstimate& estimate);

}  // namespace damex

#endif
