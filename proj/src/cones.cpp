#include "damex/cones.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace damex {

double sup_norm(std::span<const double> v) {
    double norm = 0.0;
    for (double x : v) {
        norm = std::max(norm, x);
    }
    return norm;
}

FeatureSubset assign_cone(std::span<const double> v, double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0) {
        throw std::invalid_argument("epsilon must lie in [0, 1)");
    }
    if (v.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    const double norm = sup_norm(v);
    if (norm <= 0.0) {
        throw std::invalid_argument("point at origin, no cone");
    }
    const double cut = epsilon * norm;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] > cut) {
            members.push_back(j);
        }
    }
    // The max coordinate always beats epsilon * norm for epsilon < 1.
    return FeatureSubset(std::move(members));
}

ConeEstimate estimate_cone_masses(const Matrix& standardized, std::size_t k, double epsilon) {
    const std::size_t n = standardized.rows;
    if (n == 0) {
        throw std::invalid_argument("empty dataset");
    }
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > n) {
        throw std::invalid_argument("k exceeds sample size: k=" + std::to_string(k) +
                                    ", n=" + std::to_string(n));
    }
    const double radial_threshold = static_cast<double>(n) / static_cast<double>(k);

    ConeEstimate estimate;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = standardized.row(i);
        if (sup_norm(row) < radial_threshold) {
            continue;
        }
        ++estimate.n_extreme;
        auto [it, inserted] = estimate.cones.try_emplace(assign_cone(row, epsilon));
        ++it->second.count;
    }
    for (auto& [subset, cone] : estimate.cones) {
        cone.mass = static_cast<double>(cone.count) / static_cast<double>(k);
    }
    estimate.total_mass = static_cast<double>(estimate.n_extreme) / static_cast<double>(k);
    return estimate;
}

ConeMassMap threshold_masses(const ConeMassMap& cones, double mu_min) {
    if (mu_min < 0.0) {
        throw std::invalid_argument("mu_min must be nonnegative");
    }
    ConeMassMap kept;
    for (const auto& [subset, cone] : cones) {
        if (cone.mass > mu_min) {
            kept.emplace(subset, cone);
        }
    }
    return kept;
}

double auto_mu_min(const ConeEstimate& estimate) {
    if (estimate.cones.empty()) {
        return 0.0;
    }
    return estimate.total_mass / static_cast<double>(estimate.cones.size());
}

}  // namespace damex
