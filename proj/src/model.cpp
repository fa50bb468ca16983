#include "damex/model.hpp"

#include <cmath>
#include <stdexcept>

#include "damex/cones.hpp"

namespace damex {

DamexModel::DamexModel(EmpiricalMarginals marginals, std::size_t k, double epsilon, double mu_min,
                       std::size_t n_extreme, ConeMassMap charged_cones)
    : marginals_(std::move(marginals)),
      k_(k),
      epsilon_(epsilon),
      mu_min_(mu_min),
      n_extreme_(n_extreme),
      charged_cones_(std::move(charged_cones)) {
    if (k_ == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (k_ > marginals_.sample_size()) {
        throw std::invalid_argument("k exceeds sample size: k=" + std::to_string(k_) +
                                    ", n=" + std::to_string(marginals_.sample_size()));
    }
    if (epsilon_ < 0.0 || epsilon_ >= 1.0) {
        throw std::invalid_argument("epsilon must lie in [0, 1)");
    }
    if (mu_min_ < 0.0) {
        throw std::invalid_argument("mu_min must be nonnegative");
    }
    for (const auto& [subset, cone] : charged_cones_) {
        if (subset.max_index() >= dim()) {
            throw std::invalid_argument("cone index out of range");
        }
    }
}

double DamexModel::radial_threshold() const noexcept {
    return static_cast<double>(sample_size()) / static_cast<double>(k_);
}

double DamexModel::cone_mass(const FeatureSubset& cone) const {
    const auto it = charged_cones_.find(cone);
    return it == charged_cones_.end() ? 0.0 : it->second.mass;
}

std::size_t default_k(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

DamexModel fit_damex(const Dataset& train, const DamexParams& params) {
    if (params.epsilon < 0.0 || params.epsilon >= 1.0) {
        throw std::invalid_argument("epsilon must lie in [0, 1)");
    }
    auto marginals = EmpiricalMarginals::fit(train);
    const std::size_t k = params.k == 0 ? default_k(train.rows()) : params.k;

    const Matrix standardized = marginals.transform(train);
    const ConeEstimate estimate = estimate_cone_masses(standardized, k, params.epsilon);
    const double mu_min = params.mu_min ? *params.mu_min : auto_mu_min(estimate);
    ConeMassMap charged = threshold_masses(estimate.cones, mu_min);

    return DamexModel(std::move(marginals), k, params.epsilon, mu_min, estimate.n_extreme,
                      std::move(charged));
}

}  // namespace damex
