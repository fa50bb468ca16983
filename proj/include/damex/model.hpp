#ifndef DAMEX_MODEL_HPP
#define DAMEX_MODEL_HPP

#include <cstddef>
#include <optional>

#include "damex/cone_mass.hpp"
#include "damex/dataset.hpp"
#include "damex/marginals.hpp"

namespace damex {

/// Fit-time knobs. Unset fields resolve against the training sample:
/// k = ceil(sqrt(n)), mu_min = average mass over charged cones.
struct DamexParams {
    std::size_t k = 0;             // 0 resolves to ceil(sqrt(n))
    double epsilon = 0.01;
    std::optional<double> mu_min;  // unset resolves to the charged average
};

/// Fitted detector: the training marginals (for standardizing new points),
/// the resolved parameters, and the thresholded cone masses. Cones absent
/// from `charged_cones` carry zero mass when scoring.
class DamexModel {
public:
    DamexModel(EmpiricalMarginals marginals, std::size_t k, double epsilon, double mu_min,
               std::size_t n_extreme, ConeMassMap charged_cones);

    const EmpiricalMarginals& marginals() const noexcept { return marginals_; }
    std::size_t dim() const noexcept { return marginals_.dim(); }
    std::size_t sample_size() const noexcept { return marginals_.sample_size(); }

    std::size_t k() const noexcept { return k_; }
    double epsilon() const noexcept { return epsilon_; }
    double mu_min() const noexcept { return mu_min_; }

    /// Standardized points with sup norm >= this are treated as extreme.
    double radial_threshold() const noexcept;

    std::size_t n_extreme() const noexcept { return n_extreme_; }
    const ConeMassMap& charged_cones() const noexcept { return charged_cones_; }

    /// Mass of the given cone after thresholding; zero if uncharged.
    double cone_mass(const FeatureSubset& cone) const;

private:
    EmpiricalMarginals marginals_;
    std::size_t k_;
    double epsilon_;
    double mu_min_;
    std::size_t n_extreme_;
    ConeMassMap charged_cones_;
};

/// Full estimation pass: fit marginals, standardize the training data, count
/// cone masses over the extreme rows, resolve mu_min, and threshold.
DamexModel fit_damex(const Dataset& train, const DamexParams& params = {});

/// The default k for a sample of n points.
std::size_t default_k(std::size_t n);

}  // namespace damex

#endif
