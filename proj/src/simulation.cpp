#include "damex/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "damex/parallel.hpp"

namespace damex {

void validate_spec(const LogisticSpec& spec) {
    if (spec.d == 0) {
        throw std::invalid_argument("invalid spec: dimension must be positive");
    }
    if (spec.subsets.empty()) {
        throw std::invalid_argument("invalid spec: no subsets");
    }
    if (spec.w.size() != spec.subsets.size()) {
        throw std::invalid_argument("invalid spec: need one w per subset");
    }
    std::vector<bool> covered(spec.d, false);
    for (std::size_t m = 0; m < spec.subsets.size(); ++m) {
        if (spec.subsets[m].max_index() >= spec.d) {
            throw std::invalid_argument("invalid spec: subset index out of range");
        }
        if (!(spec.w[m] > 0.0 && spec.w[m] <= 1.0)) {
            throw std::invalid_argument("invalid spec: w must lie in (0, 1]");
        }
        for (std::size_t j : spec.subsets[m].indices()) {
            covered[j] = true;
        }
    }
    for (std::size_t j = 0; j < spec.d; ++j) {
        if (!covered[j]) {
            throw std::invalid_argument("invalid spec: feature " + std::to_string(j + 1) +
                                        " not covered by any subset");
        }
    }
}

double sample_positive_stable(double w, RngEngine& rng) {
    if (!(w > 0.0 && w <= 1.0)) {
        throw std::invalid_argument("w must lie in (0, 1]");
    }
    if (w == 1.0) {
        return 1.0;
    }
    // Chambers-Mallows-Stuck for the one-sided stable with E[e^{-tS}] = e^{-t^w}.
    const double u = std::numbers::pi * rng.uniform_open01();
    const double e = rng.unit_exponential();
    return std::pow(std::sin((1.0 - w) * u) / e, (1.0 - w) / w) * std::sin(w * u) /
           std::pow(std::sin(u), 1.0 / w);
}

Dataset sample_asymmetric_logistic(const LogisticSpec& spec, std::size_t n) {
    validate_spec(spec);
    if (n == 0) {
        throw std::invalid_argument("empty dataset");
    }

    // |A(j)| per feature: how many subsets share feature j.
    std::vector<double> membership(spec.d, 0.0);
    for (const auto& subset : spec.subsets) {
        for (std::size_t j : subset.indices()) {
            membership[j] += 1.0;
        }
    }

    RngEngine rng(spec.seed);
    std::vector<double> values(n * spec.d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = values.data() + i * spec.d;
        for (std::size_t m = 0; m < spec.subsets.size(); ++m) {
            const double w = spec.w[m];
            const double stable = sample_positive_stable(w, rng);
            for (std::size_t j : spec.subsets[m].indices()) {
                const double e = rng.unit_exponential();
                const double contribution = std::pow(stable / e, w) / membership[j];
                row[j] = std::max(row[j], contribution);
            }
        }
    }
    return Dataset(std::move(values), n, spec.d);
}

std::vector<FeatureSubset> random_support(std::size_t d, std::size_t K, RngEngine& rng) {
    if (d < 2) {
        throw std::invalid_argument("infeasible K: no subsets of size >= 2 in dimension " +
                                    std::to_string(d));
    }
    if (K == 0) {
        throw std::invalid_argument("infeasible K: need at least one subset");
    }
    const std::size_t max_size = std::min<std::size_t>(d, 8);

    // Count the available distinct subsets (saturating; only the comparison
    // with K matters).
    double available = 0.0;
    for (std::size_t s = 2; s <= max_size; ++s) {
        double binom = 1.0;
        for (std::size_t t = 0; t < s; ++t) {
            binom *= static_cast<double>(d - t) / static_cast<double>(t + 1);
        }
        available += binom;
    }
    if (static_cast<double>(K) > available) {
        throw std::invalid_argument("infeasible K: " + std::to_string(K) +
                                    " exceeds the distinct subsets available");
    }

    std::vector<std::size_t> scratch(d);
    std::set<FeatureSubset> drawn;
    while (drawn.size() < K) {
        const std::size_t size = 2 + rng.below(max_size - 1);
        for (std::size_t j = 0; j < d; ++j) {
            scratch[j] = j;
        }
        // Partial Fisher-Yates: the first `size` slots are a uniform draw
        // without replacement.
        for (std::size_t t = 0; t < size; ++t) {
            std::swap(scratch[t], scratch[t + rng.below(d - t)]);
        }
        drawn.emplace(std::vector<std::size_t>(scratch.begin(), scratch.begin() + size));
    }
    std::vector<FeatureSubset> support(drawn.begin(), drawn.end());

    std::vector<bool> covered(d, false);
    for (const auto& subset : support) {
        for (std::size_t j : subset.indices()) {
            covered[j] = true;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        if (covered[j]) {
            continue;
        }
        auto& target = support[rng.below(K)];
        auto indices = target.indices();
        indices.push_back(j);
        target = FeatureSubset(std::move(indices));
    }
    return support;
}

std::size_t recovery_errors(const std::vector<FeatureSubset>& true_support,
                            const ConeMassMap& estimated) {
    std::set<FeatureSubset> planted(true_support.begin(), true_support.end());
    std::size_t errors = 0;
    for (const auto& subset : planted) {
        if (!estimated.contains(subset)) {
            ++errors;  // missed
        }
    }
    for (const auto& [subset, cone] : estimated) {
        if (!planted.contains(subset)) {
            ++errors;  // falsely discovered
        }
    }
    return errors;
}

std::vector<RecoveryCell> support_recovery_experiment(const RecoveryOptions& options) {
    if (options.runs == 0) {
        throw std::invalid_argument("no runs requested");
    }
    for (std::size_t K : options.K_values) {
        if (K == 0) {
            throw std::invalid_argument("infeasible K: need at least one subset");
        }
    }
    for (std::size_t n : options.n_values) {
        if (n == 0) {
            throw std::invalid_argument("empty dataset");
        }
    }

    const std::size_t cells = options.K_values.size() * options.n_values.size();
    std::vector<std::size_t> errors(cells * options.runs, 0);
    parallel_for(
        0, cells * options.runs,
        [&](std::size_t task) {
            const std::size_t cell = task / options.runs;
            const std::size_t K = options.K_values[cell / options.n_values.size()];
            const std::size_t n = options.n_values[cell % options.n_values.size()];

            RngEngine rng(derive_seed(options.seed, 2 * task));
            LogisticSpec spec;
            spec.d = options.d;
            spec.subsets = random_support(options.d, K, rng);
            spec.w.assign(spec.subsets.size(), options.w);
            spec.seed = derive_seed(options.seed, 2 * task + 1);
            const Dataset sample = sample_asymmetric_logistic(spec, n);
            const DamexModel model = fit_damex(sample, options.params);
            errors[task] = recovery_errors(spec.subsets, model.charged_cones());
        },
        1);

    std::vector<RecoveryCell> table(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t total = 0;
        for (std::size_t run = 0; run < options.runs; ++run) {
            total += errors[cell * options.runs + run];
        }
        table[cell] = RecoveryCell{
            .K = options.K_values[cell / options.n_values.size()],
            .n = options.n_values[cell % options.n_values.size()],
            .runs = options.runs,
            .mean_errors = static_cast<double>(total) / static_cast<double>(options.runs),
        };
    }
    return table;
}

}  // namespace damex
