#ifndef DAMEX_EVALUATION_HPP
#define DAMEX_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "damex/dataset.hpp"
#include "damex/iforest.hpp"
#include "damex/model.hpp"

namespace damex {

/// Scores with one fixed orientation: larger key = more abnormal. Labels are
/// 0 (normal) / 1 (anomaly); the anomaly class is the positive class.
struct RankedScores {
    std::vector<double> keys;
    std::vector<int> labels;
};

/// Mann-Whitney rank statistic with midrank tie handling.
double roc_auc(const RankedScores& scores);

/// Average precision: step interpolation of the precision-recall curve with
/// tied keys collapsed into one step.
double pr_auc(const RankedScores& scores);

struct CurvePoint {
    double x = 0.0;  // fpr (ROC) or recall (PR)
    double y = 0.0;  // tpr (ROC) or precision (PR)
};

/// (fpr, tpr) from (0,0) to (1,1), one point per distinct key.
std::vector<CurvePoint> roc_curve(const RankedScores& scores);

/// (recall, precision), anchored at (0, 1), one point per distinct key.
std::vector<CurvePoint> pr_curve(const RankedScores& scores);

/// Two-regime detector: the cone-mass score ranks points in the extreme
/// region, the forest ranks the rest, and each region's raw score is mapped
/// to its empirical quantile among that region's calibration (training)
/// points so the two scales can share one ROC curve. Cone scores are negated
/// before quantiling (orientation flip), which puts uncharged-cone points at
/// quantile exactly 1; among those zero-mass points the ranking key grows
/// with the standardized sup norm (farther out = more abnormal).
class CombinedScorer {
public:
    CombinedScorer(const DamexModel& model, const IsolationForest& forest,
                   const Dataset& calibration);

    struct Key {
        double key = 0.0;       // global ranking key, larger = more abnormal
        double quantile = 0.0;  // region-wise calibration quantile in [0, 1]
        double raw = 0.0;       // oriented raw score (-s for extremes, forest score else)
        bool extreme = false;
    };

    Key describe(std::span<const double> point) const;
    double score(std::span<const double> point) const { return describe(point).key; }
    std::vector<double> score_batch(const Dataset& points) const;

    /// Non-fatal calibration defects (an empty region falls back to the raw
    /// oriented score).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    const DamexModel& model_;
    const IsolationForest& forest_;
    std::vector<double> extreme_calibration_;  // sorted -s over extreme training rows
    std::vector<double> bulk_calibration_;     // sorted forest scores over the rest
    std::vector<std::string> warnings_;
};

/// One grid point of the stability scan.
struct StabilityEntry {
    std::size_t k = 0;
    double epsilon = 0.0;
    std::size_t charged = 0;      // cones with positive mass after thresholding
    double jaccard_prev = 1.0;    // charged-set similarity with the previous grid point
};

struct StabilityReport {
    std::vector<StabilityEntry> k_scan;        // epsilon held fixed
    std::vector<StabilityEntry> epsilon_scan;  // k held fixed
    std::size_t chosen_k = 0;       // largest k whose prefix of pairs all clear the level
    double chosen_epsilon = 0.0;    // same rule over the epsilon grid
    double level = 0.0;
};

struct StabilityOptions {
    std::vector<std::size_t> k_grid;   // ascending; must be non-empty
    std::vector<double> epsilon_grid;  // ascending; must be non-empty
    std::size_t k_fixed = 0;           // 0 resolves to ceil(sqrt(n))
    double epsilon_fixed = 0.01;
    std::optional<double> mu_min;      // unset = auto at every grid point
    double level = 0.9;
};

/// Log-spaced defaults covering [n^(1/4), n^(2/3)] and [1e-4, 0.1].
std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t points = 8);
std::vector<double> default_epsilon_grid(std::size_t points = 8);

/// Fits the detector across both one-dimensional grids and reports, per
/// adjacent pair, the Jaccard similarity of the charged-subset sets (two
/// empty sets count as similarity 1). The chosen value per grid is the
/// largest whose entire prefix of adjacent pairs stays at or above `level`.
StabilityReport stability_scan(const Dataset& train, const StabilityOptions& options);

struct EvalOptions {
    std::size_t splits = 20;
    double train_fraction = 0.5;
    DamexParams damex;
    IsolationForest::Options forest;
    std::uint64_t seed = 0;
};

/// Metrics of one split (or their mean / standard deviation across splits).
struct SplitMetrics {
    double roc_baseline = 0.0;
    double pr_baseline = 0.0;
    double roc_combined = 0.0;
    double pr_combined = 0.0;
};

struct EvalSummary {
    std::vector<SplitMetrics> per_split;
    SplitMetrics mean;
    SplitMetrics stddev;  // sample standard deviation; 0 with a single split
    std::vector<std::string> warnings;
};

/// Semi-supervised protocol: per split, shuffle the labeled data, train the
/// detector pair on the normal rows of the training fraction, and score the
/// remaining rows (both classes). Reports baseline-only and combined ROC/PR.
EvalSummary evaluate_splits(const Dataset& labeled, const EvalOptions& options);

}  // namespace damex

#endif
