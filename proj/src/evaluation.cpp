#include "damex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "damex/cones.hpp"
#include "damex/errors.hpp"
#include "damex/parallel.hpp"
#include "damex/rng.hpp"
#include "damex/scoring.hpp"

namespace damex {

namespace {

void validate_scores(const RankedScores& scores) {
    if (scores.keys.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    if (scores.keys.size() != scores.labels.size()) {
        throw dimension_error("inconsistent dimension");
    }
    for (double key : scores.keys) {
        if (!std::isfinite(key)) {
            throw std::invalid_argument("invalid value: non-finite score key");
        }
    }
    bool has_positive = false;
    bool has_negative = false;
    for (int label : scores.labels) {
        if (label != 0 && label != 1) {
            throw std::invalid_argument("labels must be 0 or 1");
        }
        (label == 1 ? has_positive : has_negative) = true;
    }
    if (!has_positive || !has_negative) {
        throw std::invalid_argument("degenerate labels");
    }
}

/// Indices sorted by key descending; equal keys stay grouped.
std::vector<std::size_t> descending_order(const std::vector<double>& keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    return order;
}

}  // namespace

double roc_auc(const RankedScores& scores) {
    validate_scores(scores);
    const std::size_t n = scores.keys.size();
    auto order = descending_order(scores.keys);

    // Midrank Mann-Whitney: positives get the average rank of their tie group.
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    std::size_t at = 0;
    while (at < n) {
        std::size_t end = at;
        while (end < n && scores.keys[order[end]] == scores.keys[order[at]]) {
            ++end;
        }
        // Descending position i has ascending rank n - i.
        const double midrank =
            (static_cast<double>(n - at) + static_cast<double>(n - end + 1)) / 2.0;
        for (std::size_t i = at; i < end; ++i) {
            if (scores.labels[order[i]] == 1) {
                positive_rank_sum += midrank;
                ++positives;
            }
        }
        at = end;
    }
    const std::size_t negatives = n - positives;
    return (positive_rank_sum -
            static_cast<double>(positives) * (static_cast<double>(positives) + 1.0) / 2.0) /
           (static_cast<double>(positives) * static_cast<double>(negatives));
}

double pr_auc(const RankedScores& scores) {
    validate_scores(scores);
    const std::size_t n = scores.keys.size();
    const auto order = descending_order(scores.keys);
    const double total_positives =
        static_cast<double>(std::count(scores.labels.begin(), scores.labels.end(), 1));

    double auc = 0.0;
    double recall_prev = 0.0;
    std::size_t true_positives = 0;
    std::size_t at = 0;
    while (at < n) {
        std::size_t end = at;
        while (end < n && scores.keys[order[end]] == scores.keys[order[at]]) {
            ++end;
        }
        for (std::size_t i = at; i < end; ++i) {
            true_positives += scores.labels[order[i]] == 1 ? 1 : 0;
        }
        const double precision = static_cast<double>(true_positives) / static_cast<double>(end);
        const double recall = static_cast<double>(true_positives) / total_positives;
        auc += (recall - recall_prev) * precision;
        recall_prev = recall;
        at = end;
    }
    return auc;
}

std::vector<CurvePoint> roc_curve(const RankedScores& scores) {
    validate_scores(scores);
    const std::size_t n = scores.keys.size();
    const auto order = descending_order(scores.keys);
    const double positives =
        static_cast<double>(std::count(scores.labels.begin(), scores.labels.end(), 1));
    const double negatives = static_cast<double>(n) - positives;

    std::vector<CurvePoint> curve{{0.0, 0.0}};
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t at = 0;
    while (at < n) {
        std::size_t end = at;
        while (end < n && scores.keys[order[end]] == scores.keys[order[at]]) {
            ++end;
        }
        for (std::size_t i = at; i < end; ++i) {
            (scores.labels[order[i]] == 1 ? tp : fp) += 1;
        }
        curve.push_back({static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
        at = end;
    }
    return curve;
}

std::vector<CurvePoint> pr_curve(const RankedScores& scores) {
    validate_scores(scores);
    const std::size_t n = scores.keys.size();
    const auto order = descending_order(scores.keys);
    const double positives =
        static_cast<double>(std::count(scores.labels.begin(), scores.labels.end(), 1));

    std::vector<CurvePoint> curve{{0.0, 1.0}};
    std::size_t tp = 0;
    std::size_t at = 0;
    while (at < n) {
        std::size_t end = at;
        while (end < n && scores.keys[order[end]] == scores.keys[order[at]]) {
            ++end;
        }
        for (std::size_t i = at; i < end; ++i) {
            tp += scores.labels[order[i]] == 1 ? 1 : 0;
        }
        curve.push_back({static_cast<double>(tp) / positives,
                         static_cast<double>(tp) / static_cast<double>(end)});
        at = end;
    }
    return curve;
}

CombinedScorer::CombinedScorer(const DamexModel& model, const IsolationForest& forest,
                               const Dataset& calibration)
    : model_(model), forest_(forest) {
    if (model.dim() != calibration.cols() || forest.dim() != calibration.cols()) {
        throw dimension_error("wrong dimension: models and calibration data disagree");
    }
    for (std::size_t i = 0; i < calibration.rows(); ++i) {
        const auto row = calibration.row(i);
        if (is_extreme(model, row)) {
            extreme_calibration_.push_back(-score_point(model, row));
        } else {
            bulk_calibration_.push_back(forest.score(row));
        }
    }
    std::sort(extreme_calibration_.begin(), extreme_calibration_.end());
    std::sort(bulk_calibration_.begin(), bulk_calibration_.end());
    if (extreme_calibration_.empty()) {
        warnings_.push_back(
            "no extreme calibration points; extreme-region keys fall back to raw scores");
    }
    if (bulk_calibration_.empty()) {
        warnings_.push_back(
            "no non-extreme calibration points; bulk keys fall back to raw scores");
    }
}

CombinedScorer::Key CombinedScorer::describe(std::span<const double> point) const {
    const auto report = describe_point(model_, point);
    Key key;
    key.extreme = report.extreme;
    if (report.extreme) {
        key.raw = -report.score;
        if (extreme_calibration_.empty()) {
            key.key = key.raw;
            return key;
        }
        const auto count = std::upper_bound(extreme_calibration_.begin(),
                                            extreme_calibration_.end(), key.raw) -
                           extreme_calibration_.begin();
        key.quantile =
            static_cast<double>(count) / static_cast<double>(extreme_calibration_.size());
        if (report.score == 0.0) {
            // Zero-mass cone: quantile 1 by construction; order the tie group
            // by how far out the point sits.
            key.key = 1.0 + report.sup_norm / (1.0 + report.sup_norm);
        } else {
            key.key = key.quantile;
        }
        return key;
    }

    key.raw = forest_.score(point);
    if (bulk_calibration_.empty()) {
        key.key = key.raw;
        return key;
    }
    const auto count =
        std::upper_bound(bulk_calibration_.begin(), bulk_calibration_.end(), key.raw) -
        bulk_calibration_.begin();
    key.quantile = static_cast<double>(count) / static_cast<double>(bulk_calibration_.size());
    key.key = key.quantile;
    return key;
}

std::vector<double> CombinedScorer::score_batch(const Dataset& points) const {
    std::vector<double> keys(points.rows());
    parallel_for(0, points.rows(), [&](std::size_t i) { keys[i] = score(points.row(i)); });
    return keys;
}

namespace {

std::set<FeatureSubset> charged_set(const Matrix& standardized, std::size_t k, double epsilon,
                                    const std::optional<double>& mu_min) {
    const ConeEstimate estimate = estimate_cone_masses(standardized, k, epsilon);
    const double floor = mu_min ? *mu_min : auto_mu_min(estimate);
    std::set<FeatureSubset> charged;
    for (const auto& [subset, cone] : threshold_masses(estimate.cones, floor)) {
        charged.insert(subset);
    }
    return charged;
}

double jaccard(const std::set<FeatureSubset>& a, const std::set<FeatureSubset>& b) {
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    std::size_t common = 0;
    for (const auto& subset : a) {
        common += b.contains(subset) ? 1 : 0;
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

}  // namespace

std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t points) {
    const double lo = std::max(1.0, std::ceil(std::pow(static_cast<double>(n), 0.25)));
    const double hi =
        std::max(lo, std::min(static_cast<double>(n),
                              std::floor(std::pow(static_cast<double>(n), 2.0 / 3.0))));
    std::vector<std::size_t> grid;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0
                                     : static_cast<double>(i) / static_cast<double>(points - 1);
        const auto k = static_cast<std::size_t>(std::llround(lo * std::pow(hi / lo, t)));
        if (grid.empty() || grid.back() != k) {
            grid.push_back(k);
        }
    }
    return grid;
}

std::vector<double> default_epsilon_grid(std::size_t points) {
    std::vector<double> grid;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0
                                     : static_cast<double>(i) / static_cast<double>(points - 1);
        grid.push_back(1e-4 * std::pow(0.1 / 1e-4, t));
    }
    return grid;
}

StabilityReport stability_scan(const Dataset& train, const StabilityOptions& options) {
    if (options.k_grid.empty() || options.epsilon_grid.empty()) {
        throw std::invalid_argument("empty grid");
    }
    const std::size_t n = train.rows();
    for (std::size_t k : options.k_grid) {
        if (k == 0 || k > n) {
            throw std::invalid_argument("grid values incompatible with n: k=" +
                                        std::to_string(k));
        }
    }
    for (double epsilon : options.epsilon_grid) {
        if (epsilon < 0.0 || epsilon >= 1.0) {
            throw std::invalid_argument("grid values incompatible with n: epsilon=" +
                                        std::to_string(epsilon));
        }
    }
    const std::size_t k_fixed = options.k_fixed == 0 ? default_k(n) : options.k_fixed;
    if (k_fixed > n) {
        throw std::invalid_argument("grid values incompatible with n: k=" +
                                    std::to_string(k_fixed));
    }
    if (options.epsilon_fixed < 0.0 || options.epsilon_fixed >= 1.0) {
        throw std::invalid_argument("grid values incompatible with n: epsilon=" +
                                    std::to_string(options.epsilon_fixed));
    }

    auto k_grid = options.k_grid;
    std::sort(k_grid.begin(), k_grid.end());
    k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());
    auto epsilon_grid = options.epsilon_grid;
    std::sort(epsilon_grid.begin(), epsilon_grid.end());
    epsilon_grid.erase(std::unique(epsilon_grid.begin(), epsilon_grid.end()), epsilon_grid.end());

    // One standardization serves every grid point.
    const auto marginals = EmpiricalMarginals::fit(train);
    const Matrix standardized = marginals.transform(train);

    StabilityReport report;
    report.level = options.level;

    std::set<FeatureSubset> prev;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        auto charged = charged_set(standardized, k_grid[i], options.epsilon_fixed,
                                   options.mu_min);
        StabilityEntry entry;
        entry.k = k_grid[i];
        entry.epsilon = options.epsilon_fixed;
        entry.charged = charged.size();
        entry.jaccard_prev = i == 0 ? 1.0 : jaccard(prev, charged);
        report.k_scan.push_back(entry);
        prev = std::move(charged);
    }
    prev.clear();
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        auto charged = charged_set(standardized, k_fixed, epsilon_grid[i], options.mu_min);
        StabilityEntry entry;
        entry.k = k_fixed;
        entry.epsilon = epsilon_grid[i];
        entry.charged = charged.size();
        entry.jaccard_prev = i == 0 ? 1.0 : jaccard(prev, charged);
        report.epsilon_scan.push_back(entry);
        prev = std::move(charged);
    }

    report.chosen_k = report.k_scan.front().k;
    for (std::size_t i = 1; i < report.k_scan.size(); ++i) {
        if (report.k_scan[i].jaccard_prev < options.level) {
            break;
        }
        report.chosen_k = report.k_scan[i].k;
    }
    report.chosen_epsilon = report.epsilon_scan.front().epsilon;
    for (std::size_t i = 1; i < report.epsilon_scan.size(); ++i) {
        if (report.epsilon_scan[i].jaccard_prev < options.level) {
            break;
        }
        report.chosen_epsilon = report.epsilon_scan[i].epsilon;
    }
    return report;
}

namespace {

SplitMetrics metrics_mean(const std::vector<SplitMetrics>& all) {
    SplitMetrics mean;
    for (const auto& m : all) {
        mean.roc_baseline += m.roc_baseline;
        mean.pr_baseline += m.pr_baseline;
        mean.roc_combined += m.roc_combined;
        mean.pr_combined += m.pr_combined;
    }
    const auto count = static_cast<double>(all.size());
    mean.roc_baseline /= count;
    mean.pr_baseline /= count;
    mean.roc_combined /= count;
    mean.pr_combined /= count;
    return mean;
}

SplitMetrics metrics_stddev(const std::vector<SplitMetrics>& all, const SplitMetrics& mean) {
    SplitMetrics var;
    if (all.size() < 2) {
        return var;
    }
    for (const auto& m : all) {
        var.roc_baseline += (m.roc_baseline - mean.roc_baseline) * (m.roc_baseline - mean.roc_baseline);
        var.pr_baseline += (m.pr_baseline - mean.pr_baseline) * (m.pr_baseline - mean.pr_baseline);
        var.roc_combined += (m.roc_combined - mean.roc_combined) * (m.roc_combined - mean.roc_combined);
        var.pr_combined += (m.pr_combined - mean.pr_combined) * (m.pr_combined - mean.pr_combined);
    }
    const auto dof = static_cast<double>(all.size() - 1);
    var.roc_baseline = std::sqrt(var.roc_baseline / dof);
    var.pr_baseline = std::sqrt(var.pr_baseline / dof);
    var.roc_combined = std::sqrt(var.roc_combined / dof);
    var.pr_combined = std::sqrt(var.pr_combined / dof);
    return var;
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows, bool keep_labels) {
    std::vector<double> values;
    values.reserve(rows.size() * data.cols());
    std::optional<std::vector<int>> labels;
    if (keep_labels) {
        labels.emplace();
        labels->reserve(rows.size());
    }
    for (std::size_t i : rows) {
        const auto row = data.row(i);
        values.insert(values.end(), row.begin(), row.end());
        if (keep_labels) {
            labels->push_back(data.labels()[i]);
        }
    }
    return Dataset(std::move(values), rows.size(), data.cols(), std::move(labels));
}

}  // namespace

EvalSummary evaluate_splits(const Dataset& labeled, const EvalOptions& options) {
    if (!labeled.has_labels()) {
        throw std::invalid_argument("degenerate labels: dataset has no labels");
    }
    if (options.splits == 0) {
        throw std::invalid_argument("no runs requested");
    }
    if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    const std::size_t n = labeled.rows();
    const auto n_train = static_cast<std::size_t>(
        std::floor(options.train_fraction * static_cast<double>(n)));
    if (n_train < 2 || n_train >= n) {
        throw std::invalid_argument("insufficient data: cannot split " + std::to_string(n) +
                                    " rows");
    }

    EvalSummary summary;
    for (std::size_t split = 0; split < options.splits; ++split) {
        RngEngine rng(derive_seed(options.seed, 2 * split));
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::swap(perm[i], perm[i + rng.below(n - i)]);
        }

        std::vector<std::size_t> train_rows;
        for (std::size_t i = 0; i < n_train; ++i) {
            if (labeled.labels()[perm[i]] == 0) {
                train_rows.push_back(perm[i]);
            }
        }
        if (train_rows.size() < 2) {
            throw std::invalid_argument("insufficient data: training split has " +
                                        std::to_string(train_rows.size()) + " normal rows");
        }
        const std::vector<std::size_t> test_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                                                 perm.end());

        const Dataset train = take_rows(labeled, train_rows, false);
        const Dataset test = take_rows(labeled, test_rows, true);

        const DamexModel model = fit_damex(train, options.damex);
        auto forest_options = options.forest;
        forest_options.seed = derive_seed(options.seed, 2 * split + 1);
        const IsolationForest forest = IsolationForest::fit(train, forest_options);
        const CombinedScorer scorer(model, forest, train);
        for (const auto& warning : scorer.warnings()) {
            const std::string tagged = "split " + std::to_string(split + 1) + ": " + warning;
            summary.warnings.push_back(tagged);
        }

        RankedScores baseline{forest.score_batch(test), test.labels()};
        RankedScores combined{scorer.score_batch(test), test.labels()};
        summary.per_split.push_back(SplitMetrics{
            .roc_baseline = roc_auc(baseline),
            .pr_baseline = pr_auc(baseline),
            .roc_combined = roc_auc(combined),
            .pr_combined = pr_auc(combined),
        });
    }
    summary.mean = metrics_mean(summary.per_split);
    summary.stddev = metrics_stddev(summary.per_split, summary.mean);
    return summary;
}

}  // namespace damex
