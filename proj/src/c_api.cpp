#include "damex/damex.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "damex/csv.hpp"
#include "damex/dataset.hpp"
#include "damex/errors.hpp"
#include "damex/evaluation.hpp"
#include "damex/iforest.hpp"
#include "damex/model.hpp"
#include "damex/model_io.hpp"
#include "damex/rng.hpp"
#include "damex/scoring.hpp"
#include "damex/simulation.hpp"

struct damex_dataset {
    damex::Dataset impl;
};

struct damex_model {
    damex::DamexModel impl;
};

struct damex_forest {
    damex::IsolationForest impl;
};

// Owns snapshots of both models so the scorer's internal references can never
// dangle.
struct damex_scorer {
    damex::DamexModel model;
    damex::IsolationForest forest;
    damex::CombinedScorer impl;

    damex_scorer(damex::DamexModel m, damex::IsolationForest f, const damex::Dataset& calibration)
        : model(std::move(m)), forest(std::move(f)), impl(model, forest, calibration) {}
};

struct damex_stability_report {
    damex::StabilityReport impl;
};

struct damex_eval_report {
    damex::EvalSummary impl;
};

namespace {

thread_local std::string g_last_error;

damex_status fail(damex_status status, const char* message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
damex_status guarded(Fn&& fn) {
    try {
        fn();
        return DAMEX_OK;
    } catch (const damex::version_error& e) {
        return fail(DAMEX_ERROR_VERSION, e.what());
    } catch (const damex::format_error& e) {
        return fail(DAMEX_ERROR_DATA, e.what());
    } catch (const damex::parse_error& e) {
        return fail(DAMEX_ERROR_DATA, e.what());
    } catch (const damex::io_error& e) {
        return fail(DAMEX_ERROR_IO, e.what());
    } catch (const damex::dimension_error& e) {
        return fail(DAMEX_ERROR_DIMENSION, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DAMEX_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DAMEX_ERROR_INTERNAL, e.what());
    }
}

bool all_present(std::initializer_list<const void*> pointers) {
    return std::all_of(pointers.begin(), pointers.end(),
                       [](const void* p) { return p != nullptr; });
}

damex_status fail_null() { return fail(DAMEX_ERROR_INVALID_ARGUMENT, "null argument"); }

damex::DamexParams make_params(size_t k, double epsilon, double mu_min, int mu_min_auto) {
    damex::DamexParams params;
    params.k = k;
    params.epsilon = epsilon;
    if (mu_min_auto == 0) {
        params.mu_min = mu_min;
    }
    return params;
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

damex::RankedScores make_ranked(const double* keys, const int32_t* labels, size_t n) {
    damex::RankedScores scores;
    scores.keys.assign(keys, keys + n);
    scores.labels.assign(labels, labels + n);
    return scores;
}

void write_curve(const std::vector<damex::CurvePoint>& curve, double* xs, double* ys,
                 size_t capacity, size_t* count) {
    if (curve.size() > capacity) {
        throw std::invalid_argument("curve buffer too small: need " +
                                    std::to_string(curve.size()));
    }
    for (size_t i = 0; i < curve.size(); ++i) {
        xs[i] = curve[i].x;
        ys[i] = curve[i].y;
    }
    *count = curve.size();
}

void write_subset(const damex::FeatureSubset& subset, size_t* features, size_t capacity,
                  size_t* n_features) {
    const auto one_based = subset.to_one_based();
    *n_features = one_based.size();
    if (features == nullptr) {
        return;
    }
    if (one_based.size() > capacity) {
        throw std::invalid_argument("feature buffer too small: need " +
                                    std::to_string(one_based.size()));
    }
    std::copy(one_based.begin(), one_based.end(), features);
}

}  // namespace

extern "C" {

const char* damex_version(void) { return "1.0.0"; }

const char* damex_last_error(void) { return g_last_error.c_str(); }

void damex_string_free(char* text) { delete[] text; }

/* ---- datasets ---------------------------------------------------------- */

damex_status damex_dataset_create(const double* values, size_t rows, size_t cols,
                                  const int32_t* labels, damex_dataset** out) {
    if (!all_present({values, out})) return fail_null();
    return guarded([&] {
        std::optional<std::vector<int>> label_vec;
        if (labels != nullptr) {
            label_vec.emplace(labels, labels + rows);
        }
        damex::Dataset data(std::vector<double>(values, values + rows * cols), rows, cols,
                            std::move(label_vec));
        *out = new damex_dataset{std::move(data)};
    });
}

damex_status damex_dataset_from_csv(const char* path, size_t label_column, damex_dataset** out) {
    if (!all_present({path, out})) return fail_null();
    return guarded([&] {
        damex::CsvReadOptions options;
        options.label_column = label_column;
        *out = new damex_dataset{damex::read_csv(path, options)};
    });
}

damex_status damex_dataset_write_csv(const damex_dataset* data, const char* path) {
    if (!all_present({data, path})) return fail_null();
    return guarded([&] { damex::write_csv(data->impl, path); });
}

damex_status damex_dataset_rows(const damex_dataset* data, size_t* out) {
    if (!all_present({data, out})) return fail_null();
    *out = data->impl.rows();
    return DAMEX_OK;
}

damex_status damex_dataset_cols(const damex_dataset* data, size_t* out) {
    if (!all_present({data, out})) return fail_null();
    *out = data->impl.cols();
    return DAMEX_OK;
}

damex_status damex_dataset_value(const damex_dataset* data, size_t row, size_t col, double* out) {
    if (!all_present({data, out})) return fail_null();
    if (row >= data->impl.rows() || col >= data->impl.cols()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "index out of range");
    }
    *out = data->impl.at(row, col);
    return DAMEX_OK;
}

damex_status damex_dataset_has_labels(const damex_dataset* data, int* out) {
    if (!all_present({data, out})) return fail_null();
    *out = data->impl.has_labels() ? 1 : 0;
    return DAMEX_OK;
}

damex_status damex_dataset_labels(const damex_dataset* data, int32_t* out) {
    if (!all_present({data, out})) return fail_null();
    if (!data->impl.has_labels()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "dataset has no labels");
    }
    const auto& labels = data->impl.labels();
    std::copy(labels.begin(), labels.end(), out);
    return DAMEX_OK;
}

void damex_dataset_destroy(damex_dataset* data) { delete data; }

/* ---- detector fit / persistence / scoring ------------------------------ */

damex_status damex_fit(const damex_dataset* train, size_t k, double epsilon, double mu_min,
                       int mu_min_auto, damex_model** out) {
    if (!all_present({train, out})) return fail_null();
    return guarded([&] {
        *out = new damex_model{
            damex::fit_damex(train->impl, make_params(k, epsilon, mu_min, mu_min_auto))};
    });
}

damex_status damex_model_save(const damex_model* model, const char* path) {
    if (!all_present({model, path})) return fail_null();
    return guarded([&] { damex::save_model(model->impl, path); });
}

damex_status damex_model_load(const char* path, damex_model** out) {
    if (!all_present({path, out})) return fail_null();
    return guarded([&] { *out = new damex_model{damex::load_model(path)}; });
}

damex_status damex_model_dim(const damex_model* model, size_t* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.dim();
    return DAMEX_OK;
}

damex_status damex_model_sample_size(const damex_model* model, size_t* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.sample_size();
    return DAMEX_OK;
}

damex_status damex_model_k(const damex_model* model, size_t* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.k();
    return DAMEX_OK;
}

damex_status damex_model_epsilon(const damex_model* model, double* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.epsilon();
    return DAMEX_OK;
}

damex_status damex_model_mu_min(const damex_model* model, double* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.mu_min();
    return DAMEX_OK;
}

damex_status damex_model_n_extreme(const damex_model* model, size_t* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.n_extreme();
    return DAMEX_OK;
}

damex_status damex_model_charged_count(const damex_model* model, size_t* out) {
    if (!all_present({model, out})) return fail_null();
    *out = model->impl.charged_cones().size();
    return DAMEX_OK;
}

damex_status damex_model_cone(const damex_model* model, size_t index, size_t* features,
                              size_t capacity, size_t* n_features, double* mass, size_t* count) {
    if (!all_present({model, n_features})) return fail_null();
    return guarded([&] {
        const auto& cones = model->impl.charged_cones();
        if (index >= cones.size()) {
            throw std::invalid_argument("cone index out of range");
        }
        auto it = cones.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(index));
        write_subset(it->first, features, capacity, n_features);
        if (mass != nullptr) *mass = it->second.mass;
        if (count != nullptr) *count = it->second.count;
    });
}

damex_status damex_score(const damex_model* model, const double* point, size_t dim, double* out) {
    if (!all_present({model, point, out})) return fail_null();
    return guarded(
        [&] { *out = damex::score_point(model->impl, std::span<const double>(point, dim)); });
}

damex_status damex_score_batch(const damex_model* model, const damex_dataset* points,
                               double* out) {
    if (!all_present({model, points, out})) return fail_null();
    return guarded([&] {
        const auto scores = damex::score_batch(model->impl, points->impl);
        std::copy(scores.begin(), scores.end(), out);
    });
}

damex_status damex_is_extreme(const damex_model* model, const double* point, size_t dim,
                              int* out) {
    if (!all_present({model, point, out})) return fail_null();
    return guarded([&] {
        *out = damex::is_extreme(model->impl, std::span<const double>(point, dim)) ? 1 : 0;
    });
}

damex_status damex_describe(const damex_model* model, const double* point, size_t dim,
                            double* score, int* extreme, int* charged, double* sup_norm,
                            size_t* features, size_t capacity, size_t* n_features) {
    if (!all_present({model, point, n_features})) return fail_null();
    return guarded([&] {
        const auto report =
            damex::describe_point(model->impl, std::span<const double>(point, dim));
        write_subset(report.cone, features, capacity, n_features);
        if (score != nullptr) *score = report.score;
        if (extreme != nullptr) *extreme = report.extreme ? 1 : 0;
        if (charged != nullptr) *charged = report.charged ? 1 : 0;
        if (sup_norm != nullptr) *sup_norm = report.sup_norm;
    });
}

void damex_model_destroy(damex_model* model) { delete model; }

/* ---- isolation-forest baseline ----------------------------------------- */

damex_status damex_forest_fit(const damex_dataset* train, size_t n_trees, size_t subsample_size,
                              uint64_t seed, damex_forest** out) {
    if (!all_present({train, out})) return fail_null();
    return guarded([&] {
        damex::IsolationForest::Options options;
        options.n_trees = n_trees;
        options.subsample_size = subsample_size;
        options.seed = seed;
        *out = new damex_forest{damex::IsolationForest::fit(train->impl, options)};
    });
}

damex_status damex_forest_score(const damex_forest* forest, const double* point, size_t dim,
                                double* out) {
    if (!all_present({forest, point, out})) return fail_null();
    return guarded(
        [&] { *out = forest->impl.score(std::span<const double>(point, dim)); });
}

damex_status damex_forest_score_batch(const damex_forest* forest, const damex_dataset* points,
                                      double* out) {
    if (!all_present({forest, points, out})) return fail_null();
    return guarded([&] {
        const auto scores = forest->impl.score_batch(points->impl);
        std::copy(scores.begin(), scores.end(), out);
    });
}

void damex_forest_destroy(damex_forest* forest) { delete forest; }

/* ---- combined two-regime scorer ----------------------------------------- */

damex_status damex_scorer_create(const damex_model* model, const damex_forest* forest,
                                 const damex_dataset* calibration, damex_scorer** out) {
    if (!all_present({model, forest, calibration, out})) return fail_null();
    return guarded([&] {
        *out = new damex_scorer(model->impl, forest->impl, calibration->impl);
    });
}

damex_status damex_scorer_score(const damex_scorer* scorer, const double* point, size_t dim,
                                double* out) {
    if (!all_present({scorer, point, out})) return fail_null();
    return guarded(
        [&] { *out = scorer->impl.score(std::span<const double>(point, dim)); });
}

damex_status damex_scorer_score_batch(const damex_scorer* scorer, const damex_dataset* points,
                                      double* out) {
    if (!all_present({scorer, points, out})) return fail_null();
    return guarded([&] {
        const auto keys = scorer->impl.score_batch(points->impl);
        std::copy(keys.begin(), keys.end(), out);
    });
}

damex_status damex_scorer_warning_count(const damex_scorer* scorer, size_t* out) {
    if (!all_present({scorer, out})) return fail_null();
    *out = scorer->impl.warnings().size();
    return DAMEX_OK;
}

damex_status damex_scorer_warning(const damex_scorer* scorer, size_t index, const char** out) {
    if (!all_present({scorer, out})) return fail_null();
    if (index >= scorer->impl.warnings().size()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "warning index out of range");
    }
    *out = scorer->impl.warnings()[index].c_str();
    return DAMEX_OK;
}

void damex_scorer_destroy(damex_scorer* scorer) { delete scorer; }

/* ---- simulation --------------------------------------------------------- */

damex_status damex_simulate(size_t d, size_t K, double w, uint64_t seed, size_t n,
                            damex_dataset** out_data, char** out_support) {
    if (!all_present({out_data})) return fail_null();
    return guarded([&] {
        damex::RngEngine rng(damex::derive_seed(seed, 0));
        damex::LogisticSpec spec;
        spec.d = d;
        spec.subsets = damex::random_support(d, K, rng);
        spec.w.assign(spec.subsets.size(), w);
        spec.seed = damex::derive_seed(seed, 1);
        auto data = damex::sample_asymmetric_logistic(spec, n);
        if (out_support != nullptr) {
            std::string text;
            for (const auto& subset : spec.subsets) {
                if (!text.empty()) text += '\n';
                text += subset.to_string();
            }
            *out_support = copy_string(text);
        }
        *out_data = new damex_dataset{std::move(data)};
    });
}

damex_status damex_recovery_experiment(size_t d, const size_t* K_values, size_t K_count,
                                       const size_t* n_values, size_t n_count, size_t runs,
                                       double w, size_t k, double epsilon, double mu_min,
                                       int mu_min_auto, uint64_t seed, double* out_means) {
    if (!all_present({K_values, n_values, out_means})) return fail_null();
    return guarded([&] {
        damex::RecoveryOptions options;
        options.d = d;
        options.K_values.assign(K_values, K_values + K_count);
        options.n_values.assign(n_values, n_values + n_count);
        options.runs = runs;
        options.w = w;
        options.params = make_params(k, epsilon, mu_min, mu_min_auto);
        options.seed = seed;
        const auto table = damex::support_recovery_experiment(options);
        for (size_t i = 0; i < table.size(); ++i) {
            out_means[i] = table[i].mean_errors;
        }
    });
}

/* ---- evaluation --------------------------------------------------------- */

damex_status damex_roc_auc(const double* keys, const int32_t* labels, size_t n, double* out) {
    if (!all_present({keys, labels, out})) return fail_null();
    return guarded([&] { *out = damex::roc_auc(make_ranked(keys, labels, n)); });
}

damex_status damex_pr_auc(const double* keys, const int32_t* labels, size_t n, double* out) {
    if (!all_present({keys, labels, out})) return fail_null();
    return guarded([&] { *out = damex::pr_auc(make_ranked(keys, labels, n)); });
}

damex_status damex_roc_curve(const double* keys, const int32_t* labels, size_t n, double* xs,
                             double* ys, size_t capacity, size_t* count) {
    if (!all_present({keys, labels, xs, ys, count})) return fail_null();
    return guarded(
        [&] { write_curve(damex::roc_curve(make_ranked(keys, labels, n)), xs, ys, capacity, count); });
}

damex_status damex_pr_curve(const double* keys, const int32_t* labels, size_t n, double* xs,
                            double* ys, size_t capacity, size_t* count) {
    if (!all_present({keys, labels, xs, ys, count})) return fail_null();
    return guarded(
        [&] { write_curve(damex::pr_curve(make_ranked(keys, labels, n)), xs, ys, capacity, count); });
}

damex_status damex_stability_scan(const damex_dataset* train, const size_t* k_grid,
                                  size_t k_count, const double* epsilon_grid,
                                  size_t epsilon_count, size_t k_fixed, double epsilon_fixed,
                                  double mu_min, int mu_min_auto, double level,
                                  damex_stability_report** out) {
    if (!all_present({train, out})) return fail_null();
    if ((k_count > 0 && k_grid == nullptr) || (epsilon_count > 0 && epsilon_grid == nullptr)) {
        return fail_null();
    }
    return guarded([&] {
        damex::StabilityOptions options;
        if (k_count > 0) {
            options.k_grid.assign(k_grid, k_grid + k_count);
        } else {
            options.k_grid = damex::default_k_grid(train->impl.rows());
        }
        if (epsilon_count > 0) {
            options.epsilon_grid.assign(epsilon_grid, epsilon_grid + epsilon_count);
        } else {
            options.epsilon_grid = damex::default_epsilon_grid();
        }
        options.k_fixed = k_fixed;
        options.epsilon_fixed = epsilon_fixed;
        if (mu_min_auto == 0) {
            options.mu_min = mu_min;
        }
        options.level = level;
        *out = new damex_stability_report{damex::stability_scan(train->impl, options)};
    });
}

damex_status damex_stability_k_count(const damex_stability_report* report, size_t* out) {
    if (!all_present({report, out})) return fail_null();
    *out = report->impl.k_scan.size();
    return DAMEX_OK;
}

damex_status damex_stability_epsilon_count(const damex_stability_report* report, size_t* out) {
    if (!all_present({report, out})) return fail_null();
    *out = report->impl.epsilon_scan.size();
    return DAMEX_OK;
}

damex_status damex_stability_entry(const damex_stability_report* report, int which, size_t index,
                                   size_t* k, double* epsilon, size_t* charged, double* jaccard) {
    if (!all_present({report})) return fail_null();
    const auto& scan = which == 0 ? report->impl.k_scan : report->impl.epsilon_scan;
    if (index >= scan.size()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "entry index out of range");
    }
    const auto& entry = scan[index];
    if (k != nullptr) *k = entry.k;
    if (epsilon != nullptr) *epsilon = entry.epsilon;
    if (charged != nullptr) *charged = entry.charged;
    if (jaccard != nullptr) *jaccard = entry.jaccard_prev;
    return DAMEX_OK;
}

damex_status damex_stability_chosen(const damex_stability_report* report, size_t* k,
                                    double* epsilon) {
    if (!all_present({report})) return fail_null();
    if (k != nullptr) *k = report->impl.chosen_k;
    if (epsilon != nullptr) *epsilon = report->impl.chosen_epsilon;
    return DAMEX_OK;
}

void damex_stability_report_destroy(damex_stability_report* report) { delete report; }

damex_status damex_evaluate_splits(const damex_dataset* labeled, size_t splits,
                                   double train_fraction, size_t k, double epsilon,
                                   double mu_min, int mu_min_auto, size_t n_trees,
                                   size_t subsample_size, uint64_t seed,
                                   damex_eval_report** out) {
    if (!all_present({labeled, out})) return fail_null();
    return guarded([&] {
        damex::EvalOptions options;
        options.splits = splits;
        options.train_fraction = train_fraction;
        options.damex = make_params(k, epsilon, mu_min, mu_min_auto);
        options.forest.n_trees = n_trees;
        options.forest.subsample_size = subsample_size;
        options.seed = seed;
        *out = new damex_eval_report{damex::evaluate_splits(labeled->impl, options)};
    });
}

damex_status damex_eval_split_count(const damex_eval_report* report, size_t* out) {
    if (!all_present({report, out})) return fail_null();
    *out = report->impl.per_split.size();
    return DAMEX_OK;
}

namespace {

void write_metrics(const damex::SplitMetrics& metrics, double* roc_baseline, double* pr_baseline,
                   double* roc_combined, double* pr_combined) {
    if (roc_baseline != nullptr) *roc_baseline = metrics.roc_baseline;
    if (pr_baseline != nullptr) *pr_baseline = metrics.pr_baseline;
    if (roc_combined != nullptr) *roc_combined = metrics.roc_combined;
    if (pr_combined != nullptr) *pr_combined = metrics.pr_combined;
}

}  // namespace

damex_status damex_eval_split(const damex_eval_report* report, size_t index,
                              double* roc_baseline, double* pr_baseline, double* roc_combined,
                              double* pr_combined) {
    if (!all_present({report})) return fail_null();
    if (index >= report->impl.per_split.size()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "split index out of range");
    }
    write_metrics(report->impl.per_split[index], roc_baseline, pr_baseline, roc_combined,
                  pr_combined);
    return DAMEX_OK;
}

damex_status damex_eval_mean(const damex_eval_report* report, double* roc_baseline,
                             double* pr_baseline, double* roc_combined, double* pr_combined) {
    if (!all_present({report})) return fail_null();
    write_metrics(report->impl.mean, roc_baseline, pr_baseline, roc_combined, pr_combined);
    return DAMEX_OK;
}

damex_status damex_eval_stddev(const damex_eval_report* report, double* roc_baseline,
                               double* pr_baseline, double* roc_combined, double* pr_combined) {
    if (!all_present({report})) return fail_null();
    write_metrics(report->impl.stddev, roc_baseline, pr_baseline, roc_combined, pr_combined);
    return DAMEX_OK;
}

damex_status damex_eval_warning_count(const damex_eval_report* report, size_t* out) {
    if (!all_present({report, out})) return fail_null();
    *out = report->impl.warnings.size();
    return DAMEX_OK;
}

damex_status damex_eval_warning(const damex_eval_report* report, size_t index, const char** out) {
    if (!all_present({report, out})) return fail_null();
    if (index >= report->impl.warnings.size()) {
        return fail(DAMEX_ERROR_INVALID_ARGUMENT, "warning index out of range");
    }
    *out = report->impl.warnings[index].c_str();
    return DAMEX_OK;
}

void damex_eval_report_destroy(damex_eval_report* report) { delete report; }

}  // extern "C"
