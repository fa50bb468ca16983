/* C interface to the extreme-region anomaly detector.
 *
 * Conventions:
 *   - every fallible call returns damex_status; DAMEX_OK means success;
 *   - on failure damex_last_error() returns a thread-local message describing
 *     the most recent failure on the calling thread;
 *   - objects are opaque handles created into an out-parameter and released
 *     with the matching _destroy function (destroy tolerates NULL);
 *   - feature indices crossing this boundary are 1-based;
 *   - labels are 0 (normal) / 1 (anomaly).
 */
#ifndef DAMEX_H
#define DAMEX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum damex_status {
    DAMEX_OK = 0,
    DAMEX_ERROR_INVALID_ARGUMENT = 1, /* precondition violated */
    DAMEX_ERROR_DIMENSION = 2,        /* shapes disagree */
    DAMEX_ERROR_DATA = 3,             /* unusable file content */
    DAMEX_ERROR_IO = 4,               /* file system failure */
    DAMEX_ERROR_VERSION = 5,          /* model file from an unknown revision */
    DAMEX_ERROR_INTERNAL = 6
} damex_status;

typedef struct damex_dataset damex_dataset;
typedef struct damex_model damex_model;
typedef struct damex_forest damex_forest;
typedef struct damex_scorer damex_scorer;
typedef struct damex_stability_report damex_stability_report;
typedef struct damex_eval_report damex_eval_report;

/* Library semantic version, e.g. "1.0.0". */
const char* damex_version(void);

/* Message of the last failure on this thread; "" if none. The pointer stays
 * valid until the next failing call on the same thread. */
const char* damex_last_error(void);

/* Frees strings returned through char** out-parameters. */
void damex_string_free(char* text);

/* ---- datasets ---------------------------------------------------------- */

/* Copies rows*cols values (row-major). labels may be NULL for unlabeled
 * data. Rejects non-finite values and empty shapes. */
damex_status damex_dataset_create(const double* values, size_t rows, size_t cols,
                                  const int32_t* labels, damex_dataset** out);

/* Reads a comma-delimited file with one header row. label_column is the
 * 1-based position of the label column, or 0 when the file is unlabeled. */
damex_status damex_dataset_from_csv(const char* path, size_t label_column, damex_dataset** out);

/* Writes features (and a trailing "label" column when labeled); values in
 * shortest-round-trip decimal form; atomic replace. */
damex_status damex_dataset_write_csv(const damex_dataset* data, const char* path);

damex_status damex_dataset_rows(const damex_dataset* data, size_t* out);
damex_status damex_dataset_cols(const damex_dataset* data, size_t* out);
damex_status damex_dataset_value(const damex_dataset* data, size_t row, size_t col, double* out);
damex_status damex_dataset_has_labels(const damex_dataset* data, int* out);
/* Copies all labels into `out` (length = rows). */
damex_status damex_dataset_labels(const damex_dataset* data, int32_t* out);

void damex_dataset_destroy(damex_dataset* data);

/* ---- detector fit / persistence / scoring ------------------------------ */

/* k = 0 picks ceil(sqrt(n)); mu_min_auto != 0 ignores mu_min and uses the
 * average mass over charged cones. epsilon must lie in [0, 1). */
damex_status damex_fit(const damex_dataset* train, size_t k, double epsilon, double mu_min,
                       int mu_min_auto, damex_model** out);

damex_status damex_model_save(const damex_model* model, const char* path);
damex_status damex_model_load(const char* path, damex_model** out);

damex_status damex_model_dim(const damex_model* model, size_t* out);
damex_status damex_model_sample_size(const damex_model* model, size_t* out);
damex_status damex_model_k(const damex_model* model, size_t* out);
damex_status damex_model_epsilon(const damex_model* model, double* out);
damex_status damex_model_mu_min(const damex_model* model, double* out);
damex_status damex_model_n_extreme(const damex_model* model, size_t* out);
damex_status damex_model_charged_count(const damex_model* model, size_t* out);

/* Charged cone number `index` (0-based enumeration in canonical order).
 * Writes up to capacity 1-based feature indices and the true member count
 * into *n_features; fails with DAMEX_ERROR_INVALID_ARGUMENT when capacity is
 * too small. mass/count may be NULL if not wanted. */
damex_status damex_model_cone(const damex_model* model, size_t index, size_t* features,
                              size_t capacity, size_t* n_features, double* mass, size_t* count);

/* Cone-mass score of one point; smaller = more abnormal. */
damex_status damex_score(const damex_model* model, const double* point, size_t dim, double* out);
/* One score per row of `points` into `out` (length = rows). */
damex_status damex_score_batch(const damex_model* model, const damex_dataset* points,
                               double* out);
damex_status damex_is_extreme(const damex_model* model, const double* point, size_t dim,
                              int* out);

/* Full per-point report: score, extreme/charged flags, standardized sup
 * norm, and the assigned cone (1-based indices, as in damex_model_cone).
 * Any output pointer except n_features may be NULL. */
damex_status damex_describe(const damex_model* model, const double* point, size_t dim,
                            double* score, int* extreme, int* charged, double* sup_norm,
                            size_t* features, size_t capacity, size_t* n_features);

void damex_model_destroy(damex_model* model);

/* ---- isolation-forest baseline ----------------------------------------- */

/* subsample_size is clamped to the number of rows. Scores from this model
 * are in (0, 1) and LARGER = more abnormal. */
damex_status damex_forest_fit(const damex_dataset* train, size_t n_trees, size_t subsample_size,
                              uint64_t seed, damex_forest** out);
damex_status damex_forest_score(const damex_forest* forest, const double* point, size_t dim,
                                double* out);
damex_status damex_forest_score_batch(const damex_forest* forest, const damex_dataset* points,
                                      double* out);
void damex_forest_destroy(damex_forest* forest);

/* ---- combined two-regime scorer ----------------------------------------- */

/* Snapshots the model and forest, so they may be destroyed afterwards.
 * calibration should be the training data. Keys are larger-is-abnormal. */
damex_status damex_scorer_create(const damex_model* model, const damex_forest* forest,
                                 const damex_dataset* calibration, damex_scorer** out);
damex_status damex_scorer_score(const damex_scorer* scorer, const double* point, size_t dim,
                                double* out);
damex_status damex_scorer_score_batch(const damex_scorer* scorer, const damex_dataset* points,
                                      double* out);
damex_status damex_scorer_warning_count(const damex_scorer* scorer, size_t* out);
/* Pointer valid while the scorer lives. */
damex_status damex_scorer_warning(const damex_scorer* scorer, size_t index, const char** out);
void damex_scorer_destroy(damex_scorer* scorer);

/* ---- simulation --------------------------------------------------------- */

/* Draws a random planted support of K subsets in dimension d (sizes 2 to
 * min(d, 8), every feature covered), then samples n points from the
 * asymmetric logistic model with dependence w. If out_support is non-NULL it
 * receives a newline-separated list of "+"-joined 1-based subsets (free with
 * damex_string_free). */
damex_status damex_simulate(size_t d, size_t K, double w, uint64_t seed, size_t n,
                            damex_dataset** out_data, char** out_support);

/* Support-recovery experiment over the (K, n) grid; writes K_count*n_count
 * mean error values into out_means in K-major order. Detector parameters as
 * in damex_fit. */
damex_status damex_recovery_experiment(size_t d, const size_t* K_values, size_t K_count,
                                       const size_t* n_values, size_t n_count, size_t runs,
                                       double w, size_t k, double epsilon, double mu_min,
                                       int mu_min_auto, uint64_t seed, double* out_means);

/* ---- evaluation --------------------------------------------------------- */

/* ROC AUC (midrank ties) of larger-is-abnormal keys against 0/1 labels. */
damex_status damex_roc_auc(const double* keys, const int32_t* labels, size_t n, double* out);
/* Average precision with the anomaly class positive. */
damex_status damex_pr_auc(const double* keys, const int32_t* labels, size_t n, double* out);

/* Curve points into xs/ys (fpr/tpr for ROC, recall/precision for PR).
 * capacity n+1 always suffices; *count receives the points written. */
damex_status damex_roc_curve(const double* keys, const int32_t* labels, size_t n, double* xs,
                             double* ys, size_t capacity, size_t* count);
damex_status damex_pr_curve(const double* keys, const int32_t* labels, size_t n, double* xs,
                            double* ys, size_t capacity, size_t* count);

/* Stability scan over one k grid (epsilon fixed) and one epsilon grid (k
 * fixed; k_fixed = 0 picks ceil(sqrt(n))). mu_min/mu_min_auto as in
 * damex_fit. Grids are sorted and deduplicated internally; a count of 0
 * selects the default grid (k log-spaced over [n^(1/4), n^(2/3)], epsilon
 * over [1e-4, 0.1]) and the pointer may then be NULL. */
damex_status damex_stability_scan(const damex_dataset* train, const size_t* k_grid,
                                  size_t k_count, const double* epsilon_grid,
                                  size_t epsilon_count, size_t k_fixed, double epsilon_fixed,
                                  double mu_min, int mu_min_auto, double level,
                                  damex_stability_report** out);
damex_status damex_stability_k_count(const damex_stability_report* report, size_t* out);
damex_status damex_stability_epsilon_count(const damex_stability_report* report, size_t* out);
/* Entry of the k scan (which = 0) or the epsilon scan (which = 1). */
damex_status damex_stability_entry(const damex_stability_report* report, int which, size_t index,
                                   size_t* k, double* epsilon, size_t* charged, double* jaccard);
damex_status damex_stability_chosen(const damex_stability_report* report, size_t* k,
                                    double* epsilon);
void damex_stability_report_destroy(damex_stability_report* report);

/* Semi-supervised split protocol on a labeled dataset: per split, train the
 * detector pair on the normal rows of the training fraction and score the
 * rest. Forest parameters as in damex_forest_fit. */
damex_status damex_evaluate_splits(const damex_dataset* labeled, size_t splits,
                                   double train_fraction, size_t k, double epsilon,
                                   double mu_min, int mu_min_auto, size_t n_trees,
                                   size_t subsample_size, uint64_t seed,
                                   damex_eval_report** out);
damex_status damex_eval_split_count(const damex_eval_report* report, size_t* out);
/* Metrics of one split: baseline-only and combined ROC/PR AUCs. */
damex_status damex_eval_split(const damex_eval_report* report, size_t index,
                              double* roc_baseline, double* pr_baseline, double* roc_combined,
                              double* pr_combined);
damex_status damex_eval_mean(const damex_eval_report* report, double* roc_baseline,
                             double* pr_baseline, double* roc_combined, double* pr_combined);
damex_status damex_eval_stddev(const damex_eval_report* report, double* roc_baseline,
                               double* pr_baseline, double* roc_combined, double* pr_combined);
damex_status damex_eval_warning_count(const damex_eval_report* report, size_t* out);
damex_status damex_eval_warning(const damex_eval_report* report, size_t index, const char** out);
void damex_eval_report_destroy(damex_eval_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DAMEX_H */
