#include <stdexcept>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "damex/damex.h"
#include "handles.hpp"

using namespace capitest;

namespace {

std::vector<std::string> split_lines(const char* text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    return lines;
}

// 80 bulk points in [0, 1]^2 from a small LCG plus 16 far diagonal outliers.
DatasetHandle labeled_sample() {
    std::vector<double> values;
    std::vector<int32_t> labels;
    uint64_t state = 88172645463325252ull;
    auto next = [&] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    for (int i = 0; i < 80; ++i) {
        values.push_back(next());
        values.push_back(next());
        labels.push_back(0);
    }
    for (int i = 0; i < 16; ++i) {
        values.push_back(50.0 + i);
        values.push_back(55.0 + 2.0 * i);
        labels.push_back(1);
    }
    damex_dataset* raw = nullptr;
    REQUIRE(damex_dataset_create(values.data(), 96, 2, labels.data(), &raw) == DAMEX_OK);
    return DatasetHandle(raw);
}

}  // namespace

TEST_CASE("simulate is deterministic and reports its support") {
    damex_dataset* a_raw = nullptr;
    char* support_raw = nullptr;
    REQUIRE_OK(damex_simulate(10, 3, 0.5, 123, 50, &a_raw, &support_raw));
    DatasetHandle a(a_raw);
    StringHandle support(support_raw);

    size_t rows = 0, cols = 0;
    REQUIRE_OK(damex_dataset_rows(a.get(), &rows));
    REQUIRE_OK(damex_dataset_cols(a.get(), &cols));
    CHECK(rows == 50);
    CHECK(cols == 10);
    for (size_t j = 0; j < cols; ++j) {
        double value = 0.0;
        REQUIRE_OK(damex_dataset_value(a.get(), 0, j, &value));
        CHECK(value > 0.0);  // standard Frechet margins
    }

    const auto lines = split_lines(support.get());
    REQUIRE(lines.size() == 3);
    for (const auto& line : lines) {
        std::istringstream stream(line);
        std::string token;
        size_t members = 0;
        while (std::getline(stream, token, '+')) {
            const int index = std::stoi(token);
            CHECK(index >= 1);
            CHECK(index <= 10);
            ++members;
        }
        CHECK(members >= 2);
    }

    // Same seed reproduces both data and support; out_support is optional.
    damex_dataset* b_raw = nullptr;
    char* support2_raw = nullptr;
    REQUIRE_OK(damex_simulate(10, 3, 0.5, 123, 50, &b_raw, &support2_raw));
    DatasetHandle b(b_raw);
    StringHandle support2(support2_raw);
    CHECK(std::string(support.get()) == support2.get());
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) {
            double va = 0.0, vb = 0.0;
            REQUIRE_OK(damex_dataset_value(a.get(), i, j, &va));
            REQUIRE_OK(damex_dataset_value(b.get(), i, j, &vb));
            REQUIRE(va == vb);
        }
    }

    damex_dataset* c_raw = nullptr;
    REQUIRE_OK(damex_simulate(10, 3, 0.5, 321, 50, &c_raw, nullptr));
    DatasetHandle c(c_raw);
    double va = 0.0, vc = 0.0;
    REQUIRE_OK(damex_dataset_value(a.get(), 0, 0, &va));
    REQUIRE_OK(damex_dataset_value(c.get(), 0, 0, &vc));
    CHECK(va != vc);

    CHECK(damex_simulate(1, 1, 0.5, 0, 10, &c_raw, nullptr) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()).find("infeasible K") == 0);
}

TEST_CASE("recovery experiment fills the grid in K-major order") {
    const size_t K_values[] = {2, 3};
    const size_t n_values[] = {200};
    double means[2] = {-1.0, -1.0};
    REQUIRE_OK(damex_recovery_experiment(4, K_values, 2, n_values, 1, 2, 0.5, 0, 0.05, 0.0, 1,
                                         9, means));
    for (double mean : means) {
        CHECK(mean >= 0.0);
        CHECK(std::isfinite(mean));
    }

    double again[2] = {-1.0, -1.0};
    REQUIRE_OK(damex_recovery_experiment(4, K_values, 2, n_values, 1, 2, 0.5, 0, 0.05, 0.0, 1,
                                         9, again));
    CHECK(means[0] == again[0]);
    CHECK(means[1] == again[1]);

    CHECK(damex_recovery_experiment(4, K_values, 2, n_values, 1, 0, 0.5, 0, 0.05, 0.0, 1, 9,
                                    means) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "no runs requested");
}

TEST_CASE("rank metrics match hand-computed values") {
    const double keys[] = {4.0, 3.0, 2.0, 1.0};
    const int32_t mixed[] = {1, 0, 1, 0};
    double metric = 0.0;
    REQUIRE_OK(damex_roc_auc(keys, mixed, 4, &metric));
    CHECK(metric == 0.75);
    REQUIRE_OK(damex_pr_auc(keys, mixed, 4, &metric));
    CHECK(metric == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

    const int32_t perfect[] = {1, 1, 0, 0};
    REQUIRE_OK(damex_roc_auc(keys, perfect, 4, &metric));
    CHECK(metric == 1.0);
    REQUIRE_OK(damex_pr_auc(keys, perfect, 4, &metric));
    CHECK(metric == 1.0);

    const double tied[] = {1.0, 1.0, 1.0, 1.0};
    REQUIRE_OK(damex_roc_auc(tied, mixed, 4, &metric));
    CHECK(metric == 0.5);
    REQUIRE_OK(damex_pr_auc(tied, mixed, 4, &metric));
    CHECK(metric == 0.5);

    const int32_t constant[] = {1, 1, 1, 1};
    CHECK(damex_roc_auc(keys, constant, 4, &metric) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "degenerate labels");
    const double bad_keys[] = {1.0, std::nan(""), 2.0, 3.0};
    CHECK(damex_pr_auc(bad_keys, mixed, 4, &metric) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "invalid value: non-finite score key");
}

TEST_CASE("curves fit in n + 1 points") {
    const double keys[] = {4.0, 3.0, 2.0, 1.0};
    const int32_t labels[] = {1, 1, 0, 0};
    double xs[5], ys[5];
    size_t count = 0;
    REQUIRE_OK(damex_roc_curve(keys, labels, 4, xs, ys, 5, &count));
    REQUIRE(count == 5);
    const double roc_xs[] = {0.0, 0.0, 0.0, 0.5, 1.0};
    const double roc_ys[] = {0.0, 0.5, 1.0, 1.0, 1.0};
    for (size_t i = 0; i < 5; ++i) {
        CHECK(xs[i] == roc_xs[i]);
        CHECK(ys[i] == roc_ys[i]);
    }

    REQUIRE_OK(damex_pr_curve(keys, labels, 4, xs, ys, 5, &count));
    REQUIRE(count == 5);
    const double pr_xs[] = {0.0, 0.5, 1.0, 1.0, 1.0};
    const double pr_ys[] = {1.0, 1.0, 1.0, 2.0 / 3.0, 0.5};
    for (size_t i = 0; i < 5; ++i) {
        CHECK(xs[i] == doctest::Approx(pr_xs[i]).epsilon(1e-15));
        CHECK(ys[i] == doctest::Approx(pr_ys[i]).epsilon(1e-15));
    }

    CHECK(damex_roc_curve(keys, labels, 4, xs, ys, 4, &count) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "curve buffer too small: need 5");
}

TEST_CASE("stability scan accepts explicit and default grids") {
    damex_dataset* data_raw = nullptr;
    REQUIRE_OK(damex_simulate(3, 2, 0.5, 77, 400, &data_raw, nullptr));
    DatasetHandle data(data_raw);

    const size_t k_grid[] = {10, 20, 40};
    const double epsilon_grid[] = {0.05, 0.1};
    damex_stability_report* report_raw = nullptr;
    REQUIRE_OK(damex_stability_scan(data.get(), k_grid, 3, epsilon_grid, 2, 20, 0.1, 0.0, 1,
                                    0.8, &report_raw));
    StabilityHandle report(report_raw);

    size_t k_count = 0, epsilon_count = 0;
    REQUIRE_OK(damex_stability_k_count(report.get(), &k_count));
    REQUIRE_OK(damex_stability_epsilon_count(report.get(), &epsilon_count));
    REQUIRE(k_count == 3);
    REQUIRE(epsilon_count == 2);

    for (size_t i = 0; i < k_count; ++i) {
        size_t k = 0, charged = 0;
        double epsilon = -1.0, jaccard = -1.0;
        REQUIRE_OK(damex_stability_entry(report.get(), 0, i, &k, &epsilon, &charged, &jaccard));
        CHECK(k == k_grid[i]);
        CHECK(epsilon == 0.1);  // the k scan holds epsilon fixed
        CHECK(jaccard >= 0.0);
        CHECK(jaccard <= 1.0);
        if (i == 0) CHECK(jaccard == 1.0);
    }
    for (size_t i = 0; i < epsilon_count; ++i) {
        size_t k = 0;
        double epsilon = -1.0;
        REQUIRE_OK(damex_stability_entry(report.get(), 1, i, &k, &epsilon, nullptr, nullptr));
        CHECK(k == 20);
        CHECK(epsilon == epsilon_grid[i]);
    }
    size_t chosen_k = 0;
    double chosen_epsilon = -1.0;
    REQUIRE_OK(damex_stability_chosen(report.get(), &chosen_k, &chosen_epsilon));
    CHECK((chosen_k == 10 || chosen_k == 20 || chosen_k == 40));
    CHECK((chosen_epsilon == 0.05 || chosen_epsilon == 0.1));

    CHECK(damex_stability_entry(report.get(), 0, k_count, nullptr, nullptr, nullptr, nullptr) ==
          DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "entry index out of range");

    // Zero counts select built-in grids; the pointers may then be NULL.
    damex_stability_report* dflt_raw = nullptr;
    REQUIRE_OK(damex_stability_scan(data.get(), nullptr, 0, nullptr, 0, 0, 0.01, 0.0, 1, 0.8,
                                    &dflt_raw));
    StabilityHandle dflt(dflt_raw);
    REQUIRE_OK(damex_stability_k_count(dflt.get(), &k_count));
    REQUIRE_OK(damex_stability_epsilon_count(dflt.get(), &epsilon_count));
    CHECK(k_count >= 2);
    CHECK(k_count <= 8);
    CHECK(epsilon_count == 8);
    size_t prev_k = 0;
    for (size_t i = 0; i < k_count; ++i) {
        size_t k = 0;
        REQUIRE_OK(damex_stability_entry(dflt.get(), 0, i, &k, nullptr, nullptr, nullptr));
        CHECK(k > prev_k);
        prev_k = k;
    }

    // A non-empty grid must come with its pointer.
    CHECK(damex_stability_scan(data.get(), nullptr, 3, nullptr, 0, 0, 0.01, 0.0, 1, 0.8,
                               &dflt_raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "null argument");
}

TEST_CASE("split evaluation reports per-split and aggregate metrics") {
    const auto data = labeled_sample();
    damex_eval_report* report_raw = nullptr;
    REQUIRE_OK(damex_evaluate_splits(data.get(), 3, 0.5, 8, 0.1, 0.0, 1, 40, 64, 31,
                                     &report_raw));
    EvalHandle report(report_raw);

    size_t splits = 0;
    REQUIRE_OK(damex_eval_split_count(report.get(), &splits));
    REQUIRE(splits == 3);

    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (size_t i = 0; i < splits; ++i) {
        double metrics[4];
        REQUIRE_OK(damex_eval_split(report.get(), i, &metrics[0], &metrics[1], &metrics[2],
                                    &metrics[3]));
        for (int m = 0; m < 4; ++m) {
            CHECK(metrics[m] >= 0.0);
            CHECK(metrics[m] <= 1.0);
            sums[m] += metrics[m];
        }
    }
    double mean[4];
    REQUIRE_OK(damex_eval_mean(report.get(), &mean[0], &mean[1], &mean[2], &mean[3]));
    for (int m = 0; m < 4; ++m) {
        CHECK(mean[m] == doctest::Approx(sums[m] / 3.0).epsilon(1e-12));
    }
    double stddev[4];
    REQUIRE_OK(damex_eval_stddev(report.get(), &stddev[0], &stddev[1], &stddev[2], &stddev[3]));
    for (int m = 0; m < 4; ++m) CHECK(stddev[m] >= 0.0);

    size_t warnings = 0;
    REQUIRE_OK(damex_eval_warning_count(report.get(), &warnings));
    for (size_t i = 0; i < warnings; ++i) {
        const char* text = nullptr;
        REQUIRE_OK(damex_eval_warning(report.get(), i, &text));
        CHECK(text != nullptr);
    }
    const char* text = nullptr;
    CHECK(damex_eval_warning(report.get(), warnings, &text) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(damex_eval_split(report.get(), splits, nullptr, nullptr, nullptr, nullptr) ==
          DAMEX_ERROR_INVALID_ARGUMENT);

    // Same seed, same summary.
    damex_eval_report* again_raw = nullptr;
    REQUIRE_OK(damex_evaluate_splits(data.get(), 3, 0.5, 8, 0.1, 0.0, 1, 40, 64, 31,
                                     &again_raw));
    EvalHandle again(again_raw);
    double mean2[4];
    REQUIRE_OK(damex_eval_mean(again.get(), &mean2[0], &mean2[1], &mean2[2], &mean2[3]));
    for (int m = 0; m < 4; ++m) CHECK(mean[m] == mean2[m]);
}

TEST_CASE("split evaluation validates its inputs") {
    const auto labeled = labeled_sample();
    damex_eval_report* raw = nullptr;
    CHECK(damex_evaluate_splits(labeled.get(), 0, 0.5, 8, 0.1, 0.0, 1, 40, 64, 31, &raw) ==
          DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "no runs requested");
    CHECK(damex_evaluate_splits(labeled.get(), 3, 1.0, 8, 0.1, 0.0, 1, 40, 64, 31, &raw) ==
          DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "train fraction must lie in (0, 1)");

    const double values[] = {1.0, 2.0, 3.0, 4.0};
    damex_dataset* unlabeled_raw = nullptr;
    REQUIRE_OK(damex_dataset_create(values, 2, 2, nullptr, &unlabeled_raw));
    DatasetHandle unlabeled(unlabeled_raw);
    CHECK(damex_evaluate_splits(unlabeled.get(), 3, 0.5, 8, 0.1, 0.0, 1, 40, 64, 31, &raw) ==
          DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "degenerate labels: dataset has no labels");
}
