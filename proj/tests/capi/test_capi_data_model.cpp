#include <stdexcept>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "damex/damex.h"
#include "handles.hpp"
#include "support/temp_dir.hpp"

using namespace capitest;

namespace {

// Shared deterministic fixture: heavy-tailed data with planted two-feature
// dependence, so a fit produces charged cones worth round-tripping.
DatasetHandle simulated_data() {
    damex_dataset* raw = nullptr;
    REQUIRE(damex_simulate(3, 2, 0.5, 77, 400, &raw, nullptr) == DAMEX_OK);
    return DatasetHandle(raw);
}

ModelHandle fit_fixture(const damex_dataset* data) {
    damex_model* raw = nullptr;
    REQUIRE(damex_fit(data, 20, 0.1, 0.0, 1, &raw) == DAMEX_OK);
    return ModelHandle(raw);
}

std::vector<double> probe_point(const damex_dataset* data, size_t row) {
    size_t cols = 0;
    REQUIRE_OK(damex_dataset_cols(data, &cols));
    std::vector<double> point(cols);
    for (size_t j = 0; j < cols; ++j) {
        REQUIRE_OK(damex_dataset_value(data, row, j, &point[j]));
    }
    return point;
}

}  // namespace

TEST_CASE("library reports its version") {
    CHECK(std::string(damex_version()) == "1.0.0");
}

TEST_CASE("dataset create, accessors, and labels") {
    const double values[] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const int32_t labels[] = {0, 1};
    damex_dataset* raw = nullptr;
    REQUIRE_OK(damex_dataset_create(values, 2, 3, labels, &raw));
    DatasetHandle data(raw);

    size_t rows = 0, cols = 0;
    CHECK_OK(damex_dataset_rows(data.get(), &rows));
    CHECK_OK(damex_dataset_cols(data.get(), &cols));
    CHECK(rows == 2);
    CHECK(cols == 3);

    double value = 0.0;
    CHECK_OK(damex_dataset_value(data.get(), 1, 2, &value));
    CHECK(value == 6.0);
    CHECK(damex_dataset_value(data.get(), 2, 0, &value) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "index out of range");

    int has_labels = 0;
    CHECK_OK(damex_dataset_has_labels(data.get(), &has_labels));
    CHECK(has_labels == 1);
    int32_t copied[2] = {-1, -1};
    CHECK_OK(damex_dataset_labels(data.get(), copied));
    CHECK(copied[0] == 0);
    CHECK(copied[1] == 1);
}

TEST_CASE("dataset creation failures map to status codes") {
    damex_dataset* raw = nullptr;
    const double nan_values[] = {1.0, 2.0, std::nan(""), 4.0};
    CHECK(damex_dataset_create(nan_values, 2, 2, nullptr, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "invalid value at (row 2, col 1)");

    const double one = 1.0;
    CHECK(damex_dataset_create(&one, 0, 3, nullptr, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "empty dataset");

    const double values[] = {1.0, 2.0};
    const int32_t bad_labels[] = {0, 2};
    CHECK(damex_dataset_create(values, 2, 1, bad_labels, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "labels must be 0 or 1");

    CHECK(damex_dataset_create(nullptr, 2, 2, nullptr, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "null argument");
    CHECK(damex_dataset_create(values, 2, 1, nullptr, nullptr) == DAMEX_ERROR_INVALID_ARGUMENT);

    // The unlabeled dataset rejects label queries.
    REQUIRE_OK(damex_dataset_create(values, 2, 1, nullptr, &raw));
    DatasetHandle data(raw);
    int32_t out[2];
    CHECK(damex_dataset_labels(data.get(), out) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "dataset has no labels");
}

TEST_CASE("csv round trip preserves values bit for bit") {
    testsupport::TempDir dir("capi_csv");
    const double values[] = {1.0 / 3.0, 1e300, -2.5e-300, 0.1, 7.0, -0.0};
    const int32_t labels[] = {1, 0, 1};
    damex_dataset* raw = nullptr;
    REQUIRE_OK(damex_dataset_create(values, 3, 2, labels, &raw));
    DatasetHandle data(raw);

    const auto path = dir.file("round.csv");
    REQUIRE_OK(damex_dataset_write_csv(data.get(), path.c_str()));

    damex_dataset* back_raw = nullptr;
    REQUIRE_OK(damex_dataset_from_csv(path.c_str(), 3, &back_raw));
    DatasetHandle back(back_raw);

    size_t rows = 0, cols = 0;
    REQUIRE_OK(damex_dataset_rows(back.get(), &rows));
    REQUIRE_OK(damex_dataset_cols(back.get(), &cols));
    REQUIRE(rows == 3);
    REQUIRE(cols == 2);
    for (size_t i = 0; i < 3; ++i) {
        for (size_t j = 0; j < 2; ++j) {
            double value = 0.0;
            REQUIRE_OK(damex_dataset_value(back.get(), i, j, &value));
            CHECK(value == values[i * 2 + j]);
        }
    }
    int32_t copied[3];
    REQUIRE_OK(damex_dataset_labels(back.get(), copied));
    CHECK(copied[0] == 1);
    CHECK(copied[1] == 0);
    CHECK(copied[2] == 1);
}

TEST_CASE("csv failures distinguish io from data problems") {
    damex_dataset* raw = nullptr;
    CHECK(damex_dataset_from_csv("/nonexistent/file.csv", 0, &raw) == DAMEX_ERROR_IO);

    testsupport::TempDir dir("capi_csv_bad");
    const auto path = dir.file("bad.csv");
    std::ofstream(path) << "a,b\n1,2\n3,x\n";
    CHECK(damex_dataset_from_csv(path.c_str(), 0, &raw) == DAMEX_ERROR_DATA);
    CHECK(std::string(damex_last_error()) == "invalid number at (row 3, col 2)");
}

TEST_CASE("fit exposes the detector state") {
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());

    size_t dim = 0, n = 0, k = 0, n_extreme = 0, charged = 0;
    double epsilon = 0.0, mu_min = -1.0;
    CHECK_OK(damex_model_dim(model.get(), &dim));
    CHECK_OK(damex_model_sample_size(model.get(), &n));
    CHECK_OK(damex_model_k(model.get(), &k));
    CHECK_OK(damex_model_epsilon(model.get(), &epsilon));
    CHECK_OK(damex_model_mu_min(model.get(), &mu_min));
    CHECK_OK(damex_model_n_extreme(model.get(), &n_extreme));
    CHECK_OK(damex_model_charged_count(model.get(), &charged));
    CHECK(dim == 3);
    CHECK(n == 400);
    CHECK(k == 20);
    CHECK(epsilon == 0.1);
    CHECK(mu_min >= 0.0);
    CHECK(n_extreme >= 20);  // radial threshold is inclusive
    REQUIRE(charged >= 1);

    // Batch scoring agrees with pointwise scoring bit for bit.
    std::vector<double> batch(400);
    REQUIRE_OK(damex_score_batch(model.get(), data.get(), batch.data()));
    for (size_t i = 0; i < 10; ++i) {
        const auto point = probe_point(data.get(), i);
        double score = -1.0;
        REQUIRE_OK(damex_score(model.get(), point.data(), point.size(), &score));
        CHECK(score == batch[i]);
    }
}

TEST_CASE("charged cones are enumerable with size queries") {
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());
    size_t charged = 0;
    REQUIRE_OK(damex_model_charged_count(model.get(), &charged));
    REQUIRE(charged >= 1);

    // features = NULL asks only for the member count.
    size_t n_features = 0;
    REQUIRE_OK(damex_model_cone(model.get(), 0, nullptr, 0, &n_features, nullptr, nullptr));
    REQUIRE(n_features >= 1);
    REQUIRE(n_features <= 3);

    std::vector<size_t> features(n_features);
    double mass = 0.0;
    size_t count = 0;
    REQUIRE_OK(damex_model_cone(model.get(), 0, features.data(), features.size(), &n_features,
                                &mass, &count));
    CHECK(mass > 0.0);
    CHECK(count >= 1);
    for (size_t f : features) {
        CHECK(f >= 1);
        CHECK(f <= 3);
    }

    std::vector<size_t> small(n_features - 1);
    CHECK(damex_model_cone(model.get(), 0, small.data(), small.size(), &n_features, nullptr,
                           nullptr) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()).find("feature buffer too small") == 0);

    CHECK(damex_model_cone(model.get(), charged, nullptr, 0, &n_features, nullptr, nullptr) ==
          DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "cone index out of range");
}

TEST_CASE("save and load preserve scores bit for bit") {
    testsupport::TempDir dir("capi_model");
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());
    const auto path = dir.file("model.json");
    REQUIRE_OK(damex_model_save(model.get(), path.c_str()));

    damex_model* loaded_raw = nullptr;
    REQUIRE_OK(damex_model_load(path.c_str(), &loaded_raw));
    ModelHandle loaded(loaded_raw);

    size_t a = 0, b = 0;
    CHECK_OK(damex_model_n_extreme(model.get(), &a));
    CHECK_OK(damex_model_n_extreme(loaded.get(), &b));
    CHECK(a == b);
    CHECK_OK(damex_model_charged_count(model.get(), &a));
    CHECK_OK(damex_model_charged_count(loaded.get(), &b));
    CHECK(a == b);
    double ma = 0.0, mb = 0.0;
    CHECK_OK(damex_model_mu_min(model.get(), &ma));
    CHECK_OK(damex_model_mu_min(loaded.get(), &mb));
    CHECK(ma == mb);

    for (size_t i = 0; i < 25; ++i) {
        auto point = probe_point(data.get(), i * 7 % 400);
        for (double& x : point) x *= 1.5;
        double before = 0.0, after = 0.0;
        REQUIRE_OK(damex_score(model.get(), point.data(), point.size(), &before));
        REQUIRE_OK(damex_score(loaded.get(), point.data(), point.size(), &after));
        CHECK(before == after);
    }
}

TEST_CASE("model files from unknown revisions are rejected") {
    testsupport::TempDir dir("capi_model_bad");
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());
    const auto path = dir.file("model.json");
    REQUIRE_OK(damex_model_save(model.get(), path.c_str()));

    auto doc = nlohmann::json::parse(std::ifstream(path));
    doc["version"] = 99;
    std::ofstream(path) << doc;

    damex_model* raw = nullptr;
    CHECK(damex_model_load(path.c_str(), &raw) == DAMEX_ERROR_VERSION);
    CHECK(std::string(damex_last_error()) == "unsupported model format version 99");

    const auto garbled = dir.file("garbled.json");
    std::ofstream(garbled) << "{ not json";
    CHECK(damex_model_load(garbled.c_str(), &raw) == DAMEX_ERROR_DATA);
    CHECK(std::string(damex_last_error()).find("invalid model file") == 0);

    CHECK(damex_model_load(dir.file("missing.json").c_str(), &raw) == DAMEX_ERROR_IO);
}

TEST_CASE("shape mismatches surface as dimension errors") {
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());
    const double point[] = {5.0, 5.0};
    double score = 0.0;
    CHECK(damex_score(model.get(), point, 2, &score) == DAMEX_ERROR_DIMENSION);
    CHECK(std::string(damex_last_error()) == "wrong dimension: expected 3, got 2");
    int extreme = 0;
    CHECK(damex_is_extreme(model.get(), point, 2, &extreme) == DAMEX_ERROR_DIMENSION);
}

TEST_CASE("describe reports score, flags, norm, and cone") {
    const auto data = simulated_data();
    const auto model = fit_fixture(data.get());
    for (size_t i = 0; i < 10; ++i) {
        const auto point = probe_point(data.get(), i);
        double score = -1.0, norm = 0.0;
        int extreme = -1, charged = -1;
        size_t features[3];
        size_t n_features = 0;
        REQUIRE_OK(damex_describe(model.get(), point.data(), point.size(), &score, &extreme,
                                  &charged, &norm, features, 3, &n_features));
        CHECK(norm >= 1.0);
        CHECK(score >= 0.0);
        CHECK((extreme == 0 || extreme == 1));
        CHECK((score > 0.0) == (charged == 1));
        REQUIRE(n_features >= 1);
        for (size_t j = 0; j < n_features; ++j) {
            CHECK(features[j] >= 1);
            CHECK(features[j] <= 3);
        }

        // Every report field is optional except the cone size.
        REQUIRE_OK(damex_describe(model.get(), point.data(), point.size(), nullptr, nullptr,
                                  nullptr, nullptr, nullptr, 0, &n_features));
    }
}

TEST_CASE("forest baseline scores through the boundary") {
    const auto data = simulated_data();
    damex_forest* raw = nullptr;
    REQUIRE_OK(damex_forest_fit(data.get(), 50, 128, 5, &raw));
    ForestHandle forest(raw);

    std::vector<double> batch(400);
    REQUIRE_OK(damex_forest_score_batch(forest.get(), data.get(), batch.data()));
    for (size_t i = 0; i < 5; ++i) {
        const auto point = probe_point(data.get(), i);
        double score = -1.0;
        REQUIRE_OK(damex_forest_score(forest.get(), point.data(), point.size(), &score));
        CHECK(score == batch[i]);
        CHECK(score > 0.0);
        CHECK(score < 1.0);
    }

    // Same seed, same forest.
    damex_forest* again_raw = nullptr;
    REQUIRE_OK(damex_forest_fit(data.get(), 50, 128, 5, &again_raw));
    ForestHandle again(again_raw);
    const auto point = probe_point(data.get(), 0);
    double a = 0.0, b = 0.0;
    REQUIRE_OK(damex_forest_score(forest.get(), point.data(), point.size(), &a));
    REQUIRE_OK(damex_forest_score(again.get(), point.data(), point.size(), &b));
    CHECK(a == b);

    double score = 0.0;
    CHECK(damex_forest_score(forest.get(), point.data(), 1, &score) == DAMEX_ERROR_DIMENSION);
}

TEST_CASE("scorer snapshots its inputs") {
    const auto data = simulated_data();
    auto model = fit_fixture(data.get());
    damex_forest* forest_raw = nullptr;
    REQUIRE_OK(damex_forest_fit(data.get(), 50, 128, 5, &forest_raw));
    ForestHandle forest(forest_raw);

    damex_scorer* scorer_raw = nullptr;
    REQUIRE_OK(damex_scorer_create(model.get(), forest.get(), data.get(), &scorer_raw));
    ScorerHandle scorer(scorer_raw);

    size_t warnings = 0;
    CHECK_OK(damex_scorer_warning_count(scorer.get(), &warnings));
    CHECK(warnings == 0);
    const char* text = nullptr;
    CHECK(damex_scorer_warning(scorer.get(), warnings, &text) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "warning index out of range");

    std::vector<std::vector<double>> points;
    std::vector<double> before;
    for (size_t i = 0; i < 5; ++i) {
        points.push_back(probe_point(data.get(), i * 31 % 400));
        double key = 0.0;
        REQUIRE_OK(damex_scorer_score(scorer.get(), points.back().data(), points.back().size(),
                                      &key));
        before.push_back(key);
    }

    std::vector<double> batch(400);
    REQUIRE_OK(damex_scorer_score_batch(scorer.get(), data.get(), batch.data()));
    {
        const auto point = probe_point(data.get(), 3);
        double key = 0.0;
        REQUIRE_OK(damex_scorer_score(scorer.get(), point.data(), point.size(), &key));
        CHECK(key == batch[3]);
    }

    // The scorer owns copies: the source model and forest can go away.
    model.reset();
    forest.reset();
    for (size_t i = 0; i < points.size(); ++i) {
        double key = 0.0;
        REQUIRE_OK(damex_scorer_score(scorer.get(), points[i].data(), points[i].size(), &key));
        CHECK(key == before[i]);
    }
}

TEST_CASE("last error tracks the most recent failure") {
    damex_dataset* raw = nullptr;
    const double one = 1.0;
    REQUIRE(damex_dataset_create(&one, 0, 1, nullptr, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "empty dataset");
    REQUIRE(damex_dataset_create(nullptr, 1, 1, nullptr, &raw) == DAMEX_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(damex_last_error()) == "null argument");
}
