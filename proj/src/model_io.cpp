#include "damex/model_io.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "damex/errors.hpp"
#include "damex/io_util.hpp"

namespace damex {

namespace {

constexpr const char* kFormatName = "damex-model";
constexpr int kFormatVersion = 1;

}  // namespace

std::string serialize_model(const DamexModel& model) {
    nlohmann::ordered_json j;
    j["format"] = kFormatName;
    j["version"] = kFormatVersion;
    j["n"] = model.sample_size();
    j["d"] = model.dim();
    j["k"] = model.k();
    j["epsilon"] = model.epsilon();
    j["mu_min"] = model.mu_min();
    j["n_extreme"] = model.n_extreme();
    j["marginals"] = model.marginals().sorted_columns();

    auto cones = nlohmann::ordered_json::array();
    for (const auto& [subset, cone] : model.charged_cones()) {
        nlohmann::ordered_json entry;
        entry["features"] = subset.to_one_based();
        entry["count"] = cone.count;
        entry["mass"] = cone.mass;
        cones.push_back(std::move(entry));
    }
    j["cones"] = std::move(cones);
    return j.dump(2) + "\n";
}

DamexModel deserialize_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("invalid model file: ") + e.what());
    }

    try {
        if (!j.is_object() || j.value("format", std::string()) != kFormatName) {
            throw format_error("invalid model file: not a " + std::string(kFormatName) + " file");
        }
        const auto version = j.at("version").get<std::int64_t>();
        if (version != kFormatVersion) {
            throw version_error("unsupported model format version " + std::to_string(version));
        }

        const auto n = j.at("n").get<std::size_t>();
        const auto d = j.at("d").get<std::size_t>();
        const auto k = j.at("k").get<std::size_t>();
        const auto epsilon = j.at("epsilon").get<double>();
        const auto mu_min = j.at("mu_min").get<double>();
        const auto n_extreme = j.at("n_extreme").get<std::size_t>();

        auto columns = j.at("marginals").get<std::vector<std::vector<double>>>();
        if (columns.size() != d) {
            throw format_error("invalid model file: marginal count does not match d");
        }
        for (const auto& column : columns) {
            if (column.size() != n) {
                throw format_error("invalid model file: marginal length does not match n");
            }
        }

        ConeMassMap charged;
        for (const auto& entry : j.at("cones")) {
            auto features = entry.at("features").get<std::vector<std::size_t>>();
            const auto count = entry.at("count").get<std::size_t>();
            const auto mass = entry.at("mass").get<double>();
            if (count == 0 || mass <= 0.0) {
                throw format_error("invalid model file: cone without mass");
            }
            const double expected = static_cast<double>(count) / static_cast<double>(k);
            if (std::abs(mass - expected) > 1e-12 * std::max(mass, expected)) {
                throw format_error("invalid model file: cone mass inconsistent with count/k");
            }
            auto subset = FeatureSubset::from_one_based(features);
            if (subset.max_index() >= d) {
                throw format_error("invalid model file: cone index out of range");
            }
            if (!charged.emplace(std::move(subset), ConeMass{count, mass}).second) {
                throw format_error("invalid model file: duplicate cone");
            }
        }

        auto marginals = EmpiricalMarginals::from_sorted_columns(std::move(columns));
        return DamexModel(std::move(marginals), k, epsilon, mu_min, n_extreme,
                          std::move(charged));
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("invalid model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw format_error(std::string("invalid model file: ") + e.what());
    }
}

void save_model(const DamexModel& model, const std::string& path) {
    write_text_atomic(path, serialize_model(model));
}

DamexModel load_model(const std::string& path) { return deserialize_model(read_text(path)); }

}  // namespace damex
