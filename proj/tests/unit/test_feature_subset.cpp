#include <stdexcept>
#include <map>
#include <vector>

#include "damex/feature_subset.hpp"
#include "doctest.h"

using damex::FeatureSubset;

TEST_CASE("indices are sorted on construction") {
    const FeatureSubset subset({6, 0, 3});
    CHECK(subset.indices() == std::vector<std::size_t>{0, 3, 6});
    CHECK(subset.size() == 3);
    CHECK(subset.max_index() == 6);
}

TEST_CASE("membership queries") {
    const FeatureSubset subset({1, 4});
    CHECK(subset.contains(1));
    CHECK(subset.contains(4));
    CHECK_FALSE(subset.contains(0));
    CHECK_FALSE(subset.contains(5));
}

TEST_CASE("one-based construction and round trip") {
    const auto subset = FeatureSubset::from_one_based({1, 4, 7});
    CHECK(subset.indices() == std::vector<std::size_t>{0, 3, 6});
    CHECK(subset.to_one_based() == std::vector<std::size_t>{1, 4, 7});
    CHECK(subset.to_string() == "1+4+7");

    const std::vector<std::size_t> members{2, 5};
    CHECK(FeatureSubset::from_one_based(members).to_one_based() == members);
}

TEST_CASE("singleton display form") {
    CHECK(FeatureSubset({0}).to_string() == "1");
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_WITH_AS(FeatureSubset({}), "feature subset must not be empty",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(FeatureSubset({2, 2}), "feature subset has duplicate index",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(FeatureSubset::from_one_based({0, 1}),
                         "one-based feature index must be positive", std::invalid_argument);
}

TEST_CASE("equality ignores input order") {
    CHECK(FeatureSubset({0, 2}) == FeatureSubset({2, 0}));
    CHECK(FeatureSubset({0}) != FeatureSubset({1}));
}

TEST_CASE("ordering is lexicographic over sorted indices") {
    const FeatureSubset a({0});
    const FeatureSubset ab({0, 1});
    const FeatureSubset b({1});
    CHECK(a < ab);
    CHECK(ab < b);

    // Usable as an ordered map key with a deterministic iteration order.
    std::map<FeatureSubset, int> cones;
    cones.emplace(b, 3);
    cones.emplace(a, 1);
    cones.emplace(ab, 2);
    std::vector<int> order;
    for (const auto& [subset, value] : cones) {
        order.push_back(value);
    }
    CHECK(order == std::vector<int>{1, 2, 3});
}
