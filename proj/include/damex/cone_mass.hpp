#ifndef DAMEX_CONE_MASS_HPP
#define DAMEX_CONE_MASS_HPP

#include <cstddef>
#include <map>

#include "damex/feature_subset.hpp"

namespace damex {

/// Empirical mass of one thickened sub-cone: `count` extreme points landed in
/// it, `mass` = count / k.
struct ConeMass {
    std::size_t count = 0;
    double mass = 0.0;

    friend bool operator==(const ConeMass&, const ConeMass&) = default;
};

/// Deterministically ordered (lexicographic by member indices).
using ConeMassMap = std::map<FeatureSubset, ConeMass>;

}  // namespace damex

#endif
