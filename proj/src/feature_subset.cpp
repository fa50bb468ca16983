#include "damex/feature_subset.hpp"

#include <algorithm>
#include <stdexcept>

namespace damex {

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw std::invalid_argument("feature subset must not be empty");
    }
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("feature subset has duplicate index");
    }
}

FeatureSubset FeatureSubset::from_one_based(std::initializer_list<std::size_t> indices) {
    return from_one_based(std::vector<std::size_t>(indices));
}

FeatureSubset FeatureSubset::from_one_based(const std::vector<std::size_t>& indices) {
    std::vector<std::size_t> zero_based;
    zero_based.reserve(indices.size());
    for (std::size_t index : indices) {
        if (index == 0) {
            throw std::invalid_argument("one-based feature index must be positive");
        }
        zero_based.push_back(index - 1);
    }
    return FeatureSubset(std::move(zero_based));
}

bool FeatureSubset::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::vector<std::size_t> FeatureSubset::to_one_based() const {
    std::vector<std::size_t> out;
    out.reserve(indices_.size());
    for (std::size_t index : indices_) {
        out.push_back(index + 1);
    }
    return out;
}

std::string FeatureSubset::to_string() const {
    std::string out;
    for (std::size_t index : indices_) {
        if (!out.empty()) {
            out += '+';
        }
        out += std::to_string(index + 1);
    }
    return out;
}

}  // namespace damex
