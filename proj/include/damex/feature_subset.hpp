#ifndef DAMEX_FEATURE_SUBSET_HPP
#define DAMEX_FEATURE_SUBSET_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace damex {

/// Non-empty set of feature indices identifying a sub-cone. Indices are
/// stored 0-based and strictly increasing; two subsets with the same members
/// compare equal, and the ordering (lexicographic) is total, so the type can
/// key ordered maps deterministically. User-facing I/O is 1-based and
/// converted only at the serialization/printing boundary.
class FeatureSubset {
public:
    /// Takes arbitrary (possibly unsorted) indices; rejects empty input and
    /// duplicates.
    explicit FeatureSubset(std::vector<std::size_t> indices);

    /// Convenience for paper-style 1-based member lists.
    static FeatureSubset from_one_based(std::initializer_list<std::size_t> indices);
    static FeatureSubset from_one_based(const std::vector<std::size_t>& indices);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool contains(std::size_t index) const;

    /// Largest stored index; members must satisfy max_index() < d.
    std::size_t max_index() const noexcept { return indices_.back(); }

    std::vector<std::size_t> to_one_based() const;

    /// "1+4+7" (1-based, '+'-joined); the canonical display form.
    std::string to_string() const;

    friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;
    friend std::strong_ordering operator<=>(const FeatureSubset& a, const FeatureSubset& b) {
        return a.indices_ <=> b.indices_;
    }

private:
    std::vector<std::size_t> indices_;
};

}  // namespace damex

#endif
