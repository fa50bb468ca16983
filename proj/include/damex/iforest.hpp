#ifndef DAMEX_IFOREST_HPP
#define DAMEX_IFOREST_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "damex/dataset.hpp"

namespace damex {

/// Standard isolation forest: random binary partition trees over independent
/// subsamples; abnormality = short average isolation depth. Score is in
/// (0, 1) and LARGER means more abnormal (the opposite orientation of the
/// cone-mass score; the evaluation layer reconciles the two).
class IsolationForest {
public:
    struct Options {
        std::size_t n_trees = 100;
        std::size_t subsample_size = 256;  // clamped to n at fit time
        std::uint64_t seed = 0;
    };

    /// Grows n_trees trees, each on a uniform subsample without replacement,
    /// splitting a uniformly chosen splittable feature at a uniform value in
    /// its node range, to depth ceil(log2(subsample)). Constant (unsplittable)
    /// features are skipped at each node; a node with no splittable feature
    /// becomes a leaf.
    static IsolationForest fit(const Dataset& train, const Options& options);
    static IsolationForest fit(const Dataset& train) { return fit(train, Options()); }

    /// 2^(-mean path length / c(subsample)); deterministic given the forest.
    double score(std::span<const double> point) const;

    std::vector<double> score_batch(const Dataset& points) const;

    std::size_t dim() const noexcept { return dim_; }
    std::size_t n_trees() const noexcept { return trees_.size(); }
    std::size_t subsample_size() const noexcept { return subsample_size_; }

    /// Average unsuccessful-search path length of a binary search tree over m
    /// points; the normalizer and the leaf-size depth adjustment.
    static double average_path_length(std::size_t m);

private:
    // Flat layout: node 0 is the root; leaves have left == -1 and carry the
    // count of subsample points that reached them.
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t feature = 0;
        std::uint32_t size = 0;
        double threshold = 0.0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    double path_length(const Tree& tree, std::span<const double> point) const;

    std::vector<Tree> trees_;
    std::size_t dim_ = 0;
    std::size_t subsample_size_ = 0;
};

}  // namespace damex

#endif
