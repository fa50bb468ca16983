#include "damex/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "damex/errors.hpp"
#include "damex/parallel.hpp"
#include "damex/rng.hpp"

namespace damex {

namespace {

std::size_t height_limit(std::size_t subsample) {
    return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(subsample))));
}

}  // namespace

double IsolationForest::average_path_length(std::size_t m) {
    if (m <= 1) {
        return 0.0;
    }
    if (m == 2) {
        return 1.0;
    }
    const double h = std::log(static_cast<double>(m - 1)) + std::numbers::egamma;
    return 2.0 * h - 2.0 * static_cast<double>(m - 1) / static_cast<double>(m);
}

IsolationForest IsolationForest::fit(const Dataset& train, const Options& options) {
    if (options.n_trees == 0) {
        throw std::invalid_argument("empty forest");
    }
    const std::size_t n = train.rows();
    const std::size_t subsample = std::min(options.subsample_size, n);
    if (subsample == 0) {
        throw std::invalid_argument("empty dataset");
    }
    const std::size_t limit = height_limit(subsample);

    IsolationForest forest;
    forest.dim_ = train.cols();
    forest.subsample_size_ = subsample;
    forest.trees_.resize(options.n_trees);

    parallel_for(0, options.n_trees, [&](std::size_t t) {
        RngEngine rng(derive_seed(options.seed, t));

        // Uniform subsample without replacement (partial Fisher-Yates).
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) {
            pool[i] = i;
        }
        for (std::size_t i = 0; i < subsample; ++i) {
            std::swap(pool[i], pool[i + rng.below(n - i)]);
        }
        std::vector<std::size_t> indices(pool.begin(), pool.begin() + subsample);

        Tree& tree = forest.trees_[t];
        tree.nodes.reserve(2 * subsample);

        // Iterative construction; each frame owns a contiguous slice of
        // `indices` and the node slot it must fill.
        struct Frame {
            std::size_t begin, end, depth;
            std::int32_t slot;
        };
        std::vector<Frame> stack;
        tree.nodes.emplace_back();
        stack.push_back({0, subsample, 0, 0});
        std::vector<std::uint32_t> splittable;
        while (!stack.empty()) {
            const Frame frame = stack.back();
            stack.pop_back();
            Node& node = tree.nodes[frame.slot];
            const std::size_t count = frame.end - frame.begin;
            node.size = static_cast<std::uint32_t>(count);
            if (count <= 1 || frame.depth >= limit) {
                continue;  // leaf
            }

            splittable.clear();
            for (std::uint32_t j = 0; j < train.cols(); ++j) {
                double lo = train.at(indices[frame.begin], j);
                double hi = lo;
                for (std::size_t i = frame.begin + 1; i < frame.end; ++i) {
                    lo = std::min(lo, train.at(indices[i], j));
                    hi = std::max(hi, train.at(indices[i], j));
                }
                if (lo < hi) {
                    splittable.push_back(j);
                }
            }
            if (splittable.empty()) {
                continue;  // all rows identical on every feature
            }

            const std::uint32_t feature = splittable[rng.below(splittable.size())];
            double lo = train.at(indices[frame.begin], feature);
            double hi = lo;
            for (std::size_t i = frame.begin + 1; i < frame.end; ++i) {
                lo = std::min(lo, train.at(indices[i], feature));
                hi = std::max(hi, train.at(indices[i], feature));
            }
            double threshold = lo + rng.uniform01() * (hi - lo);
            // Both children must be non-empty: points < threshold go left, so
            // nudge above lo (catching the minima) and rounding toward hi
            // still leaves the maxima on the right.
            threshold = std::max(threshold, std::nextafter(lo, hi));

            const auto mid = std::partition(
                indices.begin() + static_cast<std::ptrdiff_t>(frame.begin),
                indices.begin() + static_cast<std::ptrdiff_t>(frame.end),
                [&](std::size_t row) { return train.at(row, feature) < threshold; });
            const std::size_t split =
                static_cast<std::size_t>(mid - indices.begin());

            node.feature = feature;
            node.threshold = threshold;
            node.left = static_cast<std::int32_t>(tree.nodes.size());
            node.right = node.left + 1;
            const std::int32_t left = node.left;
            const std::int32_t right = node.right;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            stack.push_back({frame.begin, split, frame.depth + 1, left});
            stack.push_back({split, frame.end, frame.depth + 1, right});
        }
    });
    return forest;
}

double IsolationForest::path_length(const Tree& tree, std::span<const double> point) const {
    std::size_t depth = 0;
    std::int32_t at = 0;
    while (tree.nodes[at].left != -1) {
        const Node& node = tree.nodes[at];
        at = point[node.feature] < node.threshold ? node.left : node.right;
        ++depth;
    }
    return static_cast<double>(depth) + average_path_length(tree.nodes[at].size);
}

double IsolationForest::score(std::span<const double> point) const {
    if (trees_.empty()) {
        throw std::invalid_argument("empty forest");
    }
    if (point.size() != dim_) {
        throw dimension_error("wrong dimension: expected " + std::to_string(dim_) + ", got " +
                              std::to_string(point.size()));
    }
    double total = 0.0;
    for (const Tree& tree : trees_) {
        total += path_length(tree, point);
    }
    const double mean = total / static_cast<double>(trees_.size());
    const double normalizer = std::max(average_path_length(subsample_size_), 1.0);
    return std::exp2(-mean / normalizer);
}

std::vector<double> IsolationForest::score_batch(const Dataset& points) const {
    std::vector<double> scores(points.rows());
    parallel_for(0, points.rows(), [&](std::size_t i) { scores[i] = score(points.row(i)); });
    return scores;
}

}  // namespace damex
