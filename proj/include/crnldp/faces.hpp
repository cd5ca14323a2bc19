#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "crnldp/rational_lp.hpp"

namespace crnldp {

struct TooManyPoints : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A w-maximal subset of a finite point set, with an exact rational witness
/// direction exposing exactly this subset.
struct Face {
    std::vector<std::size_t> member_indices;  // sorted
    std::vector<Rational> witness_w;
};

struct FaceOptions {
    std::size_t max_points = 16;
};

/// Enumerate every distinct w-maximal subset over nonzero directions w.
/// Points must be pairwise distinct. The face equal to the whole set appears
/// exactly when the points fail to affinely span R^d.
std::vector<Face> maximal_subsets(const std::vector<std::vector<std::int64_t>>& points,
                                  const FaceOptions& opts = {});

/// The w-maximal subset of `points` for a given direction, by direct scan.
std::vector<std::size_t> w_maximal_subset(const std::vector<std::vector<std::int64_t>>& points,
                                          const std::vector<Rational>& w);

}  // namespace crnldp
