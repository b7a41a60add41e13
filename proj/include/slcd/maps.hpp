#pragma once

/**
 * @file maps.hpp
 * @brief Per-combination mask tensors: binary line mask, ternary line
 *        collection map, feature decomposition into line/region parts, and
 *        the block-pooled positional embedding used for retrieval.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "slcd/candidates.hpp"
#include "slcd/geometry.hpp"

namespace slcd {

/// {0,1} mask over a grid; 1 exactly on rasterized pixels of included lines.
struct BinaryLineMask {
    int grid_h{};
    int grid_w{};
    std::vector<uint8_t> values;  // row-major, grid_h * grid_w

    uint8_t at(int r, int c) const { return values[size_t(r) * grid_w + c]; }
};

/// K channels of {-1, 0, +1} side maps. Channel k is identically zero when
/// line k is excluded from the combination; otherwise each pixel carries
/// the side of line k it falls on (on-line pixels map to +1).
struct LineCollectionMap {
    int grid_h{};
    int grid_w{};
    int k{};
    std::vector<int8_t> values;  // channel-major, k * grid_h * grid_w

    int8_t at(int channel, int r, int c) const {
        return values[(size_t(channel) * grid_h + r) * grid_w + c];
    }
    bool channel_is_zero(int channel) const;
};

/// Union of the rasterizations of the combination's included lines.
/// Included lines that miss the frame contribute no pixels.
BinaryLineMask binary_mask(const std::vector<Line>& reliable,
                           const Combination& combo, int grid_h, int grid_w,
                           const Frame& frame);

LineCollectionMap line_collection_map(const std::vector<Line>& reliable,
                                      const Combination& combo, int grid_h,
                                      int grid_w, const Frame& frame);

/// Split a per-pixel feature map (row per pixel) into line and region
/// parts: X_l = x (.) b, X_r = x (.) (1 - b). The two supports are
/// disjoint and sum back to x.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose_features(
    const Eigen::MatrixXd& x, const BinaryLineMask& b);

/// Per-pixel positional map lifted from the collection map by cyclic
/// channel tiling: column j of the result is channel (j mod K) of l.
/// Deterministic, linear stand-in for the learned encoder.
Eigen::MatrixXd per_pixel_positional_map(const LineCollectionMap& l,
                                         int channels);

/// Compositional feature map: per-pixel concatenation with the fixed
/// channel layout [x_l, x_r, p]. With 2C-channel inputs the result has
/// 6C channels. All inputs must agree on the pixel count.
Eigen::MatrixXd compose_features(const Eigen::MatrixXd& x_l,
                                 const Eigen::MatrixXd& x_r,
                                 const Eigen::MatrixXd& p);

/// Deterministic surrogate of the learned positional encoder: per-channel
/// block-average pooling with pool x pool blocks, flattened channel-major.
/// Dimension k * (grid_h / pool) * (grid_w / pool). Throws BadPool when
/// pool does not divide both grid dimensions.
std::vector<double> positional_embedding(const LineCollectionMap& l,
                                         int pool);

}  // namespace slcd
