#pragma once

/**
 * @file arrangement.hpp
 * @brief Exact partition of the frame rectangle by a line set into convex
 *        cells, polygon IoU, and the HIoU harmony metric.
 *
 * HIoU between two partitions S and T:
 *   (sum_i max_k IoU(s_i, t_k) + sum_j max_k IoU(t_j, s_k)) / (N + M).
 * Cells are computed by successive half-plane clipping, so the metric is
 * resolution independent; pixel_label_map provides the brute-force grid
 * oracle used to cross-check it.
 */

#include <cstdint>
#include <vector>

#include "slcd/geometry.hpp"

namespace slcd {

/// Convex polygon cell of a line arrangement. Vertices are stored in
/// counterclockwise order (positive shoelace sum); sign_vector holds, per
/// generating line, the side (-1/+1) every interior point of the cell is on.
struct ConvexCell {
    std::vector<Point> vertices;
    std::vector<int8_t> sign_vector;

    double area() const;
    Point centroid() const;
};

struct RegionPartition {
    std::vector<ConvexCell> cells;
    Frame frame;
    std::vector<Line> lines;
};

/// Signed shoelace area of a polygon (positive when counterclockwise).
double polygon_area(const std::vector<Point>& poly);

/// Part of a convex polygon on the requested side of a line
/// (Sutherland-Hodgman against one half-plane). May return fewer than
/// three vertices when the polygon lies on the other side.
std::vector<Point> clip_polygon(const std::vector<Point>& poly,
                                const Line& line, int side);

/// Split the frame rectangle into convex cells by the given lines.
/// Cells of area <= 1e-9 (corner slivers) are dropped. Throws
/// DuplicateLines when two inputs are closer than 1e-9 in polar_distance,
/// and SpecInvalid for more than 32 lines.
RegionPartition partition_rectangle(const std::vector<Line>& lines,
                                    const Frame& frame);

/// Intersection-over-union of two convex cells of the same frame.
double region_iou(const ConvexCell& a, const ConvexCell& b);

/// Harmony of two line sets: bi-directionally best-matching region IoUs
/// averaged over all regions of both partitions. 1.0 for identical sets.
double hiou(const std::vector<Line>& detected,
            const std::vector<Line>& ground_truth, const Frame& frame);

/// Per-pixel sign-vector labels on a grid, label ids in first-seen
/// row-major order. Brute-force oracle for partition_rectangle.
struct PixelLabelMap {
    int grid_h{};
    int grid_w{};
    std::vector<int> labels;  // grid_h * grid_w, row-major
    int label_count{};
};

PixelLabelMap pixel_label_map(const std::vector<Line>& lines, int grid_h,
                              int grid_w, const Frame& frame);

}  // namespace slcd
