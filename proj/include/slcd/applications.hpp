#pragma once

/**
 * @file applications.hpp
 * @brief Downstream tasks: vanishing-point detection from the best line
 *        pair, symmetry-axis ranking over singleton combinations, and
 *        composition-based retrieval with k-means clustering.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "slcd/scoring.hpp"

namespace slcd {

struct VpEstimate {
    Point point{};
    size_t first_line{};
    size_t second_line{};
    double score{};
};

/// Best-scoring non-parallel pair of reliable lines; the pair's
/// intersection is the vanishing point. Parallel pairs are skipped;
/// throws AllParallel when no pair remains.
VpEstimate detect_vp(const std::vector<Line>& reliable, const Scorer& scorer);

/// Angular error between two image-plane vanishing points, in degrees.
/// Each point is lifted to the unit direction of (x, y, focal);
/// focal <= 0 selects the default focal = frame width.
double angle_error(Point vp_pred, Point vp_gt, const Frame& frame,
                   double focal = 0.0);

struct RankedAxis {
    size_t line_index{};
    Line line{};
    double score{};
};

/// Scores each reliable line as a singleton combination and ranks them
/// descending (ties to the lower line index). The top entry is the
/// predicted symmetry axis.
std::vector<RankedAxis> rank_symmetry_axes(const std::vector<Line>& reliable,
                                           const Scorer& scorer);

struct RetrievalEntry {
    std::string identifier;
    std::vector<double> embedding;
    double composition_score{};
};

struct RetrievalHit {
    std::string identifier;
    double distance{};
};

/// Drops index entries scoring below score_threshold, ranks the rest by
/// Euclidean distance to the query embedding (ties by identifier), and
/// returns the closest top_k.
std::vector<RetrievalHit> retrieve(const RetrievalEntry& query,
                                   const std::vector<RetrievalEntry>& index,
                                   double score_threshold, int top_k);

struct KMeansResult {
    std::vector<int> assignments;
    std::vector<std::vector<double>> centroids;
    std::vector<double> objective_history;  // sum of squared distances
    int iterations{};
};

/// Deterministic k-means: k-means++ seeding from the given seed, Lloyd
/// iterations to an assignment fixpoint (or max_iter), empty clusters
/// re-seeded with the point farthest from its centroid.
KMeansResult kmeans_cluster(const std::vector<std::vector<double>>& points,
                            int k, uint64_t seed, int max_iter = 100);

}  // namespace slcd
