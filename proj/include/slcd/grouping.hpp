#pragma once

/**
 * @file grouping.hpp
 * @brief Desk-scale forward math of semantic feature grouping and its
 *        losses.
 *
 * One cross-attention step over a feature map F (HW x C) with region
 * queries R (M x C):
 *   R_q = R U_q,  F_k = (F + S) U_k,  F_v = (F + S) U_v,
 *   A   = column-softmax(R_q F_k^T / tau),   R_hat = A F_v + R,
 * iterated `steps` times with R_hat fed forward; the last step also yields
 * the semantic feature map F_s = A^T R_hat and the per-pixel membership
 * map argmax_m A(m, i).
 *
 * The SRS loss is the negative symmetric KL divergence between the mean
 * attention columns of the two pixel sets each ground-truth line induces;
 * srs_loss returns the analytic gradient with respect to A alongside the
 * value.
 */

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "slcd/geometry.hpp"

namespace slcd {

/// Region queries with their projection matrices and softmax scale.
struct RegionQuerySet {
    Eigen::MatrixXd r;    // M x C
    Eigen::MatrixXd u_q;  // C x C
    Eigen::MatrixXd u_k;  // C x C
    Eigen::MatrixXd u_v;  // C x C
    double tau = 1.0;
};

struct GroupingResult {
    Eigen::MatrixXd r_hat;       // M x C
    Eigen::MatrixXd attention;   // M x HW, column-stochastic
    Eigen::MatrixXd semantic;    // HW x C
    std::vector<int> membership; // HW, argmax region per pixel
};

/// Standard 2D sinusoidal positional encoding: the first c/2 channels
/// encode the pixel x index, the last c/2 the y index, with sin/cos pairs
/// at geometric frequencies (base 10000). c must be divisible by 4.
Eigen::MatrixXd sinusoidal_pe(int grid_h, int grid_w, int c);

/// Softmax over the row dimension, independently per column, with
/// max-subtraction for stability. Every output column is a probability
/// vector.
Eigen::MatrixXd column_softmax(const Eigen::MatrixXd& logits);

/// Iterated cross-attention of the region queries against the feature map.
/// f and s are HW x C; steps >= 1 (default 3).
GroupingResult grouping_forward(const RegionQuerySet& queries,
                                const Eigen::MatrixXd& f,
                                const Eigen::MatrixXd& s, int steps = 3);

struct SrsResult {
    double loss{};              // always <= 0
    Eigen::MatrixXd gradient;   // d loss / d A, M x HW
};

/// Semantic region separation loss over all ground-truth lines. Pixel sets
/// are split by side_of_line at pixel centers (on-line pixels count as the
/// positive side); mean column vectors are smoothed with eps and
/// renormalized before the KLD. Throws DegenerateSplit when a line leaves
/// one side empty.
SrsResult srs_loss(const Eigen::MatrixXd& attention,
                   const std::vector<Line>& gt_lines, int grid_h, int grid_w,
                   const Frame& frame, double eps = 1e-8);

struct ScoreLosses {
    double regression{};
    double ranking{};
};

/// Squared-error regression loss for one (predicted, ground-truth) score
/// pair plus a pairwise margin ranking loss over a batch of such pairs:
/// mean over ordered pairs (i, j) with gt_i > gt_j of
/// max(0, margin - (pred_i - pred_j)).
ScoreLosses score_losses(double predicted, double target,
                         const std::vector<std::pair<double, double>>& batch,
                         double margin = 0.1);

}  // namespace slcd
