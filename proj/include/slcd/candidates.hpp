#pragma once

/**
 * @file candidates.hpp
 * @brief Line candidate grid, offset update, probability-ranked NMS down to
 *        K reliable lines, 2^K combination enumeration, and the detector
 *        target/loss math.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "slcd/geometry.hpp"

namespace slcd {

struct Offset {
    double d_rho{};
    double d_theta{};
};

/// N line candidates with per-candidate classification probability and
/// polar offset.
struct CandidateSet {
    std::vector<Line> lines;
    std::vector<double> probs;
    std::vector<Offset> offsets;

    size_t size() const { return lines.size(); }
};

/// One column of the combination matrix: a boolean selection over K
/// reliable lines. Line k corresponds to bit k of id (line 1 = LSB).
struct Combination {
    uint32_t id{};
    std::vector<bool> mask;

    bool includes(size_t k) const { return mask[k]; }
    int count() const;
};

Combination make_combination(uint32_t id, int k);

/// Per-candidate ground-truth targets for the detector loss.
struct DetectorTargets {
    std::vector<double> gt_probs;            // values in {0, 1}
    std::vector<Offset> gt_offsets;          // nonzero only where gt_probs = 1
    std::vector<std::optional<size_t>> match_index;
};

/// Uniform quantization of the (rho, theta) space:
///   theta_j = (j + 0.5) * pi / n_theta,
///   rho_i   = -rho_max + (i + 0.5) * 2 * rho_max / n_rho.
/// Candidate order is rho-major (index = i * n_theta + j); probabilities
/// and offsets start at zero.
CandidateSet generate_candidate_grid(int n_rho, int n_theta,
                                     const Frame& frame);

/// Offset-updated lines: canonicalize(rho + d_rho, theta + d_theta) with
/// rho clamped to [-rho_max, rho_max].
std::vector<Line> apply_offsets(const CandidateSet& candidates,
                                const Frame& frame);

struct ReliableLine {
    Line line;
    double prob{};
    size_t source_index{};
    bool from_fill = false;  // re-admitted after the pool exhausted
};

/// Greedy probability-ranked NMS: pick the unsuppressed candidate with the
/// highest probability (ties to the lower index), suppress everything
/// within suppress_threshold in polar_distance, repeat k times. When the
/// pool exhausts first, remaining slots are filled with the
/// highest-probability suppressed lines. Returns min(k, N) lines.
std::vector<ReliableLine> nms_select(const CandidateSet& candidates,
                                     const Frame& frame, int k,
                                     double suppress_threshold);

/// All 2^k combinations in ascending id order, empty mask included.
/// Throws KTooLarge for k > 16.
std::vector<Combination> enumerate_combinations(int k);

/// Match each candidate to its nearest GT line by polar_distance;
/// gt_prob = 1 iff the distance is below match_threshold, and the offset
/// is the componentwise delta to the nearest equivalent representation of
/// the matched GT line.
DetectorTargets detector_targets(const CandidateSet& candidates,
                                 const std::vector<Line>& gt_lines,
                                 double match_threshold, const Frame& frame);

/// lambda1 * mean binary cross-entropy over all candidates
/// + lambda2 * mean smooth-L1 over matched candidates' offset pairs
/// (each pair contributes smooth_l1(d_rho err) + smooth_l1(d_theta err)).
/// Probabilities are clamped to [1e-7, 1 - 1e-7] before the log; the
/// regression term is 0 when nothing is matched.
double detector_loss(const std::vector<double>& probs,
                     const std::vector<Offset>& offsets,
                     const DetectorTargets& targets, double lambda1,
                     double lambda2);

}  // namespace slcd
