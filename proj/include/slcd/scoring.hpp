#pragma once

/**
 * @file scoring.hpp
 * @brief Composition scorers and the exhaustive combination search.
 *
 * A scorer maps a combination of the K reliable lines to a score in
 * [0, 1] and must be pure: no side effects, identical output for
 * identical input. Two scorers are provided — the HIoU oracle against a
 * ground-truth line set, and a weight-free image-evidence heuristic
 * standing in for the trained regressor.
 */

#include <functional>
#include <vector>

#include "slcd/arrangement.hpp"
#include "slcd/candidates.hpp"
#include "slcd/image.hpp"

namespace slcd {

using Scorer = std::function<double(const Combination&)>;

struct ScoreRecord {
    uint32_t id{};
    std::vector<bool> mask;
    double score{};
};

struct ScoreReport {
    std::vector<ScoreRecord> records;     // ascending id
    std::vector<uint32_t> ranking;        // ids by score desc, ties to lower id
    uint32_t best_id{};

    const ScoreRecord& best() const;
};

/// Which combinations a search admits.
struct SearchConstraint {
    enum class Mode { All, ExactlyN, Singletons, Pairs };
    Mode mode = Mode::All;
    int n = 0;

    static SearchConstraint all() { return {Mode::All, 0}; }
    static SearchConstraint exactly(int n) { return {Mode::ExactlyN, n}; }
    static SearchConstraint singletons() { return {Mode::Singletons, 0}; }
    static SearchConstraint pairs() { return {Mode::Pairs, 0}; }

    bool admits(const Combination& combo) const;
};

/// HIoU of the combination's included lines against the ground truth.
double oracle_score(const std::vector<Line>& reliable,
                    const Combination& combo, const std::vector<Line>& gt,
                    const Frame& frame);

struct HeuristicWeights {
    double edge = 1.0;     // w_e, mean gradient along combination pixels
    double region = 1.0;   // w_r, balance-weighted side contrast per line
    double penalty = 0.25; // w_p, per included line
};

/// Weight-free image-evidence score:
///   logistic(w_e * E + w_r * Rg - w_p * n_lines)
/// where E is the mean gradient magnitude over the combination's
/// rasterized pixels and Rg the mean over included lines of the
/// balance-weighted absolute difference of the mean intensities on the
/// line's two sides. Intensities are on the [0, 1] scale. Throws BadImage
/// when the image is empty or its aspect differs from the frame.
double heuristic_score(const GrayImage& image,
                       const std::vector<Line>& reliable,
                       const Combination& combo, const Frame& frame,
                       const HeuristicWeights& weights = {});

/// Scorer factories; both precompute per-line statistics so a full 2^K
/// sweep stays cheap.
Scorer make_oracle_scorer(std::vector<Line> reliable, std::vector<Line> gt,
                          const Frame& frame);
Scorer make_heuristic_scorer(const GrayImage& image,
                             std::vector<Line> reliable, const Frame& frame,
                             const HeuristicWeights& weights = {});

/// Evaluate every combination the constraint admits (ids ascending) and
/// rank them. Scores are checked finite and clamped to [0, 1]. Throws
/// NoCombination when the constraint admits nothing.
ScoreReport search_best_combination(int k, const Scorer& scorer,
                                    const SearchConstraint& constraint);

}  // namespace slcd
