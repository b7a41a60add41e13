#include "slcd/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slcd {

namespace {

constexpr double kProbEps = 1e-7;

double smooth_l1(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

}  // namespace

int Combination::count() const {
    return int(std::count(mask.begin(), mask.end(), true));
}

Combination make_combination(uint32_t id, int k) {
    Combination c;
    c.id = id;
    c.mask.resize(size_t(k));
    for (int b = 0; b < k; ++b) c.mask[size_t(b)] = (id >> b) & 1u;
    return c;
}

CandidateSet generate_candidate_grid(int n_rho, int n_theta,
                                     const Frame& frame) {
    if (n_rho < 1 || n_theta < 1) {
        throw SpecInvalid("generate_candidate_grid: splits must be >= 1");
    }
    const double rho_max = frame.rho_max();
    CandidateSet set;
    set.lines.reserve(size_t(n_rho) * n_theta);
    for (int i = 0; i < n_rho; ++i) {
        const double rho = -rho_max + (i + 0.5) * 2.0 * rho_max / n_rho;
        for (int j = 0; j < n_theta; ++j) {
            const double theta = (j + 0.5) * std::numbers::pi / n_theta;
            set.lines.push_back(make_canonical(rho, theta));
        }
    }
    set.probs.assign(set.lines.size(), 0.0);
    set.offsets.assign(set.lines.size(), Offset{});
    return set;
}

std::vector<Line> apply_offsets(const CandidateSet& candidates,
                                const Frame& frame) {
    const double rho_max = frame.rho_max();
    std::vector<Line> out;
    out.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        Line l = make_canonical(
            candidates.lines[i].rho + candidates.offsets[i].d_rho,
            candidates.lines[i].theta + candidates.offsets[i].d_theta);
        l.rho = std::clamp(l.rho, -rho_max, rho_max);
        out.push_back(l);
    }
    return out;
}

std::vector<ReliableLine> nms_select(const CandidateSet& candidates,
                                     const Frame& frame, int k,
                                     double suppress_threshold) {
    const size_t n = candidates.size();
    if (n == 0) throw EmptyCandidates("nms_select: no candidates");
    if (k < 1) throw SpecInvalid("nms_select: k must be >= 1");
    if (suppress_threshold <= 0.0) {
        throw SpecInvalid("nms_select: threshold must be > 0");
    }

    const std::vector<Line> lines = apply_offsets(candidates, frame);
    std::vector<bool> suppressed(n, false), taken(n, false);
    std::vector<ReliableLine> picked;
    picked.reserve(size_t(k));

    auto argmax = [&](auto&& eligible) -> std::optional<size_t> {
        std::optional<size_t> best;
        for (size_t i = 0; i < n; ++i) {
            if (!eligible(i)) continue;
            if (!best || candidates.probs[i] > candidates.probs[*best]) {
                best = i;
            }
        }
        return best;
    };

    while (int(picked.size()) < k) {
        auto pick = argmax([&](size_t i) { return !suppressed[i] && !taken[i]; });
        if (!pick) break;
        taken[*pick] = true;
        picked.push_back({lines[*pick], candidates.probs[*pick], *pick});
        for (size_t i = 0; i < n; ++i) {
            if (!suppressed[i] &&
                polar_distance(lines[i], lines[*pick], frame) <
                    suppress_threshold) {
                suppressed[i] = true;
            }
        }
    }
    // Pool exhausted: re-admit suppressed lines by probability.
    while (int(picked.size()) < k) {
        auto pick = argmax([&](size_t i) { return !taken[i]; });
        if (!pick) break;  // fewer than k candidates in total
        taken[*pick] = true;
        picked.push_back({lines[*pick], candidates.probs[*pick], *pick, true});
    }
    return picked;
}

std::vector<Combination> enumerate_combinations(int k) {
    if (k < 1) throw SpecInvalid("enumerate_combinations: k must be >= 1");
    if (k > 16) throw KTooLarge("enumerate_combinations: k > 16");
    const uint32_t total = 1u << k;
    std::vector<Combination> out;
    out.reserve(total);
    for (uint32_t id = 0; id < total; ++id) {
        out.push_back(make_combination(id, k));
    }
    return out;
}

DetectorTargets detector_targets(const CandidateSet& candidates,
                                 const std::vector<Line>& gt_lines,
                                 double match_threshold, const Frame& frame) {
    if (match_threshold <= 0.0) {
        throw SpecInvalid("detector_targets: threshold must be > 0");
    }
    const size_t n = candidates.size();
    DetectorTargets t;
    t.gt_probs.assign(n, 0.0);
    t.gt_offsets.assign(n, Offset{});
    t.match_index.assign(n, std::nullopt);

    for (size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < gt_lines.size(); ++j) {
            const double d =
                polar_distance(candidates.lines[i], gt_lines[j], frame);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (!gt_lines.empty() && best < match_threshold) {
            const Line rep = nearest_representation(gt_lines[best_j],
                                                    candidates.lines[i], frame);
            t.gt_probs[i] = 1.0;
            t.gt_offsets[i] = {rep.rho - candidates.lines[i].rho,
                               rep.theta - candidates.lines[i].theta};
            t.match_index[i] = best_j;
        }
    }
    return t;
}

double detector_loss(const std::vector<double>& probs,
                     const std::vector<Offset>& offsets,
                     const DetectorTargets& targets, double lambda1,
                     double lambda2) {
    const size_t n = probs.size();
    if (n == 0 || offsets.size() != n || targets.gt_probs.size() != n) {
        throw ShapeMismatch("detector_loss: inconsistent sizes");
    }

    double bce = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double p = std::clamp(probs[i], kProbEps, 1.0 - kProbEps);
        const double t = targets.gt_probs[i];
        bce += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    bce /= double(n);

    double reg = 0.0;
    size_t matched = 0;
    for (size_t i = 0; i < n; ++i) {
        if (targets.gt_probs[i] != 1.0) continue;
        ++matched;
        reg += smooth_l1(offsets[i].d_rho - targets.gt_offsets[i].d_rho);
        reg += smooth_l1(offsets[i].d_theta - targets.gt_offsets[i].d_theta);
    }
    if (matched > 0) reg /= double(matched);

    return lambda1 * bce + lambda2 * reg;
}

}  // namespace slcd
