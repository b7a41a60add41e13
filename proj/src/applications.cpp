#include "slcd/applications.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace slcd {

namespace {

constexpr double kParallelTol = 1e-12;

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Uniform double in [0, 1) from the top 53 bits; keeps results identical
// across standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

VpEstimate detect_vp(const std::vector<Line>& reliable, const Scorer& scorer) {
    const size_t k = reliable.size();
    if (k < 2) throw SpecInvalid("detect_vp: needs at least two lines");

    bool found = false;
    VpEstimate best;
    uint32_t best_id = 0;
    for (const Combination& combo : enumerate_combinations(int(k))) {
        if (combo.count() != 2) continue;
        size_t i = 0, j = 0;
        for (size_t b = 0, seen = 0; b < k; ++b) {
            if (combo.includes(b)) (seen++ == 0 ? i : j) = b;
        }
        if (std::abs(std::sin(reliable[i].theta - reliable[j].theta)) <
            kParallelTol) {
            continue;
        }
        const double s = scorer(combo);
        if (!found || s > best.score ||
            (s == best.score && combo.id < best_id)) {
            found = true;
            best_id = combo.id;
            best.point = line_intersection(reliable[i], reliable[j]);
            best.first_line = i;
            best.second_line = j;
            best.score = s;
        }
    }
    if (!found) throw AllParallel("detect_vp: all line pairs are parallel");
    return best;
}

double angle_error(Point vp_pred, Point vp_gt, const Frame& frame,
                   double focal) {
    const double f = focal > 0.0 ? focal : double(frame.width_px);
    auto lift = [f](Point p) {
        const double n = std::sqrt(p.x * p.x + p.y * p.y + f * f);
        return std::array<double, 3>{p.x / n, p.y / n, f / n};
    };
    const auto a = lift(vp_pred);
    const auto b = lift(vp_gt);
    const double d =
        std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
    return std::acos(d) * 180.0 / std::numbers::pi;
}

std::vector<RankedAxis> rank_symmetry_axes(const std::vector<Line>& reliable,
                                           const Scorer& scorer) {
    const size_t k = reliable.size();
    if (k < 1) throw SpecInvalid("rank_symmetry_axes: needs lines");

    std::vector<RankedAxis> axes;
    axes.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        const Combination combo = make_combination(1u << i, int(k));
        axes.push_back({i, reliable[i], scorer(combo)});
    }
    std::sort(axes.begin(), axes.end(), [](const RankedAxis& a,
                                           const RankedAxis& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.line_index < b.line_index;
    });
    return axes;
}

std::vector<RetrievalHit> retrieve(const RetrievalEntry& query,
                                   const std::vector<RetrievalEntry>& index,
                                   double score_threshold, int top_k) {
    if (top_k < 1) throw SpecInvalid("retrieve: top_k must be >= 1");
    for (const RetrievalEntry& e : index) {
        if (e.embedding.size() != query.embedding.size()) {
            throw DimensionMismatch("retrieve: embedding dimension of '" +
                                    e.identifier + "' differs from the query");
        }
    }
    std::vector<RetrievalHit> hits;
    for (const RetrievalEntry& e : index) {
        if (e.composition_score < score_threshold) continue;
        hits.push_back({e.identifier,
                        std::sqrt(squared_distance(e.embedding,
                                                   query.embedding))});
    }
    if (hits.empty()) {
        throw EmptyIndexAfterFilter("retrieve: no entry passes the threshold");
    }
    std::sort(hits.begin(), hits.end(),
              [](const RetrievalHit& a, const RetrievalHit& b) {
                  if (a.distance != b.distance) return a.distance < b.distance;
                  return a.identifier < b.identifier;
              });
    if (int(hits.size()) > top_k) hits.resize(size_t(top_k));
    return hits;
}

KMeansResult kmeans_cluster(const std::vector<std::vector<double>>& points,
                            int k, uint64_t seed, int max_iter) {
    const size_t n = points.size();
    if (k < 1 || size_t(k) > n) {
        throw TooFewPoints("kmeans_cluster: need 1 <= k <= point count");
    }
    if (max_iter < 1) throw SpecInvalid("kmeans_cluster: max_iter must be >= 1");
    const size_t dim = points[0].size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw DimensionMismatch("kmeans_cluster: ragged input");
        }
    }

    std::mt19937_64 rng(seed);
    KMeansResult res;

    // k-means++ seeding
    res.centroids.push_back(points[size_t(uniform01(rng) * double(n))]);
    std::vector<double> d2(n);
    while (int(res.centroids.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : res.centroids) {
                best = std::min(best, squared_distance(points[i], c));
            }
            d2[i] = best;
            total += best;
        }
        size_t chosen = 0;
        if (total > 0.0) {
            double target = uniform01(rng) * total;
            for (size_t i = 0; i < n; ++i) {
                target -= d2[i];
                if (target <= 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = size_t(uniform01(rng) * double(n));
        }
        res.centroids.push_back(points[chosen]);
    }

    res.assignments.assign(n, -1);
    for (int iter = 0; iter < max_iter; ++iter) {
        // assignment step
        bool changed = false;
        double objective = 0.0;
        for (size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points[i], res.centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = squared_distance(points[i],
                                                  res.centroids[size_t(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            objective += best_d;
            if (res.assignments[i] != best) {
                res.assignments[i] = best;
                changed = true;
            }
        }
        res.objective_history.push_back(objective);
        res.iterations = iter + 1;
        if (!changed) break;

        // update step
        std::vector<std::vector<double>> sums(
            size_t(k), std::vector<double>(dim, 0.0));
        std::vector<int> counts(size_t(k), 0);
        for (size_t i = 0; i < n; ++i) {
            const int c = res.assignments[i];
            ++counts[size_t(c)];
            for (size_t d = 0; d < dim; ++d) sums[size_t(c)][d] += points[i][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[size_t(c)] == 0) {
                // re-seed with the point farthest from its centroid
                size_t far = 0;
                double far_d = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    const double d = squared_distance(
                        points[i], res.centroids[size_t(res.assignments[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                res.centroids[size_t(c)] = points[far];
            } else {
                for (size_t d = 0; d < dim; ++d) {
                    res.centroids[size_t(c)][d] =
                        sums[size_t(c)][d] / counts[size_t(c)];
                }
            }
        }
    }
    return res;
}

}  // namespace slcd
