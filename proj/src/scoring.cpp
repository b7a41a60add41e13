#include "slcd/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace slcd {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per-line image evidence, computed once per reliable line.
struct LineStats {
    double gradient_sum = 0.0;  // over the line's rasterized pixels
    int pixel_count = 0;
    double contrast = 0.0;      // balance-weighted side contrast
};

LineStats line_stats(const GrayImage& image, const Line& line,
                     const Frame& frame) {
    LineStats st;
    std::vector<int> pixels;
    try {
        pixels = rasterize_line(line, image.height, image.width, frame);
    } catch (const NoIntersection&) {
        return st;  // line outside the frame contributes nothing
    }
    for (int idx : pixels) {
        st.gradient_sum +=
            gradient_magnitude(image, idx / image.width, idx % image.width);
    }
    st.pixel_count = int(pixels.size());

    double sum_l = 0.0, sum_r = 0.0;
    long n_l = 0, n_r = 0;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const Point p =
                pixel_center(frame, image.height, image.width, r, c);
            const double v = double(image.at(r, c)) / 255.0;
            if (signed_distance(line, p) >= 0.0) {
                sum_l += v;
                ++n_l;
            } else {
                sum_r += v;
                ++n_r;
            }
        }
    }
    if (n_l > 0 && n_r > 0) {
        const double total = double(n_l + n_r);
        const double balance = 4.0 * double(n_l) * double(n_r) / (total * total);
        st.contrast = balance * std::abs(sum_l / n_l - sum_r / n_r);
    }
    return st;
}

void check_image(const GrayImage& image, const Frame& frame) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != size_t(image.height) * image.width) {
        throw BadImage("heuristic_score: empty or inconsistent image");
    }
    const double lhs = double(image.width) * frame.height_px;
    const double rhs = double(image.height) * frame.width_px;
    if (std::abs(lhs - rhs) > 0.01 * rhs) {
        throw BadImage("heuristic_score: image aspect differs from frame");
    }
}

double combine_stats(const std::vector<LineStats>& stats,
                     const Combination& combo,
                     const HeuristicWeights& weights) {
    double grad_sum = 0.0, contrast_sum = 0.0;
    int pixel_total = 0, included = 0;
    for (size_t k = 0; k < stats.size(); ++k) {
        if (!combo.includes(k)) continue;
        ++included;
        grad_sum += stats[k].gradient_sum;
        pixel_total += stats[k].pixel_count;
        contrast_sum += stats[k].contrast;
    }
    const double e = pixel_total > 0 ? grad_sum / pixel_total : 0.0;
    const double rg = included > 0 ? contrast_sum / included : 0.0;
    return logistic(weights.edge * e + weights.region * rg -
                    weights.penalty * included);
}

}  // namespace

const ScoreRecord& ScoreReport::best() const {
    for (const ScoreRecord& r : records) {
        if (r.id == best_id) return r;
    }
    throw Error("ScoreReport: best_id not among records");
}

bool SearchConstraint::admits(const Combination& combo) const {
    switch (mode) {
        case Mode::All:
            return true;
        case Mode::ExactlyN:
            return combo.count() == n;
        case Mode::Singletons:
            return combo.count() == 1;
        case Mode::Pairs:
            return combo.count() == 2;
    }
    return false;
}

double oracle_score(const std::vector<Line>& reliable,
                    const Combination& combo, const std::vector<Line>& gt,
                    const Frame& frame) {
    if (combo.mask.size() != reliable.size()) {
        throw ShapeMismatch("oracle_score: combination size != K");
    }
    std::vector<Line> included;
    for (size_t k = 0; k < reliable.size(); ++k) {
        if (combo.includes(k)) included.push_back(reliable[k]);
    }
    return hiou(included, gt, frame);
}

double heuristic_score(const GrayImage& image,
                       const std::vector<Line>& reliable,
                       const Combination& combo, const Frame& frame,
                       const HeuristicWeights& weights) {
    if (combo.mask.size() != reliable.size()) {
        throw ShapeMismatch("heuristic_score: combination size != K");
    }
    check_image(image, frame);
    std::vector<LineStats> stats;
    stats.reserve(reliable.size());
    for (const Line& l : reliable) stats.push_back(line_stats(image, l, frame));
    return combine_stats(stats, combo, weights);
}

Scorer make_oracle_scorer(std::vector<Line> reliable, std::vector<Line> gt,
                          const Frame& frame) {
    return [reliable = std::move(reliable), gt = std::move(gt),
            frame](const Combination& combo) {
        return oracle_score(reliable, combo, gt, frame);
    };
}

Scorer make_heuristic_scorer(const GrayImage& image,
                             std::vector<Line> reliable, const Frame& frame,
                             const HeuristicWeights& weights) {
    check_image(image, frame);
    auto stats = std::make_shared<std::vector<LineStats>>();
    stats->reserve(reliable.size());
    for (const Line& l : reliable) {
        stats->push_back(line_stats(image, l, frame));
    }
    return [stats, weights](const Combination& combo) {
        return combine_stats(*stats, combo, weights);
    };
}

ScoreReport search_best_combination(int k, const Scorer& scorer,
                                    const SearchConstraint& constraint) {
    ScoreReport report;
    for (Combination& combo : enumerate_combinations(k)) {
        if (!constraint.admits(combo)) continue;
        double s = scorer(combo);
        if (!std::isfinite(s)) {
            throw Error("search_best_combination: non-finite score");
        }
        s = std::clamp(s, 0.0, 1.0);
        report.records.push_back({combo.id, std::move(combo.mask), s});
    }
    if (report.records.empty()) {
        throw NoCombination("search_best_combination: constraint admits none");
    }

    std::vector<size_t> order(report.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const ScoreRecord& ra = report.records[a];
        const ScoreRecord& rb = report.records[b];
        if (ra.score != rb.score) return ra.score > rb.score;
        return ra.id < rb.id;
    });
    report.ranking.reserve(order.size());
    for (size_t idx : order) report.ranking.push_back(report.records[idx].id);
    report.best_id = report.ranking.front();
    return report;
}

}  // namespace slcd
