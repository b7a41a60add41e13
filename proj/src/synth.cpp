#include "slcd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

namespace slcd {

namespace {

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; keeps noise byte-identical across standard libraries.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

void validate_spec_fields(const SynthSpec& spec) {
    if (spec.width_px < 2 || spec.height_px < 2) {
        throw SpecInvalid("synth_scene: frame too small");
    }
    if (spec.gt_lines.empty() || spec.gt_lines.size() > 4) {
        throw SpecInvalid("synth_scene: gt_lines must hold 1-4 lines");
    }
    if (spec.noise_sigma < 0.0) {
        throw SpecInvalid("synth_scene: noise_sigma must be >= 0");
    }
    for (double v : spec.region_intensities) {
        if (!(v >= 0.0 && v <= 255.0)) {
            throw SpecInvalid("synth_scene: intensities must be in [0, 255]");
        }
    }
}

}  // namespace

SynthScene synth_scene(const SynthSpec& spec) {
    validate_spec_fields(spec);
    const Frame frame(spec.width_px, spec.height_px);
    RegionPartition partition = [&] {
        try {
            return partition_rectangle(spec.gt_lines, frame);
        } catch (const DuplicateLines& e) {
            throw SpecInvalid(std::string("synth_scene: ") + e.what());
        }
    }();
    if (spec.region_intensities.size() != partition.cells.size()) {
        throw SpecInvalid("synth_scene: need one intensity per cell (" +
                          std::to_string(partition.cells.size()) + " cells)");
    }

    std::map<std::vector<int8_t>, size_t> cell_of_signs;
    for (size_t i = 0; i < partition.cells.size(); ++i) {
        cell_of_signs.emplace(partition.cells[i].sign_vector, i);
    }

    const int h = spec.height_px;
    const int w = spec.width_px;
    GrayImage img = make_image(h, w);
    std::mt19937_64 rng(spec.seed);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const Point p = pixel_center(frame, h, w, r, c);
            std::vector<int8_t> signs(spec.gt_lines.size());
            for (size_t k = 0; k < spec.gt_lines.size(); ++k) {
                const int s = side_of_line(spec.gt_lines[k], p);
                signs[k] = int8_t(s == 0 ? 1 : s);
            }
            size_t cell;
            if (auto it = cell_of_signs.find(signs); it != cell_of_signs.end()) {
                cell = it->second;
            } else {
                // Pixel's sign combination was dropped as a sliver; take the
                // cell whose disagreeing lines are nearest.
                double best = std::numeric_limits<double>::infinity();
                cell = 0;
                for (size_t i = 0; i < partition.cells.size(); ++i) {
                    double cost = 0.0;
                    const auto& sv = partition.cells[i].sign_vector;
                    for (size_t k = 0; k < sv.size(); ++k) {
                        if (sv[k] != signs[k]) {
                            cost += std::abs(
                                signed_distance(spec.gt_lines[k], p));
                        }
                    }
                    if (cost < best) {
                        best = cost;
                        cell = i;
                    }
                }
            }
            double v = spec.region_intensities[cell];
            if (spec.noise_sigma > 0.0) {
                v += spec.noise_sigma * standard_normal(rng);
            }
            img.at(r, c) = uint8_t(std::lround(std::clamp(v, 0.0, 255.0)));
        }
    }
    return SynthScene{std::move(img), spec.gt_lines, std::move(partition)};
}

namespace {

Line sample_line(std::mt19937_64& rng, const Frame& frame) {
    const double rho_range = 0.35 * std::min(frame.width_px, frame.height_px);
    const double rho = (2.0 * uniform01(rng) - 1.0) * rho_range;
    const double theta = uniform01(rng) * std::numbers::pi;
    return make_canonical(rho, theta);
}

std::vector<Line> sample_separated_lines(std::mt19937_64& rng,
                                         const Frame& frame, int count,
                                         const std::vector<Line>& avoid,
                                         double min_separation) {
    std::vector<Line> out;
    int guard = 0;
    while (int(out.size()) < count) {
        if (++guard > 100000) {
            throw SpecInvalid("line sampling: separation unsatisfiable");
        }
        const Line cand = sample_line(rng, frame);
        bool ok = true;
        for (const Line& l : avoid) {
            if (polar_distance(cand, l, frame) < min_separation) ok = false;
        }
        for (const Line& l : out) {
            if (polar_distance(cand, l, frame) < min_separation) ok = false;
        }
        if (ok) out.push_back(cand);
    }
    return out;
}

}  // namespace

SynthSpec make_random_spec(uint64_t seed, int width_px, int height_px,
                           int n_lines, double noise_sigma, double min_gap) {
    if (n_lines < 1 || n_lines > 4) {
        throw SpecInvalid("make_random_spec: n_lines must be in [1, 4]");
    }
    if (min_gap < 0.0 || min_gap / 2.0 * n_lines > 122.0) {
        throw SpecInvalid("make_random_spec: min_gap infeasible for n_lines");
    }
    const Frame frame(width_px, height_px);
    std::mt19937_64 rng(seed);

    SynthSpec spec;
    spec.width_px = width_px;
    spec.height_px = height_px;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed ^ 0x9e3779b97f4a7c15ull;  // decouple noise from layout
    spec.gt_lines = sample_separated_lines(rng, frame, n_lines, {}, 0.25);

    // Cells adjacent across line k differ only in sign k, so intensities
    // of the form 128 + sum_k sign_k * w_k keep every adjacent gap at
    // 2 * w_k >= min_gap.
    const double w_lo = std::max(min_gap / 2.0, 12.0);
    const double w_hi = std::min(2.0 * w_lo, 122.0 / n_lines);
    std::vector<double> w(size_t(n_lines), 0.0);
    for (double& v : w) {
        v = w_lo + uniform01(rng) * std::max(w_hi - w_lo, 0.0);
    }

    const RegionPartition partition =
        partition_rectangle(spec.gt_lines, frame);
    spec.region_intensities.reserve(partition.cells.size());
    for (const ConvexCell& cell : partition.cells) {
        double v = 128.0;
        for (size_t k = 0; k < cell.sign_vector.size(); ++k) {
            v += cell.sign_vector[k] * w[k];
        }
        spec.region_intensities.push_back(std::clamp(v, 0.0, 255.0));
    }
    return spec;
}

std::vector<Line> make_distractor_lines(uint64_t seed, const Frame& frame,
                                        int count,
                                        const std::vector<Line>& avoid,
                                        double min_separation) {
    std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
    return sample_separated_lines(rng, frame, count, avoid, min_separation);
}

}  // namespace slcd
