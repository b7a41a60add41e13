#pragma once

/**
 * @file synth.hpp
 * @brief Seeded synthetic scenes: the frame is partitioned by 1-4 lines,
 *        each cell filled with a flat intensity, plus optional Gaussian
 *        noise. Identical specs produce byte-identical images.
 */

#include <cstdint>
#include <vector>

#include "slcd/arrangement.hpp"
#include "slcd/image.hpp"

namespace slcd {

struct SynthSpec {
    int width_px{};
    int height_px{};
    std::vector<Line> gt_lines;               // 1-4
    std::vector<double> region_intensities;   // per partition cell, [0, 255]
    double noise_sigma = 0.0;
    uint64_t seed = 0;
};

struct SynthScene {
    GrayImage image;
    std::vector<Line> gt_lines;
    RegionPartition partition;
};

/// Renders the spec. Intensities follow the cell order of
/// partition_rectangle(gt_lines, frame). Throws SpecInvalid for malformed
/// specs.
SynthScene synth_scene(const SynthSpec& spec);

/// Random spec with reproducible gt lines and intensities. Lines pass
/// well inside the frame (|rho| <= 0.35 * min dimension) and are mutually
/// separated by at least 0.25 in polar_distance; intensities are assigned
/// from the cell sign vectors so that cells adjacent across any line
/// differ by at least min_gap.
SynthSpec make_random_spec(uint64_t seed, int width_px, int height_px,
                           int n_lines, double noise_sigma, double min_gap);

/// Distractor lines for pipeline tests: each is at least min_separation
/// away (polar_distance) from every line in `avoid` and from each other,
/// and intersects the frame interior.
std::vector<Line> make_distractor_lines(uint64_t seed, const Frame& frame,
                                        int count,
                                        const std::vector<Line>& avoid,
                                        double min_separation);

}  // namespace slcd
