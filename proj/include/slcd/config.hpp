#pragma once

/**
 * @file config.hpp
 * @brief Pipeline knobs with their defaults, loadable from a plain
 *        `key = value` text file ('#' starts a comment). CLI flags
 *        override file values.
 */

#include <string>

namespace slcd {

struct PipelineConfig {
    int k = 8;                         // reliable lines
    int n_rho = 32;                    // candidate grid rho split
    int n_theta = 32;                  // candidate grid theta split
    double nms_threshold = 0.08;       // normalized polar distance
    double match_threshold = 0.08;     // detector target matching
    double retrieval_threshold = 0.75; // composition score filter
    int grid_h = 60;                   // feature / map grid
    int grid_w = 60;
    int pool = 15;                     // positional embedding block size
    double w_edge = 1.0;               // heuristic scorer weights
    double w_region = 1.0;
    double w_penalty = 0.25;
    double rank_margin = 0.1;          // ranking loss margin
};

/// Parses a config file over the defaults. Unknown keys raise ParseError.
PipelineConfig load_config(const std::string& path);

}  // namespace slcd
