#include "slcd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "slcd/annotations.hpp"
#include "slcd/applications.hpp"
#include "slcd/config.hpp"
#include "slcd/formats.hpp"
#include "slcd/grouping.hpp"
#include "slcd/maps.hpp"
#include "slcd/scoring.hpp"
#include "slcd/synth.hpp"

namespace slcd {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed(double v, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string fixed6(double v) { return fixed(v, 6); }

std::pair<int, int> parse_wxh(const std::string& text, const char* flag) {
    const size_t x = text.find('x');
    try {
        if (x != std::string::npos) {
            const int w = std::stoi(text.substr(0, x));
            const int h = std::stoi(text.substr(x + 1));
            if (w >= 2 && h >= 2) return {w, h};
        }
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(flag) + " expects WxH, got '" + text + "'");
}

Frame frame_from_flag(const std::string& text, const char* flag) {
    const auto [w, h] = parse_wxh(text, flag);
    return Frame(w, h);
}

// Lines arrive either as a candidate CSV or as an annotation file.
std::vector<Line> load_lines_file(const std::string& path,
                                  const Frame& frame) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        return apply_offsets(load_candidates(path), frame);
    }
    const auto records = load_annotations(path);
    if (records.empty()) throw ParseError(path + ": no records");
    return record_to_lines(records[0]);
}

Scorer build_scorer(const std::string& kind, const PipelineConfig& cfg,
                    const std::vector<Line>& reliable, const Frame& frame,
                    const std::string& image_path,
                    const std::string& gt_path) {
    if (kind == "oracle") {
        if (gt_path.empty()) {
            throw UsageError("--scorer oracle requires --gt");
        }
        const auto records = load_annotations(gt_path);
        if (records.empty()) throw ParseError(gt_path + ": no records");
        return make_oracle_scorer(reliable, record_to_lines(records[0]),
                                  frame);
    }
    if (kind == "heuristic") {
        if (image_path.empty()) {
            throw UsageError("--scorer heuristic requires --image");
        }
        const GrayImage image = load_image(image_path);
        return make_heuristic_scorer(
            image, reliable, frame,
            {cfg.w_edge, cfg.w_region, cfg.w_penalty});
    }
    throw UsageError("unknown scorer '" + kind + "'");
}

SearchConstraint parse_mode(const std::string& mode) {
    if (mode == "all") return SearchConstraint::all();
    if (mode == "pairs") return SearchConstraint::pairs();
    if (mode == "singletons") return SearchConstraint::singletons();
    throw UsageError("unknown mode '" + mode + "'");
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// ---------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------

struct SynthArgs {
    std::string frame = "480x480";
    uint64_t seed = 0;
    int n_lines = 2;
    double sigma = 0.0;
    double min_gap = 60.0;
    std::string out_image;
    std::string out_annotation;
    std::string out_candidates;
    std::string id;
};

int cmd_synth(const SynthArgs& a, const PipelineConfig& cfg) {
    const Frame frame = frame_from_flag(a.frame, "--frame");
    const SynthSpec spec = make_random_spec(a.seed, frame.width_px,
                                            frame.height_px, a.n_lines,
                                            a.sigma, a.min_gap);
    const SynthScene scene = synth_scene(spec);
    save_pgm(scene.image, a.out_image);
    const std::string id =
        a.id.empty() ? stem_of(a.out_image) : a.id;
    save_annotations({lines_to_record(id, scene.gt_lines, frame)},
                     a.out_annotation);
    if (!a.out_candidates.empty()) {
        // Candidate grid with ground-truth detector outputs: probabilities
        // and offsets from the target generator, standing in for the
        // trained classification/regression heads.
        CandidateSet grid =
            generate_candidate_grid(cfg.n_rho, cfg.n_theta, frame);
        const DetectorTargets targets = detector_targets(
            grid, scene.gt_lines, cfg.match_threshold, frame);
        grid.probs = targets.gt_probs;
        grid.offsets = targets.gt_offsets;
        save_candidates(grid, a.out_candidates);
    }
    std::cout << "synth: wrote " << a.out_image << " ("
              << scene.partition.cells.size() << " regions) and "
              << a.out_annotation << "\n";
    return 0;
}

int cmd_candidates(const std::string& frame_flag, const PipelineConfig& cfg,
                   const std::string& out) {
    const Frame frame = frame_from_flag(frame_flag, "--frame");
    save_candidates(generate_candidate_grid(cfg.n_rho, cfg.n_theta, frame),
                    out);
    std::cout << "candidates: wrote " << cfg.n_rho * cfg.n_theta
              << " rows to " << out << "\n";
    return 0;
}

int cmd_nms(const std::string& candidates_path, const std::string& frame_flag,
            const PipelineConfig& cfg, const std::string& out) {
    const Frame frame = frame_from_flag(frame_flag, "--frame");
    const CandidateSet set = load_candidates(candidates_path);
    const auto reliable = nms_select(set, frame, cfg.k, cfg.nms_threshold);
    CandidateSet result;
    for (const ReliableLine& r : reliable) {
        result.lines.push_back(r.line);
        result.probs.push_back(r.prob);
        result.offsets.push_back({});
    }
    save_candidates(result, out);
    std::cout << "nms: kept " << reliable.size() << " of " << set.size()
              << " lines\n";
    return 0;
}

struct ScoreArgs {
    std::string image;
    std::string lines;
    std::string frame;
    std::string scorer = "heuristic";
    std::string gt;
    std::string mode = "all";
    std::string out;
};

int cmd_score(const ScoreArgs& a, const PipelineConfig& cfg) {
    Frame frame = a.frame.empty()
                      ? [&] {
                            const GrayImage img = load_image(a.image);
                            return Frame(img.width, img.height);
                        }()
                      : frame_from_flag(a.frame, "--frame");
    const std::vector<Line> reliable = load_lines_file(a.lines, frame);
    const Scorer scorer =
        build_scorer(a.scorer, cfg, reliable, frame, a.image, a.gt);
    const ScoreReport report = search_best_combination(
        int(reliable.size()), scorer, parse_mode(a.mode));
    save_score_report(report, a.out);
    std::cout << "score: best combo " << report.best_id << " score "
              << fixed6(report.best().score) << " ("
              << report.records.size() << " evaluated)\n";
    return 0;
}

struct DetectArgs {
    std::string image;
    std::string candidates;
    std::string frame;
    std::string scorer = "heuristic";
    std::string gt;
    std::string mode = "all";
    std::string out;
    std::string index_out;
    std::string id;
};

int cmd_detect(const DetectArgs& a, const PipelineConfig& cfg) {
    Frame frame = a.frame.empty()
                      ? [&] {
                            const GrayImage img = load_image(a.image);
                            return Frame(img.width, img.height);
                        }()
                      : frame_from_flag(a.frame, "--frame");

    const CandidateSet set = load_candidates(a.candidates);
    const auto picked = nms_select(set, frame, cfg.k, cfg.nms_threshold);
    std::vector<Line> reliable;
    reliable.reserve(picked.size());
    for (const ReliableLine& r : picked) reliable.push_back(r.line);

    const Scorer scorer =
        build_scorer(a.scorer, cfg, reliable, frame, a.image, a.gt);
    const ScoreReport report = search_best_combination(
        int(reliable.size()), scorer, parse_mode(a.mode));

    const ScoreRecord& best = report.best();
    std::vector<Line> detected;
    for (size_t k = 0; k < reliable.size(); ++k) {
        if (best.mask[k]) detected.push_back(reliable[k]);
    }
    const std::string id = a.id.empty() ? stem_of(a.out) : a.id;
    save_annotations({lines_to_record(id, detected, frame)}, a.out);

    if (!a.index_out.empty()) {
        const Combination combo = make_combination(best.id,
                                                   int(reliable.size()));
        const LineCollectionMap l = line_collection_map(
            reliable, combo, cfg.grid_h, cfg.grid_w, frame);
        append_retrieval_entry(
            {id, positional_embedding(l, cfg.pool), best.score}, a.index_out);
    }
    std::cout << "detect: " << detected.size() << " lines, combo "
              << best.id << ", score " << fixed6(best.score) << " -> "
              << a.out << "\n";
    return 0;
}

int cmd_hiou(const std::string& path_a, const std::string& path_b) {
    const auto ra = load_annotations(path_a);
    const auto rb = load_annotations(path_b);
    if (ra.empty() || rb.empty()) throw ParseError("hiou: empty annotation");
    if (ra[0].width_px != rb[0].width_px ||
        ra[0].height_px != rb[0].height_px) {
        throw InvariantViolation("hiou: annotation frames differ");
    }
    const double score = hiou(record_to_lines(ra[0]), record_to_lines(rb[0]),
                              ra[0].frame());
    std::cout << fixed6(score) << "\n";
    return 0;
}

struct VpArgs {
    std::string lines;
    std::string frame;
    std::string scorer = "heuristic";
    std::string image;
    std::string gt;
};

int cmd_vp(const VpArgs& a, const PipelineConfig& cfg) {
    const Frame frame = frame_from_flag(a.frame, "--frame");
    const std::vector<Line> reliable = load_lines_file(a.lines, frame);
    const Scorer scorer =
        build_scorer(a.scorer, cfg, reliable, frame, a.image, a.gt);
    const VpEstimate vp = detect_vp(reliable, scorer);
    std::cout << "vp: " << fixed6(vp.point.x) << " " << fixed6(vp.point.y)
              << " (lines " << vp.first_line << ", " << vp.second_line
              << "; score " << fixed6(vp.score) << ")\n";
    return 0;
}

int cmd_symmetry(const VpArgs& a, const PipelineConfig& cfg) {
    const Frame frame = frame_from_flag(a.frame, "--frame");
    const std::vector<Line> reliable = load_lines_file(a.lines, frame);
    const Scorer scorer =
        build_scorer(a.scorer, cfg, reliable, frame, a.image, a.gt);
    const auto ranked = rank_symmetry_axes(reliable, scorer);
    for (size_t i = 0; i < ranked.size(); ++i) {
        std::cout << (i + 1) << " line " << ranked[i].line_index << " rho "
                  << fixed(ranked[i].line.rho, 4) << " theta "
                  << fixed6(ranked[i].line.theta) << " score "
                  << fixed6(ranked[i].score) << "\n";
    }
    return 0;
}

struct RetrieveArgs {
    std::string index;
    std::string query;
    int top_k = 4;
    double threshold = 0.75;
};

int cmd_retrieve(const RetrieveArgs& a) {
    const auto index = load_retrieval_index(a.index);
    const RetrievalEntry* query = nullptr;
    for (const RetrievalEntry& e : index) {
        if (e.identifier == a.query) {
            query = &e;
            break;
        }
    }
    if (!query) {
        throw ParseError("retrieve: query id '" + a.query +
                         "' not in the index");
    }
    // the query entry itself does not compete
    std::vector<RetrievalEntry> pool;
    for (const RetrievalEntry& e : index) {
        if (e.identifier != a.query) pool.push_back(e);
    }
    const auto hits = retrieve(*query, pool, a.threshold, a.top_k);
    for (const RetrievalHit& h : hits) {
        std::cout << h.identifier << "\t" << fixed6(h.distance) << "\n";
    }
    return 0;
}

struct GroupArgs {
    std::string image;
    std::string grid = "60x60";
    int m = 8;
    int channels = 16;
    int steps = 3;
    uint64_t seed = 0;
};

// A deterministic stand-in feature map: block-mean intensity plus
// gradient statistics per grid cell, tiled across the channel dimension.
Eigen::MatrixXd image_features(const GrayImage& img, int gh, int gw, int c) {
    Eigen::MatrixXd f(gh * gw, c);
    const Frame frame(img.width, img.height);
    for (int r = 0; r < gh; ++r) {
        for (int col = 0; col < gw; ++col) {
            const int r0 = r * img.height / gh, r1 = (r + 1) * img.height / gh;
            const int c0 = col * img.width / gw, c1 = (col + 1) * img.width / gw;
            double mean = 0.0, grad = 0.0;
            int count = 0;
            for (int rr = r0; rr < r1; ++rr) {
                for (int cc = c0; cc < c1; ++cc) {
                    mean += double(img.at(rr, cc)) / 255.0;
                    grad += gradient_magnitude(img, rr, cc);
                    ++count;
                }
            }
            mean /= std::max(count, 1);
            grad /= std::max(count, 1);
            const int row = r * gw + col;
            for (int ch = 0; ch < c; ++ch) {
                f(row, ch) = (ch % 2 == 0 ? mean : grad);
            }
        }
    }
    (void)frame;
    return f;
}

int cmd_group(const GroupArgs& a) {
    const auto [gw, gh] = parse_wxh(a.grid, "--grid");
    if (a.channels < 4 || a.channels % 4 != 0) {
        throw UsageError("--channels must be a positive multiple of 4");
    }
    const GrayImage img = load_image(a.image);
    const Eigen::MatrixXd f = image_features(img, gh, gw, a.channels);
    const Eigen::MatrixXd s = sinusoidal_pe(gh, gw, a.channels);

    std::mt19937_64 rng(a.seed);
    auto randn = [&rng]() {
        const double u1 = 1.0 - double(rng() >> 11) * 0x1.0p-53;
        const double u2 = double(rng() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    };
    auto gaussian = [&](int rows, int cols, double scale) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m(i, j) = scale * randn();
        }
        return m;
    };

    RegionQuerySet queries;
    queries.r = gaussian(a.m, a.channels, 1.0);
    const double u_scale = 1.0 / std::sqrt(double(a.channels));
    queries.u_q = gaussian(a.channels, a.channels, u_scale);
    queries.u_k = gaussian(a.channels, a.channels, u_scale);
    queries.u_v = gaussian(a.channels, a.channels, u_scale);

    const GroupingResult res = grouping_forward(queries, f, s, a.steps);
    for (int r = 0; r < gh; ++r) {
        for (int c = 0; c < gw; ++c) {
            if (c) std::cout << ' ';
            std::cout << res.membership[size_t(r) * gw + c];
        }
        std::cout << '\n';
    }
    return 0;
}

PipelineConfig preload_config(const std::vector<std::string>& args) {
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") return load_config(args[i + 1]);
    }
    return {};
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        PipelineConfig cfg = preload_config(args);

        CLI::App app{"semantic line combination detection pipeline"};
        app.require_subcommand(1);
        std::string config_path;
        app.add_option("--config", config_path,
                       "key = value config file (flags override)");

        SynthArgs synth_args;
        auto* synth = app.add_subcommand("synth", "render a synthetic scene");
        synth->add_option("--frame", synth_args.frame, "frame WxH");
        synth->add_option("--seed", synth_args.seed, "rng seed");
        synth->add_option("--n-lines", synth_args.n_lines, "gt lines (1-4)");
        synth->add_option("--sigma", synth_args.sigma, "noise sigma");
        synth->add_option("--min-gap", synth_args.min_gap,
                          "adjacent region gap");
        synth->add_option("--out-image", synth_args.out_image, "PGM path")
            ->required();
        synth
            ->add_option("--out-annotation", synth_args.out_annotation,
                         "annotation path")
            ->required();
        synth->add_option("--out-candidates", synth_args.out_candidates,
                          "also write a candidate CSV with ground-truth"
                          " detector outputs");
        synth->add_option("--id", synth_args.id, "image id");

        std::string cand_frame = "480x480", cand_out;
        auto* cand = app.add_subcommand("candidates",
                                        "write the candidate grid CSV");
        cand->add_option("--frame", cand_frame, "frame WxH");
        cand->add_option("--n-rho", cfg.n_rho, "rho split");
        cand->add_option("--n-theta", cfg.n_theta, "theta split");
        cand->add_option("--out", cand_out, "output CSV")->required();

        std::string nms_cand, nms_frame = "480x480", nms_out;
        auto* nms = app.add_subcommand("nms", "filter candidates to K lines");
        nms->add_option("--candidates", nms_cand, "candidate CSV")->required();
        nms->add_option("--frame", nms_frame, "frame WxH");
        nms->add_option("--k", cfg.k, "reliable line count");
        nms->add_option("--threshold", cfg.nms_threshold,
                        "suppression distance");
        nms->add_option("--out", nms_out, "output CSV")->required();

        ScoreArgs score_args;
        auto* score = app.add_subcommand("score",
                                         "score all combinations of K lines");
        score->add_option("--image", score_args.image, "PGM/PPM image");
        score->add_option("--lines", score_args.lines, "lines CSV/annotation")
            ->required();
        score->add_option("--frame", score_args.frame, "frame WxH");
        score->add_option("--scorer", score_args.scorer,
                          "oracle | heuristic");
        score->add_option("--gt", score_args.gt, "gt annotation (oracle)");
        score->add_option("--mode", score_args.mode,
                          "all | pairs | singletons");
        score->add_option("--out", score_args.out, "report CSV")->required();

        DetectArgs detect_args;
        auto* detect = app.add_subcommand(
            "detect", "full pipeline: candidates -> NMS -> best combination");
        detect->add_option("--image", detect_args.image, "PGM/PPM image");
        detect->add_option("--candidates", detect_args.candidates,
                           "candidate CSV")
            ->required();
        detect->add_option("--frame", detect_args.frame, "frame WxH");
        detect->add_option("--k", cfg.k, "reliable line count");
        detect->add_option("--threshold", cfg.nms_threshold,
                           "NMS suppression distance");
        detect->add_option("--scorer", detect_args.scorer,
                           "oracle | heuristic");
        detect->add_option("--gt", detect_args.gt, "gt annotation (oracle)");
        detect->add_option("--mode", detect_args.mode,
                           "all | pairs | singletons");
        detect->add_option("--out", detect_args.out, "annotation out")
            ->required();
        detect->add_option("--index-out", detect_args.index_out,
                           "append retrieval index entry");
        detect->add_option("--id", detect_args.id, "identifier");

        std::vector<std::string> hiou_paths;
        auto* hiou_cmd =
            app.add_subcommand("hiou", "harmony of two annotations");
        hiou_cmd->add_option("paths", hiou_paths, "two annotation files")
            ->expected(2);

        VpArgs vp_args;
        auto* vp = app.add_subcommand("vp", "vanishing point from line pairs");
        vp->add_option("--lines", vp_args.lines, "lines CSV/annotation")
            ->required();
        vp->add_option("--frame", vp_args.frame, "frame WxH")->required();
        vp->add_option("--scorer", vp_args.scorer, "oracle | heuristic");
        vp->add_option("--image", vp_args.image, "image (heuristic)");
        vp->add_option("--gt", vp_args.gt, "gt annotation (oracle)");

        VpArgs sym_args;
        auto* sym = app.add_subcommand("symmetry", "rank symmetry axes");
        sym->add_option("--lines", sym_args.lines, "lines CSV/annotation")
            ->required();
        sym->add_option("--frame", sym_args.frame, "frame WxH")->required();
        sym->add_option("--scorer", sym_args.scorer, "oracle | heuristic");
        sym->add_option("--image", sym_args.image, "image (heuristic)");
        sym->add_option("--gt", sym_args.gt, "gt annotation (oracle)");

        RetrieveArgs retrieve_args;
        retrieve_args.threshold = cfg.retrieval_threshold;
        auto* retr = app.add_subcommand("retrieve",
                                        "composition-based retrieval");
        retr->add_option("--index", retrieve_args.index, "index file")
            ->required();
        retr->add_option("--query", retrieve_args.query, "query identifier")
            ->required();
        retr->add_option("--top-k", retrieve_args.top_k, "results");
        retr->add_option("--threshold", retrieve_args.threshold,
                         "composition score filter");

        GroupArgs group_args;
        auto* group = app.add_subcommand("group",
                                         "diagnostic membership grid");
        group->add_option("--image", group_args.image, "PGM/PPM image")
            ->required();
        group->add_option("--grid", group_args.grid, "grid WxH");
        group->add_option("--m", group_args.m, "region queries");
        group->add_option("--channels", group_args.channels,
                          "feature channels (multiple of 4)");
        group->add_option("--steps", group_args.steps, "attention steps");
        group->add_option("--seed", group_args.seed, "rng seed");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }

        if (synth->parsed()) return cmd_synth(synth_args, cfg);
        if (cand->parsed()) return cmd_candidates(cand_frame, cfg, cand_out);
        if (nms->parsed()) return cmd_nms(nms_cand, nms_frame, cfg, nms_out);
        if (score->parsed()) return cmd_score(score_args, cfg);
        if (detect->parsed()) return cmd_detect(detect_args, cfg);
        if (hiou_cmd->parsed()) return cmd_hiou(hiou_paths[0], hiou_paths[1]);
        if (vp->parsed()) return cmd_vp(vp_args, cfg);
        if (sym->parsed()) return cmd_symmetry(sym_args, cfg);
        if (retr->parsed()) return cmd_retrieve(retrieve_args);
        if (group->parsed()) return cmd_group(group_args);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace slcd
