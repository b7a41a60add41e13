#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "slcd/candidates.hpp"

using namespace slcd;

namespace {

constexpr double kPi = std::numbers::pi;

CandidateSet three_line_set(const std::vector<Line>& lines,
                            const std::vector<double>& probs) {
    CandidateSet set;
    set.lines = lines;
    set.probs = probs;
    set.offsets.assign(lines.size(), Offset{});
    return set;
}

}  // namespace

TEST_CASE("candidate grid sizes and positions") {
    const Frame frame(100, 100);

    const CandidateSet grid = generate_candidate_grid(32, 32, frame);
    CHECK(grid.size() == 1024);

    const CandidateSet single = generate_candidate_grid(1, 1, frame);
    REQUIRE(single.size() == 1);
    CHECK(single.lines[0].rho == doctest::Approx(0.0));
    CHECK(single.lines[0].theta == doctest::Approx(kPi / 2));

    const CandidateSet pair = generate_candidate_grid(2, 1, frame);
    REQUIRE(pair.size() == 2);
    CHECK(pair.lines[0].rho == doctest::Approx(-frame.rho_max() / 2));
    CHECK(pair.lines[1].rho == doctest::Approx(frame.rho_max() / 2));
    CHECK(pair.lines[0].theta == doctest::Approx(kPi / 2));
}

TEST_CASE("candidate grid covers interior lines") {
    const Frame frame(100, 100);
    const CandidateSet grid = generate_candidate_grid(32, 32, frame);
    const double bound = std::sqrt(2.0) / 32.0 + 1e-12;
    auto rng = std::mt19937_64(47);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 1000; ++i) {
        const Line l = make_canonical(
            uniform(-0.9 * frame.rho_max(), 0.9 * frame.rho_max()),
            uniform(0.0, kPi));
        double best = 1e9;
        for (const Line& cand : grid.lines) {
            best = std::min(best, polar_distance(l, cand, frame));
        }
        CHECK(best <= bound);
    }
}

TEST_CASE("apply_offsets updates and canonicalizes") {
    const Frame frame(100, 100);

    CandidateSet set = three_line_set({{0.0, 0.0}, {10.0, 3.14}},
                                      {0.5, 0.5});
    SUBCASE("zero offsets keep lines") {
        const auto lines = apply_offsets(set, frame);
        CHECK(lines[0].rho == 0.0);
        CHECK(lines[0].theta == 0.0);
    }
    SUBCASE("rho shift") {
        set.offsets[0] = {5.0, 0.0};
        const auto lines = apply_offsets(set, frame);
        CHECK(lines[0].rho == doctest::Approx(5.0));
        CHECK(lines[0].theta == doctest::Approx(0.0));
    }
    SUBCASE("theta wrap negates rho") {
        set.offsets[1] = {0.0, 0.01};
        const auto lines = apply_offsets(set, frame);
        CHECK(lines[1].rho == doctest::Approx(-10.0));
        CHECK(lines[1].theta == doctest::Approx(3.15 - kPi));
    }
    SUBCASE("rho clamps to the frame") {
        set.offsets[0] = {100.0, 0.0};
        const auto lines = apply_offsets(set, frame);
        CHECK(lines[0].rho == doctest::Approx(frame.rho_max()));
    }
}

TEST_CASE("nms keeps the strongest line and far survivors") {
    const Frame frame(100, 100);
    // B sits next to A; C is far away.
    const Line a{0.0, 0.5}, b{2.0, 0.5}, c{30.0, 2.0};
    const CandidateSet set = three_line_set({a, b, c}, {0.9, 0.8, 0.7});
    const double d_ab = polar_distance(a, b, frame);

    const auto picked = nms_select(set, frame, 2, d_ab * 1.5);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0].source_index == 0);
    CHECK(picked[1].source_index == 2);
    CHECK(!picked[0].from_fill);
    CHECK(!picked[1].from_fill);
}

TEST_CASE("nms k=1 returns the argmax") {
    const Frame frame(100, 100);
    const CandidateSet set = three_line_set(
        {{0.0, 0.5}, {2.0, 0.5}, {30.0, 2.0}}, {0.3, 0.9, 0.7});
    const auto picked = nms_select(set, frame, 1, 0.05);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0].source_index == 1);
}

TEST_CASE("nms fill rule re-admits suppressed lines by probability") {
    const Frame frame(100, 100);
    // all three lines within the suppression radius of each other
    const CandidateSet set = three_line_set(
        {{0.0, 0.5}, {1.0, 0.5}, {2.0, 0.5}}, {0.6, 0.9, 0.7});
    const auto picked = nms_select(set, frame, 3, 1.0);
    REQUIRE(picked.size() == 3);
    CHECK(picked[0].source_index == 1);  // argmax
    CHECK(!picked[0].from_fill);
    CHECK(picked[1].source_index == 2);  // fill by prob
    CHECK(picked[1].from_fill);
    CHECK(picked[2].source_index == 0);
    CHECK(picked[2].from_fill);
}

TEST_CASE("nms ties break to the lower index") {
    const Frame frame(100, 100);
    const CandidateSet set = three_line_set(
        {{0.0, 0.5}, {30.0, 2.0}, {-30.0, 1.0}}, {0.7, 0.7, 0.7});
    const auto picked = nms_select(set, frame, 2, 0.05);
    CHECK(picked[0].source_index == 0);
    CHECK(picked[1].source_index == 1);
}

TEST_CASE("nms pairwise separation and determinism") {
    const Frame frame(100, 100);
    auto rng = std::mt19937_64(53);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 50; ++trial) {
        CandidateSet set;
        for (int i = 0; i < 64; ++i) {
            set.lines.push_back(make_canonical(uniform(-40, 40),
                                               uniform(0.0, kPi)));
            set.probs.push_back(uniform(0.0, 1.0));
            set.offsets.push_back({});
        }
        const double threshold = 0.06;
        const auto picked = nms_select(set, frame, 5, threshold);
        for (size_t i = 0; i < picked.size(); ++i) {
            for (size_t j = i + 1; j < picked.size(); ++j) {
                if (picked[i].from_fill || picked[j].from_fill) continue;
                CHECK(polar_distance(picked[i].line, picked[j].line, frame) >=
                      threshold);
            }
        }
        const auto again = nms_select(set, frame, 5, threshold);
        REQUIRE(again.size() == picked.size());
        for (size_t i = 0; i < picked.size(); ++i) {
            CHECK(again[i].source_index == picked[i].source_index);
        }
    }
}

TEST_CASE("nms rejects an empty pool") {
    const Frame frame(100, 100);
    CHECK_THROWS_AS(nms_select(CandidateSet{}, frame, 1, 0.1),
                    EmptyCandidates);
}

TEST_CASE("enumerate_combinations") {
    CHECK(enumerate_combinations(8).size() == 256);

    const auto combos = enumerate_combinations(3);
    REQUIRE(combos.size() == 8);
    CHECK(combos[0].count() == 0);  // empty mask included
    // id 5 = binary 101 selects lines 1 and 3
    CHECK(combos[5].mask == std::vector<bool>{true, false, true});

    const auto tiny = enumerate_combinations(1);
    REQUIRE(tiny.size() == 2);
    CHECK(tiny[0].count() == 0);
    CHECK(tiny[1].count() == 1);

    CHECK_THROWS_AS(enumerate_combinations(17), KTooLarge);
}

TEST_CASE("combination ids and masks are in bijection") {
    std::set<std::vector<bool>> seen;
    for (const Combination& c : enumerate_combinations(6)) {
        seen.insert(c.mask);
        uint32_t id = 0;
        for (size_t b = 0; b < c.mask.size(); ++b) {
            if (c.mask[b]) id |= 1u << b;
        }
        CHECK(id == c.id);
    }
    CHECK(seen.size() == 64);
}

TEST_CASE("detector targets") {
    const Frame frame(100, 100);
    const std::vector<Line> gt = {{10.0, 0.0}};

    CandidateSet set = three_line_set(
        {{10.0, 0.0}, {8.0, 0.0}, {-40.0, 2.5}}, {0, 0, 0});
    const DetectorTargets t = detector_targets(set, gt, 0.08, frame);

    CHECK(t.gt_probs[0] == 1.0);
    CHECK(t.gt_offsets[0].d_rho == doctest::Approx(0.0));
    CHECK(t.gt_offsets[0].d_theta == doctest::Approx(0.0));
    REQUIRE(t.match_index[0].has_value());
    CHECK(*t.match_index[0] == 0);

    CHECK(t.gt_probs[1] == 1.0);
    CHECK(t.gt_offsets[1].d_rho == doctest::Approx(2.0));
    CHECK(t.gt_offsets[1].d_theta == doctest::Approx(0.0));

    CHECK(t.gt_probs[2] == 0.0);
    CHECK(t.gt_offsets[2].d_rho == 0.0);
    CHECK(!t.match_index[2].has_value());
}

TEST_CASE("detector loss values") {
    const Frame frame(100, 100);
    const std::vector<Line> gt = {{10.0, 0.0}};

    SUBCASE("half-confidence single candidate gives ln 2") {
        CandidateSet set = three_line_set({{10.0, 0.0}}, {0.5});
        const DetectorTargets t = detector_targets(set, gt, 0.08, frame);
        const double loss = detector_loss({0.5}, {Offset{}}, t, 1.0, 5.0);
        CHECK(std::abs(loss - std::log(2.0)) < 1e-9);
    }

    SUBCASE("perfect predictions are (almost) free") {
        CandidateSet set = three_line_set({{10.0, 0.0}, {-40.0, 2.5}},
                                          {1.0, 0.0});
        const DetectorTargets t = detector_targets(set, gt, 0.08, frame);
        const double loss =
            detector_loss({1.0, 0.0}, {Offset{}, Offset{}}, t, 1.0, 5.0);
        CHECK(loss >= 0.0);
        CHECK(loss <= -std::log(1.0 - 1e-7) + 1e-12);
    }

    SUBCASE("regression term uses smooth L1 with lambda2") {
        CandidateSet set = three_line_set({{8.0, 0.0}}, {1.0});
        const DetectorTargets t = detector_targets(set, gt, 0.08, frame);
        // offset error of 2 in rho: smooth_l1(0 - 2) = 1.5
        const double loss = detector_loss({1.0}, {Offset{}}, t, 1.0, 5.0);
        CHECK(loss == doctest::Approx(5.0 * 1.5).epsilon(1e-6));
    }
}

TEST_CASE("detector loss is non-negative on random inputs") {
    const Frame frame(100, 100);
    auto rng = std::mt19937_64(59);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 100; ++trial) {
        CandidateSet set;
        std::vector<double> probs;
        std::vector<Offset> offsets;
        for (int i = 0; i < 16; ++i) {
            set.lines.push_back(make_canonical(uniform(-40, 40),
                                               uniform(0.0, kPi)));
            set.probs.push_back(0.0);
            set.offsets.push_back({});
            probs.push_back(uniform(0.0, 1.0));
            offsets.push_back({uniform(-3, 3), uniform(-0.1, 0.1)});
        }
        const std::vector<Line> gts = {
            make_canonical(uniform(-40, 40), uniform(0.0, kPi))};
        const DetectorTargets t = detector_targets(set, gts, 0.1, frame);
        CHECK(detector_loss(probs, offsets, t, 1.0, 5.0) >= 0.0);
    }
}
