#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slcd/maps.hpp"

using namespace slcd;

namespace {

constexpr double kPi = std::numbers::pi;

Combination combo_of(std::initializer_list<int> included, int k) {
    uint32_t id = 0;
    for (int i : included) id |= 1u << i;
    return make_combination(id, k);
}

}  // namespace

TEST_CASE("binary mask of the empty combination is zero") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}, {10.0, 1.0}};
    const BinaryLineMask b =
        binary_mask(reliable, combo_of({}, 2), 16, 16, frame);
    for (uint8_t v : b.values) CHECK(v == 0);
}

TEST_CASE("binary mask of one vertical line has one pixel per row") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}};
    const BinaryLineMask b =
        binary_mask(reliable, combo_of({0}, 1), 60, 60, frame);
    int ones = 0;
    for (uint8_t v : b.values) ones += v;
    CHECK(ones == 60);
}

TEST_CASE("binary mask union bounds") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}, {0.0, kPi / 2}};
    auto count = [&](const Combination& c) {
        const BinaryLineMask b = binary_mask(reliable, c, 32, 32, frame);
        int ones = 0;
        for (uint8_t v : b.values) ones += v;
        return ones;
    };
    const int both = count(combo_of({0, 1}, 2));
    const int first = count(combo_of({0}, 2));
    const int second = count(combo_of({1}, 2));
    CHECK(both <= first + second);
    CHECK(both >= std::max(first, second));
}

TEST_CASE("line collection map channels") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}, {10.0, 1.0},
                                        {-20.0, 2.0}};

    SUBCASE("excluded lines give all-zero channels") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({1}, 3), 8, 8, frame);
        CHECK(l.channel_is_zero(0));
        CHECK(!l.channel_is_zero(1));
        CHECK(l.channel_is_zero(2));
    }

    SUBCASE("vertical center line splits a 4x4 grid into -1 / +1") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({0}, 3), 4, 4, frame);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                CHECK(l.at(0, r, c) == (c < 2 ? -1 : 1));
            }
        }
    }

    SUBCASE("full combination mirrors the K=3 structure") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({0, 1, 2}, 3), 16, 16, frame);
        for (int ch = 0; ch < 3; ++ch) {
            CHECK(!l.channel_is_zero(ch));
            bool has_pos = false, has_neg = false;
            for (int r = 0; r < 16; ++r) {
                for (int c = 0; c < 16; ++c) {
                    if (l.at(ch, r, c) > 0) has_pos = true;
                    if (l.at(ch, r, c) < 0) has_neg = true;
                }
            }
            // interior-crossing lines see both sides
            CHECK(has_pos);
            CHECK(has_neg);
        }
    }
}

TEST_CASE("channel-zero equivalence over random combinations") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {
        {0.0, 0.3}, {15.0, 1.2}, {-10.0, 2.1}, {25.0, 0.8}};
    for (const Combination& combo : enumerate_combinations(4)) {
        const LineCollectionMap l =
            line_collection_map(reliable, combo, 12, 12, frame);
        for (int ch = 0; ch < 4; ++ch) {
            CHECK(l.channel_is_zero(ch) == !combo.includes(size_t(ch)));
        }
    }
}

TEST_CASE("horizontal mirroring mirrors every channel") {
    const Frame frame(100, 100);
    // thetas away from 0 so the mirrored lines stay canonical
    const std::vector<Line> reliable = {{7.3, 0.9}, {-12.1, 2.3}};
    std::vector<Line> mirrored;
    for (const Line& l : reliable) {
        mirrored.push_back(make_canonical(l.rho, kPi - l.theta));
    }
    const Combination combo = combo_of({0, 1}, 2);
    const LineCollectionMap a =
        line_collection_map(reliable, combo, 10, 10, frame);
    const LineCollectionMap b =
        line_collection_map(mirrored, combo, 10, 10, frame);
    for (int ch = 0; ch < 2; ++ch) {
        for (int r = 0; r < 10; ++r) {
            for (int c = 0; c < 10; ++c) {
                CHECK(a.at(ch, r, c) == b.at(ch, r, 9 - c));
            }
        }
    }
}

TEST_CASE("decompose_features splits supports") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}};
    const BinaryLineMask b =
        binary_mask(reliable, combo_of({0}, 1), 8, 8, frame);

    Eigen::MatrixXd x = Eigen::MatrixXd::Random(64, 5);
    const auto [xl, xr] = decompose_features(x, b);
    CHECK((xl + xr - x).norm() == doctest::Approx(0.0));
    CHECK((xl.array() * xr.array()).abs().maxCoeff() == 0.0);

    BinaryLineMask ones = b;
    std::fill(ones.values.begin(), ones.values.end(), uint8_t(1));
    const auto [l1, r1] = decompose_features(x, ones);
    CHECK(r1.norm() == 0.0);

    BinaryLineMask zeros = b;
    std::fill(zeros.values.begin(), zeros.values.end(), uint8_t(0));
    const auto [l0, r0] = decompose_features(x, zeros);
    CHECK(l0.norm() == 0.0);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Random(63, 5);
    CHECK_THROWS_AS(decompose_features(bad, b), ShapeMismatch);
}

TEST_CASE("compositional feature layout") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}, {10.0, 1.0}};
    const Combination combo = combo_of({0, 1}, 2);
    const int gh = 6, gw = 6, c2 = 4;  // stands in for 2C channels

    const BinaryLineMask b = binary_mask(reliable, combo, gh, gw, frame);
    const LineCollectionMap l =
        line_collection_map(reliable, combo, gh, gw, frame);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(gh * gw, c2);
    const auto [xl, xr] = decompose_features(x, b);
    const Eigen::MatrixXd p = per_pixel_positional_map(l, c2);
    const Eigen::MatrixXd z = compose_features(xl, xr, p);

    // channel count 3 * 2C = 6C; layout [X_l, X_r, P]
    CHECK(z.cols() == 3 * c2);
    CHECK(z.rows() == gh * gw);
    CHECK((z.leftCols(c2) - xl).norm() == 0.0);
    CHECK((z.middleCols(c2, c2) - xr).norm() == 0.0);
    CHECK((z.rightCols(c2) - p).norm() == 0.0);

    // the decomposition invariant survives the concatenation
    CHECK((z.leftCols(c2).array() * z.middleCols(c2, c2).array())
              .abs()
              .maxCoeff() == 0.0);

    // cyclic tiling: channel j of P repeats collection channel j mod K
    for (int j = 0; j < c2; ++j) {
        for (int i = 0; i < gh * gw; ++i) {
            CHECK(p(i, j) == double(l.at(j % 2, i / gw, i % gw)));
        }
    }

    const Eigen::MatrixXd ragged = Eigen::MatrixXd::Zero(gh * gw - 1, c2);
    CHECK_THROWS_AS(compose_features(xl, ragged, p), ShapeMismatch);
}

TEST_CASE("positional embedding") {
    const Frame frame(100, 100);
    const std::vector<Line> reliable = {{0.0, 0.0}, {10.0, 1.0}};

    SUBCASE("zero map embeds to zero") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({}, 2), 4, 4, frame);
        for (double v : positional_embedding(l, 2)) CHECK(v == 0.0);
    }

    SUBCASE("center line pools to -1 / +1 blocks") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({0}, 2), 4, 4, frame);
        const auto e = positional_embedding(l, 2);
        REQUIRE(e.size() == 8);  // 2 channels x 2x2 blocks
        CHECK(e[0] == doctest::Approx(-1.0));
        CHECK(e[1] == doctest::Approx(1.0));
        CHECK(e[2] == doctest::Approx(-1.0));
        CHECK(e[3] == doctest::Approx(1.0));
        for (size_t i = 4; i < 8; ++i) CHECK(e[i] == 0.0);
    }

    SUBCASE("embedding is additive over disjoint channel sets") {
        const LineCollectionMap lu = line_collection_map(
            reliable, combo_of({0, 1}, 2), 4, 4, frame);
        const LineCollectionMap la = line_collection_map(
            reliable, combo_of({0}, 2), 4, 4, frame);
        const LineCollectionMap lb = line_collection_map(
            reliable, combo_of({1}, 2), 4, 4, frame);
        const auto eu = positional_embedding(lu, 2);
        const auto ea = positional_embedding(la, 2);
        const auto eb = positional_embedding(lb, 2);
        for (size_t i = 0; i < eu.size(); ++i) {
            CHECK(eu[i] == doctest::Approx(ea[i] + eb[i]));
        }
    }

    SUBCASE("combinations differing in one line embed apart") {
        const LineCollectionMap la = line_collection_map(
            reliable, combo_of({0}, 2), 4, 4, frame);
        const LineCollectionMap lb = line_collection_map(
            reliable, combo_of({0, 1}, 2), 4, 4, frame);
        const auto ea = positional_embedding(la, 2);
        const auto eb = positional_embedding(lb, 2);
        double dist = 0.0;
        for (size_t i = 0; i < ea.size(); ++i) {
            dist += (ea[i] - eb[i]) * (ea[i] - eb[i]);
        }
        CHECK(dist > 0.0);
    }

    SUBCASE("pool must divide the grid") {
        const LineCollectionMap l = line_collection_map(
            reliable, combo_of({0}, 2), 4, 4, frame);
        CHECK_THROWS_AS(positional_embedding(l, 3), BadPool);
    }
}
