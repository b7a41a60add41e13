#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "slcd/grouping.hpp"

using namespace slcd;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int m, int hw) {
    Eigen::MatrixXd a(m, hw);
    for (int j = 0; j < hw; ++j) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            a(i, j) = 0.05 + double(rng() >> 11) * 0x1.0p-53;
            sum += a(i, j);
        }
        a.col(j) /= sum;
    }
    return a;
}

RegionQuerySet random_queries(std::mt19937_64& rng, int m, int c) {
    auto fill = [&rng](Eigen::MatrixXd& mat, double scale) {
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
            for (Eigen::Index j = 0; j < mat.cols(); ++j) {
                mat(i, j) = scale * (2.0 * (double(rng() >> 11) * 0x1.0p-53) -
                                     1.0);
            }
        }
    };
    RegionQuerySet q;
    q.r.resize(m, c);
    q.u_q.resize(c, c);
    q.u_k.resize(c, c);
    q.u_v.resize(c, c);
    fill(q.r, 1.0);
    const double s = 1.0 / std::sqrt(double(c));
    fill(q.u_q, s);
    fill(q.u_k, s);
    fill(q.u_v, s);
    return q;
}

}  // namespace

TEST_CASE("sinusoidal positional encoding") {
    const Eigen::MatrixXd pe = sinusoidal_pe(8, 8, 16);
    REQUIRE(pe.rows() == 64);
    REQUIRE(pe.cols() == 16);

    CHECK(pe.maxCoeff() <= 1.0);
    CHECK(pe.minCoeff() >= -1.0);

    // pixel (0, 0): every sin channel 0, every cos channel 1
    for (int p = 0; p < 4; ++p) {
        CHECK(pe(0, 2 * p) == doctest::Approx(0.0));
        CHECK(pe(0, 2 * p + 1) == doctest::Approx(1.0));
        CHECK(pe(0, 8 + 2 * p) == doctest::Approx(0.0));
        CHECK(pe(0, 8 + 2 * p + 1) == doctest::Approx(1.0));
    }

    CHECK_THROWS_AS(sinusoidal_pe(4, 4, 10), BadChannelCount);
}

TEST_CASE("positional encoding rows are pairwise distinct") {
    for (const int side : {8, 23, 32}) {
        const Eigen::MatrixXd pe = sinusoidal_pe(side, side, 8);
        std::set<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < pe.rows(); ++i) {
            std::vector<double> row(pe.cols());
            for (Eigen::Index j = 0; j < pe.cols(); ++j) row[j] = pe(i, j);
            rows.insert(std::move(row));
        }
        CHECK(rows.size() == size_t(pe.rows()));
    }
}

TEST_CASE("column softmax is shift invariant per column") {
    auto rng = std::mt19937_64(61);
    Eigen::MatrixXd logits(5, 7);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 7; ++j) {
            logits(i, j) = 4.0 * (double(rng() >> 11) * 0x1.0p-53) - 2.0;
        }
    }
    const Eigen::MatrixXd a = column_softmax(logits);
    Eigen::MatrixXd shifted = logits;
    shifted.col(3).array() += 17.5;
    const Eigen::MatrixXd b = column_softmax(shifted);
    CHECK((a.col(3) - b.col(3)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.col(0) - b.col(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grouping forward basics") {
    const int m = 4, c = 8, gh = 6, gw = 6;
    auto rng = std::mt19937_64(67);
    const Eigen::MatrixXd f = Eigen::MatrixXd::Random(gh * gw, c);
    const Eigen::MatrixXd s = sinusoidal_pe(gh, gw, c);

    SUBCASE("zero queries give uniform attention and membership 0") {
        RegionQuerySet q = random_queries(rng, m, c);
        q.u_q.setZero();
        const GroupingResult res = grouping_forward(q, f, s, 3);
        CHECK((res.attention.array() - 1.0 / m).abs().maxCoeff() < 1e-12);
        for (int v : res.membership) CHECK(v == 0);
    }

    SUBCASE("zero values leave the residual identity") {
        RegionQuerySet q = random_queries(rng, m, c);
        q.u_v.setZero();
        const GroupingResult res = grouping_forward(q, f, s, 3);
        CHECK((res.r_hat - q.r).norm() == doctest::Approx(0.0));
    }

    SUBCASE("columns stay stochastic after every step count") {
        for (int steps : {1, 2, 3}) {
            RegionQuerySet q = random_queries(rng, m, c);
            const GroupingResult res = grouping_forward(q, f, s, steps);
            CHECK(res.attention.minCoeff() >= 0.0);
            for (Eigen::Index j = 0; j < res.attention.cols(); ++j) {
                CHECK(std::abs(res.attention.col(j).sum() - 1.0) < 1e-6);
            }
        }
    }

    SUBCASE("membership is invariant to a positive logit scale") {
        RegionQuerySet q = random_queries(rng, m, c);
        GroupingResult base = grouping_forward(q, f, s, 1);
        RegionQuerySet scaled = q;
        scaled.u_q *= 3.0;
        GroupingResult hot = grouping_forward(scaled, f, s, 1);
        CHECK(hot.membership == base.membership);
        CHECK((hot.attention - base.attention).norm() > 1e-6);
    }

    SUBCASE("shape errors") {
        RegionQuerySet q = random_queries(rng, m, c);
        const Eigen::MatrixXd bad_s = sinusoidal_pe(gh, gw - 1, c);
        CHECK_THROWS_AS(grouping_forward(q, f, bad_s, 3), ShapeMismatch);
        Eigen::MatrixXd nan_f = f;
        nan_f(0, 0) = std::nan("");
        CHECK_THROWS_AS(grouping_forward(q, nan_f, s, 3), NonFiniteInput);
    }
}

TEST_CASE("grouping forward at full pipeline scale") {
    const int m = 8, c = 96, gh = 60, gw = 60;
    auto rng = std::mt19937_64(71);
    const RegionQuerySet q = random_queries(rng, m, c);
    const Eigen::MatrixXd f = Eigen::MatrixXd::Random(gh * gw, c);
    const Eigen::MatrixXd s = sinusoidal_pe(gh, gw, c);
    const GroupingResult res = grouping_forward(q, f, s, 3);
    CHECK(res.attention.rows() == 8);
    CHECK(res.attention.cols() == 3600);
    CHECK(res.semantic.rows() == 3600);
    CHECK(res.semantic.cols() == 96);
    CHECK(res.membership.size() == 3600);
}

TEST_CASE("srs loss on uniform attention is zero") {
    const Frame frame(100, 100);
    const int m = 4, gh = 8, gw = 8;
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Constant(m, gh * gw, 1.0 / m);
    const SrsResult res =
        srs_loss(a, {{0.0, 0.0}}, gh, gw, frame, 1e-8);
    CHECK(res.loss == doctest::Approx(0.0));
    CHECK(res.gradient.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("srs loss extreme case matches the direct evaluation") {
    // M=2: columns are (1,0) on the positive side of the line, (0,1)
    // on the negative side, so the smoothed means are (1-e', e').
    const Frame frame(100, 100);
    const int gh = 4, gw = 4;
    const Line line{0.0, 0.0};
    Eigen::MatrixXd a(2, gh * gw);
    for (int r = 0; r < gh; ++r) {
        for (int c = 0; c < gw; ++c) {
            const Point p = pixel_center(frame, gh, gw, r, c);
            const bool pos = signed_distance(line, p) >= 0.0;
            a(0, r * gw + c) = pos ? 1.0 : 0.0;
            a(1, r * gw + c) = pos ? 0.0 : 1.0;
        }
    }
    const double eps = 1e-8;
    const SrsResult res = srs_loss(a, {line}, gh, gw, frame, eps);

    const double ep = eps / (1.0 + 2.0 * eps);
    const double expected = -2.0 * (1.0 - 2.0 * ep) * std::log((1.0 - ep) / ep);
    CHECK(res.loss == doctest::Approx(expected).epsilon(1e-9));

    // independent direct summation of both KLD terms
    const double px[2] = {(1.0 + eps) / (1.0 + 2 * eps), ep};
    const double py[2] = {ep, (1.0 + eps) / (1.0 + 2 * eps)};
    double direct = 0.0;
    for (int k = 0; k < 2; ++k) {
        direct += px[k] * std::log(px[k] / py[k]);
        direct += py[k] * std::log(py[k] / px[k]);
    }
    CHECK(res.loss == doctest::Approx(-direct).epsilon(1e-12));
}

TEST_CASE("srs loss is non-positive on random stochastic attention") {
    const Frame frame(100, 100);
    auto rng = std::mt19937_64(73);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::MatrixXd a = random_stochastic(rng, 4, 64);
        const SrsResult res =
            srs_loss(a, {{5.0, 1.1}, {-8.0, 2.4}}, 8, 8, frame, 1e-8);
        CHECK(res.loss <= 1e-15);
    }
}

TEST_CASE("srs loss rejects degenerate splits") {
    const Frame frame(100, 100);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(2, 16, 0.5);
    // all 4x4 pixel centers lie left of x = 49
    CHECK_THROWS_AS(srs_loss(a, {{49.0, 0.0}}, 4, 4, frame, 1e-8),
                    DegenerateSplit);
}

TEST_CASE("srs gradient matches central finite differences") {
    const Frame frame(100, 100);
    auto rng = std::mt19937_64(79);
    const int m = 4, gh = 8, gw = 8;
    const std::vector<Line> gts = {{5.0, 1.1}, {-8.0, 2.4}};
    const double h = 1e-5;

    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd a = random_stochastic(rng, m, gh * gw);
        const SrsResult res = srs_loss(a, gts, gh, gw, frame, 1e-8);
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < gh * gw; ++j) {
                const double keep = a(i, j);
                a(i, j) = keep + h;
                const double up = srs_loss(a, gts, gh, gw, frame, 1e-8).loss;
                a(i, j) = keep - h;
                const double dn = srs_loss(a, gts, gh, gw, frame, 1e-8).loss;
                a(i, j) = keep;
                const double fd = (up - dn) / (2.0 * h);
                const double an = res.gradient(i, j);
                const double diff = std::abs(fd - an);
                if (diff > 1e-8) {
                    worst = std::max(
                        worst, diff / std::max({std::abs(fd), std::abs(an),
                                                1e-6}));
                }
            }
        }
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("score losses") {
    CHECK(score_losses(0.7, 0.7, {}).regression == 0.0);
    CHECK(score_losses(0.3, 0.5, {}).regression ==
          doctest::Approx(0.04).epsilon(1e-12));

    // perfectly ordered with gaps >= margin: hinge inactive
    const std::vector<std::pair<double, double>> ordered = {
        {0.9, 0.9}, {0.7, 0.7}, {0.4, 0.4}};
    CHECK(score_losses(0.0, 0.0, ordered, 0.1).ranking == 0.0);

    // one inverted pair activates the hinge
    const std::vector<std::pair<double, double>> inverted = {
        {0.2, 0.9}, {0.8, 0.1}};
    const double rank = score_losses(0.0, 0.0, inverted, 0.1).ranking;
    CHECK(rank == doctest::Approx(0.1 - (0.2 - 0.8)));
}
