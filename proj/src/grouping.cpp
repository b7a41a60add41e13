#include "slcd/grouping.hpp"

#include <cmath>

namespace slcd {

Eigen::MatrixXd sinusoidal_pe(int grid_h, int grid_w, int c) {
    if (c < 4 || c % 4 != 0) {
        throw BadChannelCount("sinusoidal_pe: channels must be divisible by 4");
    }
    const int hw = grid_h * grid_w;
    const int half = c / 2;      // channels per axis
    const int pairs = c / 4;     // sin/cos pairs per axis
    Eigen::MatrixXd pe(hw, c);
    for (int r = 0; r < grid_h; ++r) {
        for (int col = 0; col < grid_w; ++col) {
            const int row = r * grid_w + col;
            for (int p = 0; p < pairs; ++p) {
                const double freq = std::pow(10000.0, -2.0 * p / half);
                pe(row, 2 * p) = std::sin(col * freq);
                pe(row, 2 * p + 1) = std::cos(col * freq);
                pe(row, half + 2 * p) = std::sin(r * freq);
                pe(row, half + 2 * p + 1) = std::cos(r * freq);
            }
        }
    }
    return pe;
}

Eigen::MatrixXd column_softmax(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd a(logits.rows(), logits.cols());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const double mx = logits.col(j).maxCoeff();
        Eigen::VectorXd e = (logits.col(j).array() - mx).exp();
        a.col(j) = e / e.sum();
    }
    return a;
}

GroupingResult grouping_forward(const RegionQuerySet& queries,
                                const Eigen::MatrixXd& f,
                                const Eigen::MatrixXd& s, int steps) {
    const Eigen::Index c = f.cols();
    if (s.rows() != f.rows() || s.cols() != c || queries.r.cols() != c ||
        queries.u_q.rows() != c || queries.u_q.cols() != c ||
        queries.u_k.rows() != c || queries.u_k.cols() != c ||
        queries.u_v.rows() != c || queries.u_v.cols() != c) {
        throw ShapeMismatch("grouping_forward: dimension mismatch");
    }
    if (steps < 1) throw SpecInvalid("grouping_forward: steps must be >= 1");
    if (!f.allFinite() || !s.allFinite() || !queries.r.allFinite() ||
        !queries.u_q.allFinite() || !queries.u_k.allFinite() ||
        !queries.u_v.allFinite() || !std::isfinite(queries.tau) ||
        queries.tau <= 0.0) {
        throw NonFiniteInput("grouping_forward: non-finite input");
    }

    const Eigen::MatrixXd f_k = (f + s) * queries.u_k;
    const Eigen::MatrixXd f_v = (f + s) * queries.u_v;

    Eigen::MatrixXd r = queries.r;
    Eigen::MatrixXd a;
    for (int step = 0; step < steps; ++step) {
        const Eigen::MatrixXd r_q = r * queries.u_q;
        a = column_softmax(r_q * f_k.transpose() / queries.tau);
        r = (a * f_v + r).eval();
    }

    GroupingResult out;
    out.r_hat = r;
    out.attention = a;
    out.semantic = a.transpose() * r;
    out.membership.resize(size_t(a.cols()));
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index m = 1; m < a.rows(); ++m) {
            if (a(m, i) > a(best, i)) best = m;  // ties keep the lowest m
        }
        out.membership[size_t(i)] = int(best);
    }
    return out;
}

SrsResult srs_loss(const Eigen::MatrixXd& attention,
                   const std::vector<Line>& gt_lines, int grid_h, int grid_w,
                   const Frame& frame, double eps) {
    const Eigen::Index m = attention.rows();
    const Eigen::Index hw = attention.cols();
    if (hw != Eigen::Index(grid_h) * grid_w) {
        throw ShapeMismatch("srs_loss: attention columns != grid pixels");
    }
    if (gt_lines.empty()) {
        throw DegenerateSplit("srs_loss: no ground-truth lines");
    }

    SrsResult out;
    out.gradient = Eigen::MatrixXd::Zero(m, hw);

    for (const Line& line : gt_lines) {
        std::vector<Eigen::Index> side_x, side_y;
        for (int r = 0; r < grid_h; ++r) {
            for (int c = 0; c < grid_w; ++c) {
                const Point p = pixel_center(frame, grid_h, grid_w, r, c);
                const int s = side_of_line(line, p);
                (s >= 0 ? side_x : side_y)
                    .push_back(Eigen::Index(r) * grid_w + c);
            }
        }
        if (side_x.empty() || side_y.empty()) {
            throw DegenerateSplit("srs_loss: a GT line leaves one side empty");
        }

        Eigen::VectorXd mean_x = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd mean_y = Eigen::VectorXd::Zero(m);
        for (Eigen::Index i : side_x) mean_x += attention.col(i);
        for (Eigen::Index i : side_y) mean_y += attention.col(i);
        mean_x /= double(side_x.size());
        mean_y /= double(side_y.size());

        // eps-smoothing keeps the KLD finite when a region vanishes from
        // one side. d p'_k / d p_k = 1 / (1 + m*eps).
        const double scale = 1.0 / (1.0 + double(m) * eps);
        const Eigen::VectorXd px = (mean_x.array() + eps) * scale;
        const Eigen::VectorXd py = (mean_y.array() + eps) * scale;

        double d_xy = 0.0, d_yx = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            d_xy += px(k) * std::log(px(k) / py(k));
            d_yx += py(k) * std::log(py(k) / px(k));
        }
        out.loss -= d_xy + d_yx;

        // loss_l = -[D(px||py) + D(py||px)]
        //   d/d px_k = -[log(px_k/py_k) + 1 - py_k/px_k]
        //   d/d py_k = -[log(py_k/px_k) + 1 - px_k/py_k]
        // chained through the smoothing scale and the per-side means.
        Eigen::VectorXd gx(m), gy(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            gx(k) = -(std::log(px(k) / py(k)) + 1.0 - py(k) / px(k)) * scale;
            gy(k) = -(std::log(py(k) / px(k)) + 1.0 - px(k) / py(k)) * scale;
        }
        const double wx = 1.0 / double(side_x.size());
        const double wy = 1.0 / double(side_y.size());
        for (Eigen::Index i : side_x) out.gradient.col(i) += wx * gx;
        for (Eigen::Index i : side_y) out.gradient.col(i) += wy * gy;
    }
    return out;
}

ScoreLosses score_losses(double predicted, double target,
                         const std::vector<std::pair<double, double>>& batch,
                         double margin) {
    ScoreLosses out;
    out.regression = (predicted - target) * (predicted - target);

    size_t pairs = 0;
    double hinge = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
        for (size_t j = 0; j < batch.size(); ++j) {
            if (batch[i].second > batch[j].second) {
                ++pairs;
                hinge += std::max(
                    0.0, margin - (batch[i].first - batch[j].first));
            }
        }
    }
    out.ranking = pairs > 0 ? hinge / double(pairs) : 0.0;
    return out;
}

}  // namespace slcd
