#include "slcd/maps.hpp"

#include <algorithm>

namespace slcd {

bool LineCollectionMap::channel_is_zero(int channel) const {
    const size_t base = size_t(channel) * grid_h * grid_w;
    for (size_t i = 0; i < size_t(grid_h) * grid_w; ++i) {
        if (values[base + i] != 0) return false;
    }
    return true;
}

BinaryLineMask binary_mask(const std::vector<Line>& reliable,
                           const Combination& combo, int grid_h, int grid_w,
                           const Frame& frame) {
    if (combo.mask.size() != reliable.size()) {
        throw ShapeMismatch("binary_mask: combination size != K");
    }
    BinaryLineMask b;
    b.grid_h = grid_h;
    b.grid_w = grid_w;
    b.values.assign(size_t(grid_h) * grid_w, 0);
    for (size_t k = 0; k < reliable.size(); ++k) {
        if (!combo.includes(k)) continue;
        try {
            for (int idx : rasterize_line(reliable[k], grid_h, grid_w, frame)) {
                b.values[size_t(idx)] = 1;
            }
        } catch (const NoIntersection&) {
            // line outside the frame: no pixels
        }
    }
    return b;
}

LineCollectionMap line_collection_map(const std::vector<Line>& reliable,
                                      const Combination& combo, int grid_h,
                                      int grid_w, const Frame& frame) {
    if (combo.mask.size() != reliable.size()) {
        throw ShapeMismatch("line_collection_map: combination size != K");
    }
    LineCollectionMap l;
    l.grid_h = grid_h;
    l.grid_w = grid_w;
    l.k = int(reliable.size());
    l.values.assign(size_t(l.k) * grid_h * grid_w, 0);
    for (size_t k = 0; k < reliable.size(); ++k) {
        if (!combo.includes(k)) continue;
        const size_t base = k * size_t(grid_h) * grid_w;
        for (int r = 0; r < grid_h; ++r) {
            for (int c = 0; c < grid_w; ++c) {
                const Point p = pixel_center(frame, grid_h, grid_w, r, c);
                const int s = side_of_line(reliable[k], p);
                l.values[base + size_t(r) * grid_w + c] =
                    int8_t(s == 0 ? 1 : s);
            }
        }
    }
    return l;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose_features(
    const Eigen::MatrixXd& x, const BinaryLineMask& b) {
    if (x.rows() != Eigen::Index(b.values.size())) {
        throw ShapeMismatch("decompose_features: rows != mask pixels");
    }
    Eigen::MatrixXd xl = x;
    Eigen::MatrixXd xr = x;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (b.values[size_t(i)]) {
            xr.row(i).setZero();
        } else {
            xl.row(i).setZero();
        }
    }
    return {std::move(xl), std::move(xr)};
}

Eigen::MatrixXd per_pixel_positional_map(const LineCollectionMap& l,
                                         int channels) {
    if (l.k < 1 || channels < 1) {
        throw ShapeMismatch("per_pixel_positional_map: empty input");
    }
    const Eigen::Index hw = Eigen::Index(l.grid_h) * l.grid_w;
    Eigen::MatrixXd p(hw, channels);
    for (int j = 0; j < channels; ++j) {
        const size_t base = size_t(j % l.k) * size_t(hw);
        for (Eigen::Index i = 0; i < hw; ++i) {
            p(i, j) = l.values[base + size_t(i)];
        }
    }
    return p;
}

Eigen::MatrixXd compose_features(const Eigen::MatrixXd& x_l,
                                 const Eigen::MatrixXd& x_r,
                                 const Eigen::MatrixXd& p) {
    if (x_l.rows() != x_r.rows() || x_l.rows() != p.rows() ||
        x_l.cols() != x_r.cols()) {
        throw ShapeMismatch("compose_features: pixel counts disagree");
    }
    Eigen::MatrixXd z(x_l.rows(), x_l.cols() + x_r.cols() + p.cols());
    z << x_l, x_r, p;
    return z;
}

std::vector<double> positional_embedding(const LineCollectionMap& l,
                                         int pool) {
    if (pool < 1 || l.grid_h % pool != 0 || l.grid_w % pool != 0) {
        throw BadPool("positional_embedding: pool must divide the grid");
    }
    const int bh = l.grid_h / pool;
    const int bw = l.grid_w / pool;
    std::vector<double> out;
    out.reserve(size_t(l.k) * bh * bw);
    const double inv = 1.0 / (double(pool) * pool);
    for (int ch = 0; ch < l.k; ++ch) {
        for (int br = 0; br < bh; ++br) {
            for (int bc = 0; bc < bw; ++bc) {
                double sum = 0.0;
                for (int r = br * pool; r < (br + 1) * pool; ++r) {
                    for (int c = bc * pool; c < (bc + 1) * pool; ++c) {
                        sum += l.at(ch, r, c);
                    }
                }
                out.push_back(sum * inv);
            }
        }
    }
    return out;
}

}  // namespace slcd
