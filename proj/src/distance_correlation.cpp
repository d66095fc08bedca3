#include "dmsens/distance_correlation.hpp"

#include <cmath>

namespace dmsens {

double product_mean(const Matrix& a, const Matrix& b) {
    std::size_t n = a.rows();
    std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        const double* ra = a.row_ptr(i);
        const double* rb = b.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += ra[j] * rb[j];
        partial[i] = s;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += partial[i];
    double nn = static_cast<double>(n);
    return total / (nn * nn);
}

namespace {

double clamp_small_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

double dcov2_centered(const Matrix& a_centered, const Matrix& b_centered) {
    return clamp_small_negative(product_mean(a_centered, b_centered));
}

}  // namespace

double dcov2(const DistanceMatrix& a, const DistanceMatrix& b) {
    if (a.size() != b.size())
        throw SizeMismatchError("distance matrices have sizes " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    if (a.size() < 2) throw SizeMismatchError("dcov2 requires n >= 2");
    Matrix ac = a.entries;
    Matrix bc = b.entries;
    double_center_inplace(ac);
    double_center_inplace(bc);
    return dcov2_centered(ac, bc);
}

namespace {

void check_config(const DcovConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < 2.0))
        throw BadAlphaError("DcovConfig.alpha must lie in (0, 2), got " +
                            std::to_string(cfg.alpha));
}

Matrix y_distance(const Matrix& y, const DcovConfig& cfg) {
    if (cfg.metric) {
        DistanceMatrix d = semimetric_distances(*cfg.metric, y);
        if (cfg.alpha != 1.0) {
            std::size_t n = d.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    d.entries(i, j) = std::pow(d.entries(i, j), cfg.alpha);
        }
        return d.entries;
    }
    return pairwise_distances(y, cfg.alpha).entries;
}

}  // namespace

namespace {

double dcor_from_raw(Matrix a, Matrix b) {
    double_center_inplace(a);
    double_center_inplace(b);
    double vxy = dcov2_centered(a, b);
    double vxx = dcov2_centered(a, a);
    double vyy = dcov2_centered(b, b);
    if (vxx * vyy <= 1e-14) return 0.0;
    double r2 = std::max(0.0, vxy) / std::sqrt(vxx * vyy);
    return std::sqrt(std::min(1.0, r2));
}

}  // namespace

double dcor(const Matrix& x, const Matrix& y, const DcovConfig& cfg) {
    check_config(cfg);
    if (x.rows() != y.rows())
        throw SizeMismatchError("x has " + std::to_string(x.rows()) + " rows, y has " +
                                std::to_string(y.rows()));
    if (x.rows() < 2) throw SizeMismatchError("dcor requires n >= 2");
    return dcor_from_raw(pairwise_distances(x, cfg.alpha).entries, y_distance(y, cfg));
}

double dcor_index(const DataMatrix& data, const ColumnSelector& input_cols,
                  const ColumnSelector& output_cols, const DcovConfig& cfg) {
    return dcor(data.select(input_cols), data.select(output_cols), cfg);
}

double dcor_pick_freeze(const Matrix& y, const Matrix& y_frozen, const DcovConfig& cfg) {
    check_config(cfg);
    if (y.rows() != y_frozen.rows())
        throw SizeMismatchError("pick-and-freeze output samples have different sizes");
    if (y.rows() < 2) throw SizeMismatchError("dcor_pick_freeze requires n >= 2");
    // Both sides are output samples, so a configured semi-metric applies to both.
    return dcor_from_raw(y_distance(y, cfg), y_distance(y_frozen, cfg));
}

}  // namespace dmsens
