#include "dmsens/hsic.hpp"

#include <cmath>

#include "dmsens/distance_correlation.hpp"

namespace dmsens {

namespace {

double clamp_small_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

struct HsicParts {
    double hxy = 0.0;
    double hxx = 0.0;
    double hyy = 0.0;
};

HsicParts hsic_parts(const Matrix& kx, const Matrix& ky) {
    Matrix kx_c = kx;
    Matrix ky_c = ky;
    double_center_inplace(kx_c);
    double_center_inplace(ky_c);
    HsicParts parts;
    parts.hxy = clamp_small_negative(product_mean(kx_c, ky));
    parts.hxx = clamp_small_negative(product_mean(kx_c, kx));
    parts.hyy = clamp_small_negative(product_mean(ky_c, ky));
    return parts;
}

void check_sizes(const Matrix& x, const Matrix& y, const char* what) {
    if (x.rows() != y.rows())
        throw SizeMismatchError(std::string(what) + ": x has " + std::to_string(x.rows()) +
                                " rows, y has " + std::to_string(y.rows()));
    if (x.rows() < 2) throw SizeMismatchError(std::string(what) + " requires n >= 2");
}

}  // namespace

double hsic_from_grams(const Matrix& kx_raw, const Matrix& ky_raw) {
    if (kx_raw.rows() != ky_raw.rows())
        throw SizeMismatchError("Gram matrices have different sizes");
    Matrix kx_c = kx_raw;
    double_center_inplace(kx_c);
    // Tr(Kx H Ky H) = sum_ij (H Kx H)_ij (Ky)_ij for symmetric Ky.
    return clamp_small_negative(product_mean(kx_c, ky_raw));
}

double hsic(const Matrix& x, const Matrix& y, const HsicConfig& cfg) {
    check_sizes(x, y, "hsic");
    Matrix kx = gram(cfg.kernel_x, x, cfg.x_kind).entries;
    Matrix ky = gram(cfg.kernel_y, y, cfg.y_kind).entries;
    return hsic_from_grams(kx, ky);
}

double hsic_r(const Matrix& x, const Matrix& y, const HsicConfig& cfg) {
    check_sizes(x, y, "hsic_r");
    Matrix kx = gram(cfg.kernel_x, x, cfg.x_kind).entries;
    Matrix ky = gram(cfg.kernel_y, y, cfg.y_kind).entries;
    HsicParts parts = hsic_parts(kx, ky);
    if (parts.hxx <= 1e-14 || parts.hyy <= 1e-14) return 0.0;
    double r2 = std::max(0.0, parts.hxy) / std::sqrt(parts.hxx * parts.hyy);
    return std::sqrt(std::min(1.0, r2));
}

double hsic_pick_freeze(const Matrix& y, const Matrix& y_frozen, const KernelSpec& kernel_y,
                        ColumnKind y_kind) {
    check_sizes(y, y_frozen, "hsic_pick_freeze");
    HsicConfig cfg;
    cfg.kernel_x = kernel_y;
    cfg.kernel_y = kernel_y;
    cfg.x_kind = y_kind;
    cfg.y_kind = y_kind;
    return hsic_r(y, y_frozen, cfg);
}

double hsic_index(const DataMatrix& data, const ColumnSelector& input_cols,
                  const ColumnSelector& output_cols, const HsicConfig& cfg) {
    HsicConfig resolved = cfg;
    auto block_kind = [&](const ColumnSelector& sel) {
        return (sel.size() == 1 && data.kind(sel.indices[0]) == ColumnKind::categorical)
                   ? ColumnKind::categorical
                   : ColumnKind::continuous;
    };
    resolved.x_kind = block_kind(input_cols);
    resolved.y_kind = block_kind(output_cols);
    return hsic_r(data.select(input_cols), data.select(output_cols), resolved);
}

}  // namespace dmsens
