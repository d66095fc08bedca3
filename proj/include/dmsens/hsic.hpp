#pragma once

#include "dmsens/data_matrix.hpp"
#include "dmsens/kernels.hpp"

namespace dmsens {

struct HsicConfig {
    KernelSpec kernel_x = KernelSpec::gaussian();
    KernelSpec kernel_y = KernelSpec::gaussian();
    /// Column kinds of the two blocks; categorical kernels need to know.
    ColumnKind x_kind = ColumnKind::continuous;
    ColumnKind y_kind = ColumnKind::continuous;
};

/// HSIC_n from precomputed raw Gram matrices: (1/n^2) Tr(Kx H Ky H), clamped
/// to 0 within -1e-12. Only one matrix is centered internally (the trace is
/// invariant to which side carries the centering).
double hsic_from_grams(const Matrix& kx_raw, const Matrix& ky_raw);

/// Biased HSIC estimator between paired samples.
double hsic(const Matrix& x, const Matrix& y, const HsicConfig& cfg = {});

/// Normalized kernel distance correlation
/// R(X,Y) = sqrt(HSIC(X,Y) / sqrt(HSIC(X,X) HSIC(Y,Y))), in [0, 1];
/// 0 when either self-HSIC <= 1e-14.
double hsic_r(const Matrix& x, const Matrix& y, const HsicConfig& cfg = {});

/// Pick-and-freeze HSIC index R(Y, Y_frozen) with the same output kernel on
/// both sides.
double hsic_pick_freeze(const Matrix& y, const Matrix& y_frozen,
                        const KernelSpec& kernel_y = KernelSpec::gaussian(),
                        ColumnKind y_kind = ColumnKind::continuous);

/// Convenience wrappers over column selections.
double hsic_index(const DataMatrix& data, const ColumnSelector& input_cols,
                  const ColumnSelector& output_cols, const HsicConfig& cfg = {});

}  // namespace dmsens
