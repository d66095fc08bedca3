#pragma once

#include <optional>

#include "dmsens/data_matrix.hpp"
#include "dmsens/kernels.hpp"

namespace dmsens {

struct DcovConfig {
    /// Exponent of the distance family, in (0, 2). The alpha -> 2 covariance
    /// limit is deliberately not reachable here; use the pick-and-freeze
    /// covariance estimator instead.
    double alpha = 1.0;
    /// When set, the y side uses the fitted PCA semi-metric instead of the
    /// Euclidean distance (functional outputs).
    std::optional<SemiMetricSpec> metric;
};

/// Mean of the entrywise product of two equally-sized matrices, (1/n^2) sum.
/// Deterministic regardless of thread count (per-row partials, serial fold).
double product_mean(const Matrix& a, const Matrix& b);

/// Squared distance covariance from two distance matrices: both are double
/// centered and the result is (1/n^2) sum A_ij B_ij, clamped to 0 when it
/// falls within -1e-12 of zero.
double dcov2(const DistanceMatrix& a, const DistanceMatrix& b);

/// Empirical distance correlation R_n between two point sets (rows paired).
/// Returns 0 when V2(X,X) * V2(Y,Y) <= 1e-14.
double dcor(const Matrix& x, const Matrix& y, const DcovConfig& cfg = {});

/// Index of a group of inputs against the outputs: R(X^u, Y).
double dcor_index(const DataMatrix& data, const ColumnSelector& input_cols,
                  const ColumnSelector& output_cols, const DcovConfig& cfg = {});

/// Pick-and-freeze distance correlation R(Y, Y_frozen) between paired output
/// samples from a shared-input design.
double dcor_pick_freeze(const Matrix& y, const Matrix& y_frozen, const DcovConfig& cfg = {});

}  // namespace dmsens
