#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmsens/data_matrix.hpp"

namespace dmsens {

/// Semi-metric on output vectors: Euclidean distance between the scores of a
/// fitted principal-component projection. The loadings are orthonormal and
/// sign-fixed (largest-magnitude entry positive) so fits are reproducible.
struct SemiMetricSpec {
    std::size_t num_components = 0;   // requested m
    std::size_t fitted_components = 0;  // may be < m when rank-deficient
    bool rank_deficient = false;
    std::vector<double> mean;          // length q
    Matrix loadings;                   // fitted_components x q, rows orthonormal

    bool fitted() const { return fitted_components > 0; }

    /// Distance between two output rows (pointers to length-q vectors).
    double distance(const double* y1, const double* y2, std::size_t q) const;
};

enum class KernelFamily { gaussian, laplace, distance_induced, categorical, semimetric_gaussian };

struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    /// Explicit bandwidth; empty means the median heuristic.
    std::optional<double> bandwidth;
    /// Present iff family == semimetric_gaussian.
    std::optional<SemiMetricSpec> semimetric;

    static KernelSpec gaussian() { return {KernelFamily::gaussian, std::nullopt, std::nullopt}; }
    static KernelSpec gaussian_bw(double sigma) {
        return {KernelFamily::gaussian, sigma, std::nullopt};
    }
    static KernelSpec laplace() { return {KernelFamily::laplace, std::nullopt, std::nullopt}; }
    static KernelSpec distance_induced() {
        return {KernelFamily::distance_induced, std::nullopt, std::nullopt};
    }
    static KernelSpec categorical() {
        return {KernelFamily::categorical, std::nullopt, std::nullopt};
    }
    static KernelSpec semimetric_gaussian(SemiMetricSpec sm) {
        return {KernelFamily::semimetric_gaussian, std::nullopt, std::move(sm)};
    }
};

std::string kernel_family_name(KernelFamily family);

/// n x n symmetric kernel matrix. `centered` records whether the matrix has
/// been conjugated with H = I - (1/n) 11'.
struct GramMatrix {
    Matrix entries;
    bool centered = false;

    std::size_t size() const { return entries.rows(); }
};

/// n x n symmetric nonnegative matrix with zero diagonal.
struct DistanceMatrix {
    Matrix entries;

    std::size_t size() const { return entries.rows(); }
};

/// Median of the strictly positive pairwise Euclidean distances over the
/// selected columns. Throws ZeroBandwidthError when every pair coincides.
double median_heuristic(const DataMatrix& data, const ColumnSelector& cols);
double median_heuristic(const Matrix& points);

/// Uncentered Gram matrix of the selected columns under `spec`.
///   gaussian:           exp(-|x - x'|_2^2 / (2 sigma^2))
///   laplace:            exp(-|x - x'|_1 / sigma)
///   distance_induced:   (|x|_2 + |x'|_2 - |x - x'|_2) / 2
///   categorical:        delta_{xx'} / n_x on a single categorical column
///   semimetric_gaussian: exp(-Delta(y,y')^2 / (2 sigma^2)) with the PCA
///                        semi-metric Delta
double resolve_bandwidth(const KernelSpec& spec, const DataMatrix& data,
                         const ColumnSelector& cols);
GramMatrix gram(const KernelSpec& spec, const DataMatrix& data, const ColumnSelector& cols);
GramMatrix gram(const KernelSpec& spec, const Matrix& points, ColumnKind kind);

/// HGH double centering; requires an uncentered input.
GramMatrix center(const GramMatrix& g);

/// In-place double centering of a raw symmetric matrix:
/// M_ij <- M_ij - rowmean_i - colmean_j + grandmean.
void double_center_inplace(Matrix& m);

/// Pairwise distances |x_i - x_j|_2^alpha on continuous columns, alpha in
/// (0, 2]. alpha = 2 is allowed here only as a documented limiting case; the
/// dCov family restricts itself to (0, 2).
DistanceMatrix pairwise_distances(const DataMatrix& data, const ColumnSelector& cols,
                                  double norm_power = 1.0);
DistanceMatrix pairwise_distances(const Matrix& points, double norm_power = 1.0);

/// Pairwise PCA semi-metric distances between rows of `outputs`.
DistanceMatrix semimetric_distances(const SemiMetricSpec& sm, const Matrix& outputs);

/// Fit the PCA semi-metric: mean and top-m eigenvectors of the sample
/// covariance of `outputs`. Requires 1 <= m <= min(n-1, q). When fewer than m
/// eigenvalues are positive the fit falls back to the available count and
/// reports it via `rank_deficient`.
SemiMetricSpec fit_pca_semimetric(const DataMatrix& outputs, std::size_t m);
SemiMetricSpec fit_pca_semimetric(const Matrix& outputs, std::size_t m);

}  // namespace dmsens
