#pragma once

// Straight-line serial implementations of the core kernels. These are kept
// deliberately naive: the unit and acceptance suites use them as independent
// oracles for the OpenMP paths, and the bench tool compares against them.

#include "dmsens/data_matrix.hpp"
#include "dmsens/kernels.hpp"

namespace dmsens::ref {

/// Plain-loop pairwise |x_i - x_j|_2^alpha.
Matrix pairwise_distances(const Matrix& points, double alpha);

/// Plain-loop Gaussian Gram matrix with explicit bandwidth.
Matrix gram_gaussian(const Matrix& points, double sigma);

/// Double centering as a dense H * G * H product with explicit H.
Matrix center_dense(const Matrix& g);

/// Naive three-sum distance covariance estimator:
/// mean(a.*b) + mean(a)*mean(b) - 2*mean_i(rowmean_a_i * rowmean_b_i).
double dcov2_three_sum(const Matrix& a, const Matrix& b);

/// Naive three-sum HSIC estimator on raw Gram matrices (same shape as the
/// distance covariance expansion).
double hsic_three_sum(const Matrix& kx, const Matrix& ky);

}  // namespace dmsens::ref
