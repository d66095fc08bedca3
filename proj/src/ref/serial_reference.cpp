#include "serial_reference.hpp"

#include <cmath>

namespace dmsens::ref {

Matrix pairwise_distances(const Matrix& points, double alpha) {
    std::size_t n = points.rows();
    std::size_t d = points.cols();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                double diff = points(i, k) - points(j, k);
                s += diff * diff;
            }
            out(i, j) = std::pow(std::sqrt(s), alpha);
        }
    }
    return out;
}

Matrix gram_gaussian(const Matrix& points, double sigma) {
    std::size_t n = points.rows();
    std::size_t d = points.cols();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                double diff = points(i, k) - points(j, k);
                s += diff * diff;
            }
            out(i, j) = std::exp(-s / (2.0 * sigma * sigma));
        }
    }
    return out;
}

Matrix center_dense(const Matrix& g) {
    std::size_t n = g.rows();
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n);
    // H * G
    Matrix hg(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += h(i, k) * g(k, j);
            hg(i, j) = s;
        }
    // (H * G) * H
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += hg(i, k) * h(k, j);
            out(i, j) = s;
        }
    return out;
}

namespace {

double three_sum(const Matrix& a, const Matrix& b) {
    std::size_t n = a.rows();
    double nn = static_cast<double>(n);
    double term1 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) term1 += a(i, j) * b(i, j);
    term1 /= nn * nn;

    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mean_a += a(i, j);
            mean_b += b(i, j);
        }
    mean_a /= nn * nn;
    mean_b /= nn * nn;

    double term3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ra = 0.0, rb = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ra += a(i, j);
            rb += b(i, j);
        }
        term3 += (ra / nn) * (rb / nn);
    }
    term3 /= nn;

    return term1 + mean_a * mean_b - 2.0 * term3;
}

}  // namespace

double dcov2_three_sum(const Matrix& a, const Matrix& b) { return three_sum(a, b); }

double hsic_three_sum(const Matrix& kx, const Matrix& ky) { return three_sum(kx, ky); }

}  // namespace dmsens::ref
