#include "dmsens/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

namespace dmsens {

namespace {

double sq_euclid(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

double l1_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += std::fabs(a[k] - b[k]);
    return s;
}

}  // namespace

std::string kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::laplace: return "laplace";
        case KernelFamily::distance_induced: return "distance_induced";
        case KernelFamily::categorical: return "categorical";
        case KernelFamily::semimetric_gaussian: return "semimetric_gaussian";
    }
    return "?";
}

double SemiMetricSpec::distance(const double* y1, const double* y2, std::size_t q) const {
    // |W (y1 - y2)|_2 over the fitted loadings; the mean cancels.
    double s = 0.0;
    for (std::size_t c = 0; c < fitted_components; ++c) {
        const double* w = loadings.row_ptr(c);
        double proj = 0.0;
        for (std::size_t k = 0; k < q; ++k) proj += w[k] * (y1[k] - y2[k]);
        s += proj * proj;
    }
    return std::sqrt(s);
}

double median_heuristic(const Matrix& points) {
    std::size_t n = points.rows();
    if (n < 2) throw Error("median_heuristic requires at least 2 samples");
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = std::sqrt(sq_euclid(points.row_ptr(i), points.row_ptr(j), points.cols()));
            if (d > 0.0) dists.push_back(d);
        }
    if (dists.empty()) throw ZeroBandwidthError("all points coincide; median heuristic undefined");
    std::sort(dists.begin(), dists.end());
    std::size_t m = dists.size();
    return (m % 2 == 1) ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

double median_heuristic(const DataMatrix& data, const ColumnSelector& cols) {
    return median_heuristic(data.select(cols));
}

double resolve_bandwidth(const KernelSpec& spec, const DataMatrix& data,
                         const ColumnSelector& cols) {
    if (spec.bandwidth) {
        if (!(*spec.bandwidth > 0.0)) throw Error("explicit bandwidth must be > 0");
        return *spec.bandwidth;
    }
    if (spec.family == KernelFamily::semimetric_gaussian) {
        if (!spec.semimetric || !spec.semimetric->fitted())
            throw Error("semimetric_gaussian kernel requires a fitted semi-metric");
        // Median of positive semi-metric distances.
        Matrix pts = data.select(cols);
        DistanceMatrix d = semimetric_distances(*spec.semimetric, pts);
        std::vector<double> pos;
        std::size_t n = d.size();
        pos.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (d.entries(i, j) > 0.0) pos.push_back(d.entries(i, j));
        if (pos.empty())
            throw ZeroBandwidthError("all points coincide under the semi-metric");
        std::sort(pos.begin(), pos.end());
        std::size_t m = pos.size();
        return (m % 2 == 1) ? pos[m / 2] : 0.5 * (pos[m / 2 - 1] + pos[m / 2]);
    }
    return median_heuristic(data, cols);
}

GramMatrix gram(const KernelSpec& spec, const DataMatrix& data, const ColumnSelector& cols) {
    data.check_selector(cols);
    if (spec.family == KernelFamily::categorical) {
        if (cols.size() != 1)
            throw KindMismatchError("categorical kernel requires a single column");
        if (data.kind(cols.indices[0]) != ColumnKind::categorical)
            throw KindMismatchError("categorical kernel on continuous column '" +
                                    data.column_names()[cols.indices[0]] + "'");
        return gram(spec, data.select(cols), ColumnKind::categorical);
    }
    KernelSpec resolved = spec;
    if (!resolved.bandwidth && (spec.family == KernelFamily::gaussian ||
                                spec.family == KernelFamily::laplace ||
                                spec.family == KernelFamily::semimetric_gaussian))
        resolved.bandwidth = resolve_bandwidth(spec, data, cols);
    return gram(resolved, data.select(cols), ColumnKind::continuous);
}

GramMatrix gram(const KernelSpec& spec, const Matrix& points, ColumnKind kind) {
    std::size_t n = points.rows();
    std::size_t d = points.cols();
    if (n < 1) throw Error("gram requires n >= 1");
    GramMatrix g{Matrix(n, n), false};

    switch (spec.family) {
        case KernelFamily::gaussian: {
            double sigma = spec.bandwidth ? *spec.bandwidth : median_heuristic(points);
            if (!(sigma > 0.0)) throw ZeroBandwidthError("gaussian kernel bandwidth is zero");
            double inv = 1.0 / (2.0 * sigma * sigma);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
                std::size_t i = static_cast<std::size_t>(ii);
                for (std::size_t j = i; j < n; ++j) {
                    double v = std::exp(-sq_euclid(points.row_ptr(i), points.row_ptr(j), d) * inv);
                    g.entries(i, j) = v;
                    g.entries(j, i) = v;
                }
            }
            break;
        }
        case KernelFamily::laplace: {
            double sigma = spec.bandwidth ? *spec.bandwidth : median_heuristic(points);
            if (!(sigma > 0.0)) throw ZeroBandwidthError("laplace kernel bandwidth is zero");
            double inv = 1.0 / sigma;
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
                std::size_t i = static_cast<std::size_t>(ii);
                for (std::size_t j = i; j < n; ++j) {
                    double v = std::exp(-l1_dist(points.row_ptr(i), points.row_ptr(j), d) * inv);
                    g.entries(i, j) = v;
                    g.entries(j, i) = v;
                }
            }
            break;
        }
        case KernelFamily::distance_induced: {
            std::vector<double> norms(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                const double* row = points.row_ptr(i);
                for (std::size_t k = 0; k < d; ++k) s += row[k] * row[k];
                norms[i] = std::sqrt(s);
            }
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
                std::size_t i = static_cast<std::size_t>(ii);
                for (std::size_t j = i; j < n; ++j) {
                    double dij = std::sqrt(sq_euclid(points.row_ptr(i), points.row_ptr(j), d));
                    double v = 0.5 * (norms[i] + norms[j] - dij);
                    g.entries(i, j) = v;
                    g.entries(j, i) = v;
                }
            }
            break;
        }
        case KernelFamily::categorical: {
            if (d != 1) throw KindMismatchError("categorical kernel requires a single column");
            if (kind != ColumnKind::categorical)
                throw KindMismatchError("categorical kernel on continuous column");
            std::map<long long, std::size_t> counts;
            for (std::size_t i = 0; i < n; ++i)
                counts[static_cast<long long>(points(i, 0))]++;
            for (std::size_t i = 0; i < n; ++i) {
                long long yi = static_cast<long long>(points(i, 0));
                for (std::size_t j = i; j < n; ++j) {
                    double v = (yi == static_cast<long long>(points(j, 0)))
                                   ? 1.0 / static_cast<double>(counts[yi])
                                   : 0.0;
                    g.entries(i, j) = v;
                    g.entries(j, i) = v;
                }
            }
            break;
        }
        case KernelFamily::semimetric_gaussian: {
            if (!spec.semimetric || !spec.semimetric->fitted())
                throw Error("semimetric_gaussian kernel requires a fitted semi-metric");
            const SemiMetricSpec& sm = *spec.semimetric;
            DistanceMatrix delta = semimetric_distances(sm, points);
            double sigma;
            if (spec.bandwidth) {
                sigma = *spec.bandwidth;
            } else {
                std::vector<double> pos;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (delta.entries(i, j) > 0.0) pos.push_back(delta.entries(i, j));
                if (pos.empty())
                    throw ZeroBandwidthError("all points coincide under the semi-metric");
                std::sort(pos.begin(), pos.end());
                std::size_t m = pos.size();
                sigma = (m % 2 == 1) ? pos[m / 2] : 0.5 * (pos[m / 2 - 1] + pos[m / 2]);
            }
            if (!(sigma > 0.0)) throw ZeroBandwidthError("semi-metric bandwidth is zero");
            double inv = 1.0 / (2.0 * sigma * sigma);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
                std::size_t i = static_cast<std::size_t>(ii);
                for (std::size_t j = i; j < n; ++j) {
                    double v = std::exp(-delta.entries(i, j) * delta.entries(i, j) * inv);
                    g.entries(i, j) = v;
                    g.entries(j, i) = v;
                }
            }
            break;
        }
    }
    return g;
}

void double_center_inplace(Matrix& m) {
    std::size_t n = m.rows();
    std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
    double grand = 0.0;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        double s = 0.0;
        const double* row = m.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) s += row[j];
        row_mean[i] = s / static_cast<double>(n);
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n); ++jj) {
        std::size_t j = static_cast<std::size_t>(jj);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += m(i, j);
        col_mean[j] = s / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) grand += row_mean[i];
    grand /= static_cast<double>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        double* row = m.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) row[j] += grand - row_mean[i] - col_mean[j];
    }
}

GramMatrix center(const GramMatrix& g) {
    if (g.centered) throw Error("center() expects an uncentered Gram matrix");
    GramMatrix out{g.entries, true};
    double_center_inplace(out.entries);
    return out;
}

DistanceMatrix pairwise_distances(const Matrix& points, double norm_power) {
    if (!(norm_power > 0.0) || norm_power > 2.0)
        throw BadAlphaError("norm power must lie in (0, 2], got " + std::to_string(norm_power));
    std::size_t n = points.rows();
    DistanceMatrix dm{Matrix(n, n)};
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        dm.entries(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = sq_euclid(points.row_ptr(i), points.row_ptr(j), points.cols());
            double v = (norm_power == 1.0) ? std::sqrt(d2)
                       : (norm_power == 2.0) ? d2
                                             : std::pow(d2, 0.5 * norm_power);
            dm.entries(i, j) = v;
            dm.entries(j, i) = v;
        }
    }
    return dm;
}

DistanceMatrix pairwise_distances(const DataMatrix& data, const ColumnSelector& cols,
                                  double norm_power) {
    data.check_selector(cols);
    for (std::size_t idx : cols.indices)
        if (data.kind(idx) != ColumnKind::continuous)
            throw KindMismatchError("pairwise_distances requires continuous columns");
    return pairwise_distances(data.select(cols), norm_power);
}

DistanceMatrix semimetric_distances(const SemiMetricSpec& sm, const Matrix& outputs) {
    if (!sm.fitted()) throw Error("semi-metric is not fitted");
    if (outputs.cols() != sm.mean.size())
        throw DimMismatchError("semi-metric fitted on dimension " +
                               std::to_string(sm.mean.size()) + ", got " +
                               std::to_string(outputs.cols()));
    std::size_t n = outputs.rows();
    std::size_t q = outputs.cols();
    // Project once, then take plain Euclidean distances between score rows.
    Matrix scores(n, sm.fitted_components);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t c = 0; c < sm.fitted_components; ++c) {
            const double* w = sm.loadings.row_ptr(c);
            double s = 0.0;
            for (std::size_t k = 0; k < q; ++k) s += w[k] * (outputs(i, k) - sm.mean[k]);
            scores(i, c) = s;
        }
    }
    return pairwise_distances(scores, 1.0);
}

SemiMetricSpec fit_pca_semimetric(const DataMatrix& outputs, std::size_t m) {
    return fit_pca_semimetric(outputs.values(), m);
}

SemiMetricSpec fit_pca_semimetric(const Matrix& outputs, std::size_t m) {
    std::size_t n = outputs.rows();
    std::size_t q = outputs.cols();
    if (m < 1) throw Error("fit_pca_semimetric requires m >= 1");
    if (n < 2) throw Error("fit_pca_semimetric requires n >= 2");
    if (m > std::min(n - 1, q))
        throw Error("fit_pca_semimetric requires m <= min(n-1, q)");

    std::vector<double> mean(q, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < q; ++k) mean[k] += outputs(i, k);
    for (std::size_t k = 0; k < q; ++k) mean[k] /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < q; ++k)
            centered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                outputs(i, k) - mean[k];

    Eigen::MatrixXd loadings;  // columns are eigenvectors, descending eigenvalue
    Eigen::VectorXd eigenvalues;
    if (q <= n) {
        Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        // Eigen returns ascending order; flip to descending.
        Eigen::Index qq = cov.rows();
        loadings.resize(qq, qq);
        eigenvalues.resize(qq);
        for (Eigen::Index c = 0; c < qq; ++c) {
            loadings.col(c) = es.eigenvectors().col(qq - 1 - c);
            eigenvalues(c) = es.eigenvalues()(qq - 1 - c);
        }
    } else {
        // Dual form: eigenvectors of the n x n matrix C C' map to loadings
        // v = C'u / |C'u|.
        Eigen::MatrixXd small = centered * centered.transpose() / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
        Eigen::Index nn = small.rows();
        loadings.resize(static_cast<Eigen::Index>(q), nn);
        eigenvalues.resize(nn);
        for (Eigen::Index c = 0; c < nn; ++c) {
            Eigen::VectorXd u = es.eigenvectors().col(nn - 1 - c);
            Eigen::VectorXd v = centered.transpose() * u;
            double norm = v.norm();
            loadings.col(c) = (norm > 0.0) ? Eigen::VectorXd(v / norm)
                                           : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
            eigenvalues(c) = es.eigenvalues()(nn - 1 - c);
        }
    }

    double tol = 1e-12 * std::max(1.0, eigenvalues.size() > 0 ? eigenvalues(0) : 0.0);
    std::size_t available = 0;
    for (Eigen::Index c = 0; c < eigenvalues.size(); ++c)
        if (eigenvalues(c) > tol) ++available;

    SemiMetricSpec sm;
    sm.num_components = m;
    sm.fitted_components = std::min<std::size_t>(m, available);
    sm.rank_deficient = sm.fitted_components < m;
    if (sm.fitted_components == 0)
        throw Error("fit_pca_semimetric: no positive-variance directions in outputs");
    sm.mean = mean;
    sm.loadings = Matrix(sm.fitted_components, q);
    for (std::size_t c = 0; c < sm.fitted_components; ++c) {
        // Sign convention: largest-magnitude entry positive.
        Eigen::Index argmax = 0;
        double best = 0.0;
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(q); ++k) {
            double a = std::fabs(loadings(k, static_cast<Eigen::Index>(c)));
            if (a > best) {
                best = a;
                argmax = k;
            }
        }
        double sign = loadings(argmax, static_cast<Eigen::Index>(c)) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < q; ++k)
            sm.loadings(c, k) = sign * loadings(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(c));
    }
    return sm;
}

}  // namespace dmsens
