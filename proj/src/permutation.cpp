#include "dmsens/permutation.hpp"

#include <algorithm>
#include <cmath>

namespace dmsens {

DependenceMeasure DependenceMeasure::dcor_measure(DcovConfig cfg) {
    DependenceMeasure m;
    m.kind = Kind::dcor;
    m.dcov_cfg = std::move(cfg);
    return m;
}

DependenceMeasure DependenceMeasure::hsic_measure(HsicConfig cfg) {
    DependenceMeasure m;
    m.kind = Kind::hsic;
    m.hsic_cfg = std::move(cfg);
    return m;
}

DependenceMeasure DependenceMeasure::hsic_raw_measure(HsicConfig cfg) {
    DependenceMeasure m;
    m.kind = Kind::hsic_raw;
    m.hsic_cfg = std::move(cfg);
    return m;
}

DependenceMeasure DependenceMeasure::mi_measure(std::size_t k, RngSeed seed) {
    DependenceMeasure m;
    m.kind = Kind::mi_ksg;
    m.ksg_k = k;
    m.ksg_seed = seed;
    return m;
}

DependenceMeasure DependenceMeasure::fdiv_measure(FChoice choice) {
    DependenceMeasure m;
    m.kind = Kind::fdiv;
    m.fdiv_choice = choice;
    return m;
}

namespace {

std::vector<double> first_column(const Matrix& m) {
    if (m.cols() != 1)
        throw SizeMismatchError("this dependence measure requires scalar samples");
    std::vector<double> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
    return v;
}

}  // namespace

double DependenceMeasure::evaluate(const Matrix& x, const Matrix& y) const {
    switch (kind) {
        case Kind::dcor: return dcor(x, y, dcov_cfg);
        case Kind::hsic: return hsic_r(x, y, hsic_cfg);
        case Kind::hsic_raw: return hsic(x, y, hsic_cfg);
        case Kind::mi_ksg: return ksg_mi(first_column(x), first_column(y), ksg_k, ksg_seed);
        case Kind::fdiv: return fdiv_index(first_column(x), first_column(y), fdiv_choice);
        case Kind::generic: return generic_fn(x, y);
    }
    return 0.0;
}

Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& perm) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(perm[i], j);
    return out;
}

double null_quantile(std::vector<double> stats, double level) {
    std::sort(stats.begin(), stats.end());
    std::size_t b = stats.size();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(b + 1)));
    rank = std::min(std::max<std::size_t>(rank, 1), b);
    return stats[rank - 1];
}

namespace {

/// (1/n^2) sum_ij A_ij b[perm_i][perm_j] with A already double centered.
/// Centering commutes with relabeling, so no re-centering per permutation.
double permuted_product_mean(const Matrix& a_centered, const Matrix& b_raw,
                             const std::vector<std::size_t>& perm) {
    std::size_t n = a_centered.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* ra = a_centered.row_ptr(i);
        const double* rb = b_raw.row_ptr(perm[i]);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += ra[j] * rb[perm[j]];
        total += s;
    }
    double nn = static_cast<double>(n);
    return total / (nn * nn);
}

double clamp_small_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

struct CachedStatistic {
    Matrix a_centered;    // centered X-side matrix
    Matrix b_raw;         // raw Y-side matrix (distance or Gram)
    double denom = 1.0;   // sqrt(Vxx * Vyy) or sqrt(Hxx * Hyy)
    bool degenerate = false;
    bool normalized = true;

    double stat(const std::vector<std::size_t>& perm) const {
        double num = clamp_small_negative(permuted_product_mean(a_centered, b_raw, perm));
        if (!normalized) return num;
        if (degenerate) return 0.0;
        double r2 = std::max(0.0, num) / denom;
        return std::sqrt(std::min(1.0, r2));
    }
};

CachedStatistic build_cache(const DependenceMeasure& measure, const Matrix& x,
                            const Matrix& y) {
    CachedStatistic cache;
    if (measure.kind == DependenceMeasure::Kind::dcor) {
        const DcovConfig& cfg = measure.dcov_cfg;
        cache.a_centered = pairwise_distances(x, cfg.alpha).entries;
        cache.b_raw = cfg.metric ? semimetric_distances(*cfg.metric, y).entries
                                 : pairwise_distances(y, cfg.alpha).entries;
        if (cfg.metric && cfg.alpha != 1.0)
            for (std::size_t i = 0; i < cache.b_raw.rows(); ++i)
                for (std::size_t j = 0; j < cache.b_raw.cols(); ++j)
                    cache.b_raw(i, j) = std::pow(cache.b_raw(i, j), cfg.alpha);
        double_center_inplace(cache.a_centered);
        Matrix b_centered = cache.b_raw;
        double_center_inplace(b_centered);
        double vxx = clamp_small_negative(product_mean(cache.a_centered, cache.a_centered));
        double vyy = clamp_small_negative(product_mean(b_centered, b_centered));
        cache.degenerate = vxx * vyy <= 1e-14;
        cache.denom = cache.degenerate ? 1.0 : std::sqrt(vxx * vyy);
        cache.normalized = true;
    } else {
        const HsicConfig& cfg = measure.hsic_cfg;
        Matrix kx = gram(cfg.kernel_x, x, cfg.x_kind).entries;
        cache.b_raw = gram(cfg.kernel_y, y, cfg.y_kind).entries;
        cache.a_centered = kx;
        double_center_inplace(cache.a_centered);
        if (measure.kind == DependenceMeasure::Kind::hsic) {
            Matrix ky_centered = cache.b_raw;
            double_center_inplace(ky_centered);
            double hxx = clamp_small_negative(product_mean(cache.a_centered, kx));
            double hyy = clamp_small_negative(product_mean(ky_centered, cache.b_raw));
            cache.degenerate = hxx <= 1e-14 || hyy <= 1e-14;
            cache.denom = cache.degenerate ? 1.0 : std::sqrt(hxx * hyy);
            cache.normalized = true;
        } else {
            cache.normalized = false;
        }
    }
    return cache;
}

PermutationNull run_cached(const CachedStatistic& cache, std::size_t B, RngSeed seed,
                           const std::vector<double>& levels) {
    if (B < 1) throw BadBError("permutation test requires B >= 1");
    std::size_t n = cache.a_centered.rows();
    PermutationNull null;
    null.num_permutations = B;
    null.statistics.assign(B, 0.0);
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;
    null.observed = cache.stat(identity);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < static_cast<std::ptrdiff_t>(B); ++bb) {
        std::size_t b = static_cast<std::size_t>(bb);
        Rng rng = make_rng(seed, b);
        std::vector<std::size_t> perm = random_permutation(n, rng);
        null.statistics[b] = cache.stat(perm);
    }
    std::size_t count_ge = 0;
    for (double s : null.statistics)
        if (s >= null.observed) ++count_ge;
    null.p_value = static_cast<double>(1 + count_ge) / static_cast<double>(B + 1);
    for (double level : levels) null.quantiles[level] = null_quantile(null.statistics, level);
    return null;
}

}  // namespace

PermutationNull permutation_null_hsic(const Matrix& kx_raw, const Matrix& ky_raw,
                                      bool normalized, std::size_t B, RngSeed seed,
                                      const std::vector<double>& levels) {
    if (kx_raw.rows() != ky_raw.rows())
        throw SizeMismatchError("Gram matrices have different sizes");
    CachedStatistic cache;
    cache.a_centered = kx_raw;
    double_center_inplace(cache.a_centered);
    cache.b_raw = ky_raw;
    cache.normalized = normalized;
    if (normalized) {
        Matrix ky_centered = ky_raw;
        double_center_inplace(ky_centered);
        double hxx = clamp_small_negative(product_mean(cache.a_centered, kx_raw));
        double hyy = clamp_small_negative(product_mean(ky_centered, ky_raw));
        cache.degenerate = hxx <= 1e-14 || hyy <= 1e-14;
        cache.denom = cache.degenerate ? 1.0 : std::sqrt(hxx * hyy);
    }
    return run_cached(cache, B, seed, levels);
}

PermutationNull permutation_null_dcor(const Matrix& dx_raw, const Matrix& dy_raw,
                                      std::size_t B, RngSeed seed,
                                      const std::vector<double>& levels) {
    if (dx_raw.rows() != dy_raw.rows())
        throw SizeMismatchError("distance matrices have different sizes");
    CachedStatistic cache;
    cache.a_centered = dx_raw;
    double_center_inplace(cache.a_centered);
    cache.b_raw = dy_raw;
    cache.normalized = true;
    Matrix b_centered = dy_raw;
    double_center_inplace(b_centered);
    double vxx = clamp_small_negative(product_mean(cache.a_centered, cache.a_centered));
    double vyy = clamp_small_negative(product_mean(b_centered, b_centered));
    cache.degenerate = vxx * vyy <= 1e-14;
    cache.denom = cache.degenerate ? 1.0 : std::sqrt(vxx * vyy);
    return run_cached(cache, B, seed, levels);
}

PermutationNull permutation_test(const DependenceMeasure& measure, const Matrix& x,
                                 const Matrix& y, std::size_t B, RngSeed seed,
                                 const std::vector<double>& levels) {
    if (B < 1) throw BadBError("permutation_test requires B >= 1");
    if (x.rows() != y.rows())
        throw SizeMismatchError("permutation_test: x and y row counts differ");
    std::size_t n = x.rows();

    bool cached = measure.kind == DependenceMeasure::Kind::dcor ||
                  measure.kind == DependenceMeasure::Kind::hsic ||
                  measure.kind == DependenceMeasure::Kind::hsic_raw;
    if (cached) return run_cached(build_cache(measure, x, y), B, seed, levels);

    PermutationNull null;
    null.num_permutations = B;
    null.statistics.assign(B, 0.0);
    null.observed = measure.evaluate(x, y);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < static_cast<std::ptrdiff_t>(B); ++bb) {
        std::size_t b = static_cast<std::size_t>(bb);
        Rng rng = make_rng(seed, b);
        std::vector<std::size_t> perm = random_permutation(n, rng);
        null.statistics[b] = measure.evaluate(x, permute_rows(y, perm));
    }
    std::size_t count_ge = 0;
    for (double s : null.statistics)
        if (s >= null.observed) ++count_ge;
    null.p_value = static_cast<double>(1 + count_ge) / static_cast<double>(B + 1);
    for (double level : levels) null.quantiles[level] = null_quantile(null.statistics, level);
    return null;
}

}  // namespace dmsens
