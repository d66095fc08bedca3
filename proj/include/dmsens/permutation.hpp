#pragma once

#include <functional>
#include <map>
#include <vector>

#include "dmsens/data_matrix.hpp"
#include "dmsens/distance_correlation.hpp"
#include "dmsens/fdiv.hpp"
#include "dmsens/hsic.hpp"

namespace dmsens {

/// Named dependence statistic for permutation testing. dcor / hsic / hsic_raw
/// use cached Gram or distance matrices (permuting rows of Y only reindexes
/// the cached matrix); the remaining kinds recompute from permuted samples.
struct DependenceMeasure {
    enum class Kind { dcor, hsic, hsic_raw, mi_ksg, fdiv, generic };

    Kind kind = Kind::hsic;
    DcovConfig dcov_cfg;
    HsicConfig hsic_cfg;
    FChoice fdiv_choice = FChoice::kl_neg_log;
    std::size_t ksg_k = 4;
    RngSeed ksg_seed = 0x6b7367u;
    std::function<double(const Matrix&, const Matrix&)> generic_fn;

    static DependenceMeasure dcor_measure(DcovConfig cfg = {});
    static DependenceMeasure hsic_measure(HsicConfig cfg = {});
    static DependenceMeasure hsic_raw_measure(HsicConfig cfg = {});
    static DependenceMeasure mi_measure(std::size_t k = 4, RngSeed seed = 0x6b7367u);
    static DependenceMeasure fdiv_measure(FChoice choice);

    /// Evaluate the statistic directly (no caching).
    double evaluate(const Matrix& x, const Matrix& y) const;
};

struct PermutationNull {
    std::size_t num_permutations = 0;
    double observed = 0.0;
    std::vector<double> statistics;         // permuted statistics, in permutation order
    std::map<double, double> quantiles;     // level -> null quantile
    double p_value = 1.0;                   // (1 + #{permuted >= observed}) / (B + 1)
};

/// Permutation independence test: the statistic is recomputed on B row
/// permutations of y (x fixed), each permutation drawn from its own derived
/// substream so results are identical at any thread count.
PermutationNull permutation_test(const DependenceMeasure& measure, const Matrix& x,
                                 const Matrix& y, std::size_t B, RngSeed seed,
                                 const std::vector<double>& levels = {0.95});

Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& perm);

/// Order statistic convention used for null quantiles: the
/// ceil(level * (B + 1))-th smallest permuted value (clamped to the sample).
double null_quantile(std::vector<double> stats, double level);

/// Gram-level fast path: null of HSIC (normalized or raw) from precomputed
/// raw Gram matrices.
PermutationNull permutation_null_hsic(const Matrix& kx_raw, const Matrix& ky_raw,
                                      bool normalized, std::size_t B, RngSeed seed,
                                      const std::vector<double>& levels = {0.95});

/// Distance-level fast path: null of the distance correlation from
/// precomputed raw distance matrices.
PermutationNull permutation_null_dcor(const Matrix& dx_raw, const Matrix& dy_raw,
                                      std::size_t B, RngSeed seed,
                                      const std::vector<double>& levels = {0.95});

}  // namespace dmsens
