#pragma once

#include <vector>

#include "dmsens/data_matrix.hpp"
#include "dmsens/hsic.hpp"
#include "dmsens/kernels.hpp"

namespace dmsens {

enum class ScreenMeasure { dcor, hsic, ksg_mi };

std::string screen_measure_name(ScreenMeasure m);

enum class StopReason { stabilized, max_size, threshold };

std::string stop_reason_name(StopReason r);

struct ScreeningResult {
    ColumnSelector selected;             // input columns, in selection order
    std::vector<double> scores;          // score of each selection step
    std::vector<double> marginal_scores; // per-input marginal dependence (when computed)
    std::vector<double> selection_probabilities;  // filled by bootstrap_selection
    StopReason stop_reason = StopReason::stabilized;
    bool empty_selection = false;        // step-1 threshold selected nothing
};

/// Step-1 threshold rule of the iterative HSIC screen.
struct ThresholdPolicy {
    enum class Kind { permutation_quantile, top_fraction };
    Kind kind = Kind::permutation_quantile;
    double level = 0.05;   // permutation test level
    std::size_t B = 199;   // permutations
    RngSeed seed = 0;
    double fraction = 0.25;  // keep ceil(fraction * p) top inputs

    static ThresholdPolicy permutation_quantile(double level, std::size_t B, RngSeed seed);
    static ThresholdPolicy top_fraction(double q);
};

/// Inputs ranked by marginal dependence with the output, descending; ties
/// broken by column index.
ScreeningResult max_relevance_rank(const DataMatrix& data, const ColumnSelector& output_cols,
                                   ScreenMeasure measure);

/// Greedy forward mRMR: each step adds the candidate maximizing marginal
/// relevance minus mean redundancy with the already-selected inputs.
ScreeningResult mrmr_forward(const DataMatrix& data, const ColumnSelector& output_cols,
                             ScreenMeasure measure, std::size_t m);

/// Value of the set objective (1/m) sum_k D(X^k, Y) - (1/m^2) sum_kl D(X^k, X^l)
/// over a candidate subset; the exhaustive-subset test oracle evaluates this.
double mrmr_objective(const DataMatrix& data, const ColumnSelector& output_cols,
                      ScreenMeasure measure, const std::vector<std::size_t>& subset);

/// Iterative HSIC screen: marginal threshold pass, then group augmentation
/// whenever HSIC(Y, (X^u, X^k)) exceeds HSIC(Y, X^u), until the selected set
/// stabilizes or reaches max_size. Raw (unnormalized) HSIC with a Gaussian
/// median-heuristic kernel and a shared output Gram matrix.
ScreeningResult iterative_hsic_screen(const DataMatrix& data, const ColumnSelector& output_cols,
                                      const ThresholdPolicy& policy, std::size_t max_size);

struct HsicLassoSolution {
    std::vector<double> alpha;       // per input, nonnegative
    double lambda = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;      // coordinate-descent sweeps
    bool converged = false;
    std::vector<double> relevance;   // <G_k, G_Y> after centering + normalization
};

/// Nonnegative lasso on centered, unit-Frobenius-normalized Gram matrices:
/// min 0.5 |G_Y - sum_k alpha_k G_k|_F^2 + lambda |alpha|_1, alpha >= 0,
/// solved by cyclic coordinate descent. lambda < 0 selects the default rule
/// lambda = 0.1 * max_k <G_k, G_Y>.
HsicLassoSolution hsic_lasso(const DataMatrix& data, const ColumnSelector& output_cols,
                             double lambda = -1.0,
                             const KernelSpec& kernel_x = KernelSpec::gaussian(),
                             const KernelSpec& kernel_y = KernelSpec::gaussian());

/// Solver core on precomputed inner products: minimize
/// 0.5 * yy - h . alpha + 0.5 * alpha' H alpha + lambda * sum(alpha), alpha >= 0.
HsicLassoSolution nonneg_lasso_cd(const Matrix& H, const std::vector<double>& h, double lambda,
                                  double yy = 1.0);

/// Max KKT violation of a candidate solution of the core problem.
double nonneg_lasso_kkt(const Matrix& H, const std::vector<double>& h, double lambda,
                        const std::vector<double>& alpha);

struct ScreeningMethod {
    enum class Kind { max_relevance, mrmr, iterative_hsic, hsic_lasso };
    Kind kind = Kind::hsic_lasso;
    ScreenMeasure measure = ScreenMeasure::hsic;
    std::size_t m = 5;          // max_relevance membership cut / mrmr size
    ThresholdPolicy policy;     // iterative_hsic
    std::size_t max_size = 0;   // iterative_hsic; 0 means p
    double lambda = -1.0;       // hsic_lasso; <0 selects the default rule
};

ScreeningResult run_screening(const DataMatrix& data, const ColumnSelector& output_cols,
                              const ScreeningMethod& method);

/// Fraction of B bootstrap resamples (rows drawn with replacement) in which
/// each input is selected. hsic_lasso counts alpha_k > 1e-8; the other
/// methods count membership in the selected set.
std::vector<double> bootstrap_selection(const DataMatrix& data, const ColumnSelector& output_cols,
                                        const ScreeningMethod& method, std::size_t B,
                                        RngSeed seed);

/// Input columns = all columns not in output_cols, in ascending order.
ColumnSelector input_complement(const DataMatrix& data, const ColumnSelector& output_cols);

}  // namespace dmsens
