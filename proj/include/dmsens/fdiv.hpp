#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dmsens/data_matrix.hpp"

namespace dmsens {

/// Convex generator f with f(1) = 0; each choice fixes one Csiszar
/// f-divergence.
enum class FChoice {
    kl_neg_log,       // f(t) = -ln t
    kl_tlogt,         // f(t) = t ln t
    hellinger,        // f(t) = (sqrt t - 1)^2
    total_variation,  // f(t) = |t - 1|
    pearson_chi2,     // f(t) = (t - 1)^2
    neyman_chi2,      // f(t) = (1 - t^2) / t
};

const std::vector<FChoice>& all_fchoices();
std::string fchoice_name(FChoice choice);
double fchoice_eval(FChoice choice, double t);

/// Estimate of the density ratio r(x, y) = p_XY(x,y) / (p_X(x) p_Y(y)),
/// floored away from zero so f(1/r) stays finite.
struct RatioEstimate {
    std::function<double(double, double)> evaluator;
    double floor = 1e-6;

    double operator()(double x, double y) const {
        double r = evaluator(x, y);
        return r < floor ? floor : r;
    }

    static RatioEstimate constant_one() {
        return RatioEstimate{[](double, double) { return 1.0; }, 1e-6};
    }
};

/// Gaussian-product KDE ratio estimator for scalar x, y. Marginal bandwidths
/// follow the 1-D normal-reference rule, the joint estimate uses a diagonal
/// 2-D bandwidth. Throws DegenerateSampleError when a coordinate has zero
/// variance. Requires n >= 10.
RatioEstimate kde_ratio(const std::vector<double>& xs, const std::vector<double>& ys);

/// Plug-in f-divergence sensitivity index: mean over sample points of
/// f(1 / r_hat(x_i, y_i)), clamped to 0 within -1e-9.
double fdiv_index(const std::vector<double>& xs, const std::vector<double>& ys, FChoice choice);
double fdiv_index_with(const RatioEstimate& ratio, const std::vector<double>& xs,
                       const std::vector<double>& ys, FChoice choice);

/// Kraskov k-nearest-neighbor mutual information estimate (max-norm
/// neighborhoods, digamma corrections). May be slightly negative; not
/// clamped. Ties are broken by a 1e-10 * range additive jitter drawn from
/// `seed`.
double ksg_mi(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t k,
              RngSeed seed = 0x6b7367u);

/// Squared-loss mutual information: the Neyman chi^2 member of the family.
double smi_index(const std::vector<double>& xs, const std::vector<double>& ys);

namespace detail {
double digamma(double x);
}

}  // namespace dmsens
