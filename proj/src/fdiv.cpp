#include "dmsens/fdiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace dmsens {

const std::vector<FChoice>& all_fchoices() {
    static const std::vector<FChoice> choices = {
        FChoice::kl_neg_log,      FChoice::kl_tlogt,     FChoice::hellinger,
        FChoice::total_variation, FChoice::pearson_chi2, FChoice::neyman_chi2,
    };
    return choices;
}

std::string fchoice_name(FChoice choice) {
    switch (choice) {
        case FChoice::kl_neg_log: return "kl_neg_log";
        case FChoice::kl_tlogt: return "kl_tlogt";
        case FChoice::hellinger: return "hellinger";
        case FChoice::total_variation: return "total_variation";
        case FChoice::pearson_chi2: return "pearson_chi2";
        case FChoice::neyman_chi2: return "neyman_chi2";
    }
    return "?";
}

double fchoice_eval(FChoice choice, double t) {
    switch (choice) {
        case FChoice::kl_neg_log: return -std::log(t);
        case FChoice::kl_tlogt: return t * std::log(t);
        case FChoice::hellinger: {
            double s = std::sqrt(t) - 1.0;
            return s * s;
        }
        case FChoice::total_variation: return std::fabs(t - 1.0);
        case FChoice::pearson_chi2: {
            double s = t - 1.0;
            return s * s;
        }
        case FChoice::neyman_chi2: return (1.0 - t * t) / t;
    }
    return 0.0;
}

namespace {

double sample_std(const std::vector<double>& v) {
    std::size_t n = v.size();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

/// Normal-reference bandwidth: h = sigma * (4 / ((d + 2) n))^(1 / (d + 4)).
double silverman_bandwidth(double sigma, std::size_t n, std::size_t d) {
    double exponent = 1.0 / (static_cast<double>(d) + 4.0);
    return sigma * std::pow(4.0 / ((static_cast<double>(d) + 2.0) * static_cast<double>(n)),
                            exponent);
}

struct KdeRatioData {
    std::vector<double> xs, ys;
    double hx1, hy1;  // marginal bandwidths (d = 1 rule)
    double hx2, hy2;  // joint bandwidths (d = 2 rule)
};

}  // namespace

RatioEstimate kde_ratio(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw SizeMismatchError("kde_ratio: x and y lengths differ");
    std::size_t n = xs.size();
    if (n < 10) throw DegenerateSampleError("kde_ratio requires n >= 10");
    double sx = sample_std(xs);
    double sy = sample_std(ys);
    if (!(sx > 0.0)) throw DegenerateSampleError("kde_ratio: x sample has zero variance");
    if (!(sy > 0.0)) throw DegenerateSampleError("kde_ratio: y sample has zero variance");

    auto data = std::make_shared<KdeRatioData>();
    data->xs = xs;
    data->ys = ys;
    data->hx1 = silverman_bandwidth(sx, n, 1);
    data->hy1 = silverman_bandwidth(sy, n, 1);
    data->hx2 = silverman_bandwidth(sx, n, 2);
    data->hy2 = silverman_bandwidth(sy, n, 2);

    RatioEstimate est;
    est.floor = 1e-6;
    est.evaluator = [data](double x, double y) {
        std::size_t n = data->xs.size();
        double inv_hx1 = 1.0 / data->hx1, inv_hy1 = 1.0 / data->hy1;
        double inv_hx2 = 1.0 / data->hx2, inv_hy2 = 1.0 / data->hy2;
        double px = 0.0, py = 0.0, pxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ux1 = (x - data->xs[i]) * inv_hx1;
            double uy1 = (y - data->ys[i]) * inv_hy1;
            double ux2 = (x - data->xs[i]) * inv_hx2;
            double uy2 = (y - data->ys[i]) * inv_hy2;
            px += std::exp(-0.5 * ux1 * ux1);
            py += std::exp(-0.5 * uy1 * uy1);
            pxy += std::exp(-0.5 * (ux2 * ux2 + uy2 * uy2));
        }
        const double root_2pi = 2.5066282746310005;
        double nn = static_cast<double>(n);
        px /= nn * data->hx1 * root_2pi;
        py /= nn * data->hy1 * root_2pi;
        pxy /= nn * data->hx2 * data->hy2 * root_2pi * root_2pi;
        double denom = px * py;
        if (!(denom > 0.0)) return 0.0;  // floored by the caller
        return pxy / denom;
    };
    return est;
}

double fdiv_index_with(const RatioEstimate& ratio, const std::vector<double>& xs,
                       const std::vector<double>& ys, FChoice choice) {
    if (xs.size() != ys.size())
        throw SizeMismatchError("fdiv_index: x and y lengths differ");
    std::size_t n = xs.size();
    std::vector<double> terms(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        terms[i] = fchoice_eval(choice, 1.0 / ratio(xs[i], ys[i]));
    }
    double sum = 0.0;
    for (double t : terms) sum += t;
    double value = sum / static_cast<double>(n);
    return (value < 0.0 && value > -1e-9) ? 0.0 : value;
}

double fdiv_index(const std::vector<double>& xs, const std::vector<double>& ys, FChoice choice) {
    return fdiv_index_with(kde_ratio(xs, ys), xs, ys, choice);
}

double smi_index(const std::vector<double>& xs, const std::vector<double>& ys) {
    return fdiv_index(xs, ys, FChoice::neyman_chi2);
}

namespace detail {

double digamma(double x) {
    // Recurrence up to x >= 6, then the asymptotic series.
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
    return result;
}

}  // namespace detail

double ksg_mi(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t k,
              RngSeed seed) {
    if (xs.size() != ys.size()) throw SizeMismatchError("ksg_mi: x and y lengths differ");
    std::size_t n = xs.size();
    if (k < 1 || k >= n) throw BadKError("ksg_mi requires 1 <= k < n");

    // Jitter breaks exact ties; at 1e-10 * range it is far below any real
    // signal scale.
    auto jittered = [&](const std::vector<double>& v, std::uint64_t stream) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        double scale = 1e-10 * std::max(*hi - *lo, 1e-300);
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            Rng rng = make_rng(seed, stream * n + i);
            out[i] = v[i] + scale * (2.0 * rng.next_double() - 1.0);
        }
        return out;
    };
    std::vector<double> x = jittered(xs, 0);
    std::vector<double> y = jittered(ys, 1);

    std::vector<std::size_t> order_x(n), order_y(n);
    for (std::size_t i = 0; i < n; ++i) order_x[i] = order_y[i] = i;
    std::sort(order_x.begin(), order_x.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::sort(order_y.begin(), order_y.end(),
              [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    std::vector<double> sorted_x(n), sorted_y(n);
    for (std::size_t i = 0; i < n; ++i) {
        sorted_x[i] = x[order_x[i]];
        sorted_y[i] = y[order_y[i]];
    }

    std::vector<double> psi_terms(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        // Max-norm distance to the k-th nearest neighbor in the joint space.
        std::vector<double> best(k, std::numeric_limits<double>::infinity());
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = std::max(std::fabs(x[i] - x[j]), std::fabs(y[i] - y[j]));
            if (d < best[k - 1]) {
                best[k - 1] = d;
                for (std::size_t b = k - 1; b > 0 && best[b] < best[b - 1]; --b)
                    std::swap(best[b], best[b - 1]);
            }
        }
        double eps = best[k - 1];
        // Count strictly-closer marginal neighbors via the sorted copies.
        auto count_within = [eps](const std::vector<double>& sorted, double center) {
            auto lo = std::upper_bound(sorted.begin(), sorted.end(), center - eps);
            auto hi = std::lower_bound(sorted.begin(), sorted.end(), center + eps);
            return static_cast<std::size_t>(hi - lo) - 1;  // minus the point itself
        };
        std::size_t nx = count_within(sorted_x, x[i]);
        std::size_t ny = count_within(sorted_y, y[i]);
        psi_terms[i] = detail::digamma(static_cast<double>(nx) + 1.0) +
                       detail::digamma(static_cast<double>(ny) + 1.0);
    }
    double mean_psi = 0.0;
    for (double t : psi_terms) mean_psi += t;
    mean_psi /= static_cast<double>(n);

    return detail::digamma(static_cast<double>(k)) + detail::digamma(static_cast<double>(n)) -
           mean_psi;
}

}  // namespace dmsens
