#include "dmsens/sobol.hpp"

#include <cmath>

namespace dmsens {

PickFreezeDesign build_pick_freeze(const std::vector<double>& lows,
                                   const std::vector<double>& highs, std::size_t n,
                                   RngSeed seed) {
    PickFreezeDesign design;
    design.seed = seed;
    design.x_base = sample_uniform(lows, highs, n, derive_stream(seed, 0));
    std::size_t p = lows.size();
    design.x_frozen.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
        DataMatrix fresh = sample_uniform(lows, highs, n, derive_stream(seed, k + 1));
        Matrix values = fresh.values();
        for (std::size_t i = 0; i < n; ++i) values(i, k) = design.x_base(i, k);
        design.x_frozen.push_back(DataMatrix::from_values(std::move(values)));
    }
    return design;
}

DataMatrix complement_copy(const DataMatrix& x_base, const std::vector<double>& lows,
                           const std::vector<double>& highs, std::size_t k, RngSeed seed) {
    std::size_t n = x_base.n_rows();
    std::size_t p = x_base.n_cols();
    if (k >= p) throw Error("complement_copy: column index out of range");
    if (lows.size() != p || highs.size() != p)
        throw InvalidBoundsError("complement_copy: bounds length mismatch");
    Matrix values = x_base.values();
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, i);
        values(i, k) = rng.next_uniform(lows[k], highs[k]);
    }
    return DataMatrix::from_values(std::move(values));
}

namespace {

struct PooledStats {
    double cov = 0.0;  // mean(y .* y') - m^2
    double var = 0.0;  // pooled second moment - m^2
};

PooledStats pooled_pick_freeze(const std::vector<double>& y, const std::vector<double>& yf,
                               const char* what) {
    if (y.size() != yf.size())
        throw SizeMismatchError(std::string(what) + ": paired samples differ in length");
    std::size_t n = y.size();
    if (n < 2) throw SizeMismatchError(std::string(what) + " requires n >= 2");
    double nn = static_cast<double>(n);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += 0.5 * (y[i] + yf[i]);
    m /= nn;
    PooledStats out;
    double prod = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prod += y[i] * yf[i];
        sq += 0.5 * (y[i] * y[i] + yf[i] * yf[i]);
    }
    out.cov = prod / nn - m * m;
    out.var = sq / nn - m * m;
    if (!(out.var > 0.0)) throw ZeroVarianceError(std::string(what) + ": output has zero variance");
    return out;
}

}  // namespace

double first_order_pf(const std::vector<double>& y, const std::vector<double>& y_frozen) {
    PooledStats s = pooled_pick_freeze(y, y_frozen, "first_order_pf");
    return s.cov / s.var;
}

double total_effect_pf(const std::vector<double>& y,
                       const std::vector<double>& y_frozen_all_but_k) {
    PooledStats s = pooled_pick_freeze(y, y_frozen_all_but_k, "total_effect_pf");
    return 1.0 - s.cov / s.var;
}

}  // namespace dmsens
