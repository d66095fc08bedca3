#pragma once

#include <vector>

#include "dmsens/data_matrix.hpp"

namespace dmsens {

/// Paired designs for pick-and-freeze estimation: x_frozen[k] shares column k
/// with x_base bit-exactly and redraws every other column independently.
struct PickFreezeDesign {
    DataMatrix x_base;
    std::vector<DataMatrix> x_frozen;  // one per input column
    RngSeed seed = 0;
};

PickFreezeDesign build_pick_freeze(const std::vector<double>& lows,
                                   const std::vector<double>& highs, std::size_t n,
                                   RngSeed seed);

/// Complementary copy: shares every column except k, which is redrawn.
/// Feeding its outputs to total_effect_pf gives the total-effect index.
DataMatrix complement_copy(const DataMatrix& x_base, const std::vector<double>& lows,
                           const std::vector<double>& highs, std::size_t k, RngSeed seed);

/// Pooled-mean pick-and-freeze first-order index:
/// [mean(y .* y') - m^2] / [mean of pooled squares - m^2] with m the pooled
/// mean of (y, y').
double first_order_pf(const std::vector<double>& y, const std::vector<double>& y_frozen);

/// Total-effect index from a complementary-freeze sample:
/// 1 - Cov(Y, Y_{X^{-k}}) / Var(Y) with the same pooled estimator.
double total_effect_pf(const std::vector<double>& y,
                       const std::vector<double>& y_frozen_all_but_k);

}  // namespace dmsens
