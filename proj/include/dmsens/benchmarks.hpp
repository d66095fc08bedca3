#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmsens/data_matrix.hpp"

namespace dmsens {

enum class BenchmarkName {
    linkletter_eta1,
    loeppky_eta2,
    ishigami_eta3,
    morris_eta4,
    soblev_eta5,
    synthetic_map,
};

std::string benchmark_name_str(BenchmarkName name);
std::optional<BenchmarkName> parse_benchmark_name(const std::string& s);
std::vector<BenchmarkName> all_benchmark_names();

struct BenchmarkSpec {
    BenchmarkName name = BenchmarkName::linkletter_eta1;
    std::size_t input_dim = 10;
    std::size_t output_dim = 1;

    // morris_eta4: number of influential inputs, integer in [1, 10].
    std::size_t morris_k = 5;
    // soblev_eta5 coefficients; defaults to 1 for the first 8, 0.01 after.
    std::vector<double> b;
    // synthetic_map grid side; output is grid x grid pixels.
    std::size_t grid = 8;
    // When set, outputs are the level-set codes 1{eta(x) > t} (categorical).
    std::optional<double> level_set_threshold;

    static BenchmarkSpec by_name(BenchmarkName name);

    std::vector<double> input_lows() const;
    std::vector<double> input_highs() const;
    void validate() const;
};

/// Vectorized evaluation; output columns are named y1..yq (or "z" for a
/// level-set output).
DataMatrix eval_benchmark(const BenchmarkSpec& spec, const DataMatrix& x);

/// 0/1 codes of 1{y > t} (strict), returned as a categorical column.
DataMatrix level_set_transform(const std::vector<double>& y, double threshold);

/// Per-sample Gaussian-bump field on a g x g unit grid; amplitude, center and
/// width vary smoothly with the first three inputs, the rest are inert.
DataMatrix synthetic_map(const DataMatrix& x, std::size_t grid);

enum class ReferenceTag { paper_formula, oracle_monte_carlo };

struct ReferenceTable {
    BenchmarkName name;
    ReferenceTag tag;
    std::vector<double> first_order;     // one per input
    std::vector<double> total_effect;    // one per input (may equal first_order)
    std::size_t oracle_n = 0;            // 0 for closed-form references
    RngSeed oracle_seed = 0;
};

/// First-order (and total) Sobol reference values per input. linkletter_eta1
/// has a closed form; the other supported names are estimated by a fixed-seed
/// pick-and-freeze oracle at n = 10^6. Throws NoReferenceError for
/// synthetic_map and for soblev_eta5 with a non-default b vector.
ReferenceTable analytical_reference(const BenchmarkSpec& spec);

}  // namespace dmsens
