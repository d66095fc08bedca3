#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmsens/benchmarks.hpp"
#include "dmsens/data_matrix.hpp"
#include "dmsens/fdiv.hpp"
#include "dmsens/screening.hpp"

namespace dmsens {

/// One requested index family.
struct IndexRequest {
    enum class Kind {
        sobol_first_pf,
        sobol_total_pf,
        fdiv,
        mi_ksg,
        dcor,
        dcor_pf,
        hsic,
        hsic_pf,
    };
    Kind kind = Kind::dcor;
    FChoice fdiv_choice = FChoice::kl_neg_log;
    std::string kernel_x = "gaussian";  // hsic: gaussian | laplace | distance_induced
    std::string kernel_y = "gaussian";  // hsic / hsic_pf
    std::size_t ksg_k = 4;

    /// Report key, e.g. "dcor", "fdiv.kl_neg_log".
    std::string name() const;
    bool is_pick_freeze() const {
        return kind == Kind::sobol_first_pf || kind == Kind::sobol_total_pf ||
               kind == Kind::dcor_pf || kind == Kind::hsic_pf;
    }
    bool needs_scalar_output() const {
        return kind == Kind::fdiv || kind == Kind::mi_ksg;
    }
};

std::vector<std::string> valid_index_names();

struct PermutationConfig {
    std::size_t B = 199;
    double level = 0.05;
};

struct ScreeningConfig {
    ScreeningMethod method;
    std::size_t bootstrap_B = 0;  // 0 disables the bootstrap
};

struct ExperimentConfig {
    bool is_benchmark = true;
    BenchmarkSpec benchmark;
    std::string csv_inputs;
    std::string csv_outputs;
    bool csv_has_header = true;

    std::size_t n = 0;
    std::size_t replicates = 1;
    RngSeed seed = 0;
    std::vector<IndexRequest> indices;
    std::optional<ScreeningConfig> screening;
    std::optional<PermutationConfig> permutation;
    std::string output_dir = "out";
};

/// Parse + validate a JSON config file; throws ConfigError with a field-level
/// message. Defaults are filled (gaussian kernels, B=199, level=0.05,
/// replicates=1).
ExperimentConfig validate_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text, const std::string& origin);

/// Canonical JSON text of a resolved config (fixed key order, 17 significant
/// digits). This echo is embedded in results.json and is what the config
/// hash covers.
std::string canonical_config_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct IndexInputReport {
    std::string input_name;
    std::vector<double> values;    // one per replicate
    std::vector<double> null_q95;  // per replicate, empty when not requested
};

struct IndexFamilyReport {
    std::string index_name;
    std::vector<IndexInputReport> inputs;
};

struct ScreeningReplicate {
    std::vector<std::string> selected;
    std::vector<double> scores;
    std::string stop_reason;
};

struct ScreeningReport {
    std::string method_name;
    std::vector<std::string> input_names;
    std::vector<ScreeningReplicate> replicates;
    std::vector<double> selection_rate;                  // per input
    std::vector<std::vector<double>> bootstrap_probs;    // per replicate x input
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<IndexFamilyReport> indices;
    std::optional<ScreeningReport> screening;
    double wall_time_seconds = 0.0;
};

/// Run the configured experiment. When `out_dir_override` is non-empty it
/// replaces config.output_dir. Writes results.json, resolved_config.json,
/// tables/*.csv and plotdata/*.csv under the output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& out_dir_override = "");

/// Compute without touching the filesystem (used by tests).
ExperimentResult compute_experiment(const ExperimentConfig& cfg);

/// Serialize a result to the results.json text (deterministic; the wall_time
/// field is the only run-dependent part).
std::string results_json_text(const ExperimentResult& result);

void write_result_files(const ExperimentResult& result, const std::string& out_dir);

struct SummaryStats {
    double mean = 0.0, sd = 0.0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double whisker_low = 0.0, whisker_high = 0.0;  // Tukey 1.5 IQR fences
};
SummaryStats summarize(const std::vector<double>& values);

}  // namespace dmsens
