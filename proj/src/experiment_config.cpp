#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dmsens/experiment.hpp"

namespace dmsens {

using nlohmann::json;

std::string IndexRequest::name() const {
    switch (kind) {
        case Kind::sobol_first_pf: return "sobol_first_pf";
        case Kind::sobol_total_pf: return "sobol_total_pf";
        case Kind::fdiv: return "fdiv." + fchoice_name(fdiv_choice);
        case Kind::mi_ksg: return "mi_ksg";
        case Kind::dcor: return "dcor";
        case Kind::dcor_pf: return "dcor_pf";
        case Kind::hsic: return "hsic";
        case Kind::hsic_pf: return "hsic_pf";
    }
    return "?";
}

std::vector<std::string> valid_index_names() {
    std::vector<std::string> names = {"sobol_first_pf", "sobol_total_pf", "mi_ksg", "dcor",
                                      "dcor_pf",        "hsic",           "hsic_pf"};
    names.push_back("fdiv");
    for (FChoice c : all_fchoices()) names.push_back("fdiv." + fchoice_name(c));
    return names;
}

namespace {

[[noreturn]] void config_fail(const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

std::optional<FChoice> parse_fchoice(const std::string& s) {
    for (FChoice c : all_fchoices())
        if (fchoice_name(c) == s) return c;
    return std::nullopt;
}

void check_kernel_name(const std::string& field, const std::string& name) {
    if (name != "gaussian" && name != "laplace" && name != "distance_induced")
        config_fail(field, "unknown kernel '" + name +
                               "'; valid: gaussian, laplace, distance_induced");
}

void parse_index_entry(const json& entry, std::vector<IndexRequest>& out) {
    auto push_simple = [&](IndexRequest::Kind kind) {
        IndexRequest req;
        req.kind = kind;
        out.push_back(req);
    };
    auto from_name = [&](const std::string& name) {
        if (name == "sobol_first_pf") return push_simple(IndexRequest::Kind::sobol_first_pf);
        if (name == "sobol_total_pf") return push_simple(IndexRequest::Kind::sobol_total_pf);
        if (name == "mi_ksg") return push_simple(IndexRequest::Kind::mi_ksg);
        if (name == "dcor") return push_simple(IndexRequest::Kind::dcor);
        if (name == "dcor_pf") return push_simple(IndexRequest::Kind::dcor_pf);
        if (name == "hsic") return push_simple(IndexRequest::Kind::hsic);
        if (name == "hsic_pf") return push_simple(IndexRequest::Kind::hsic_pf);
        if (name == "fdiv") {
            // Bare "fdiv" expands to all six divergence choices.
            for (FChoice c : all_fchoices()) {
                IndexRequest req;
                req.kind = IndexRequest::Kind::fdiv;
                req.fdiv_choice = c;
                out.push_back(req);
            }
            return;
        }
        if (name.rfind("fdiv.", 0) == 0) {
            auto choice = parse_fchoice(name.substr(5));
            if (!choice)
                config_fail("indices", "unknown f-divergence choice '" + name.substr(5) +
                                           "'; valid names: " + join(valid_index_names()));
            IndexRequest req;
            req.kind = IndexRequest::Kind::fdiv;
            req.fdiv_choice = *choice;
            out.push_back(req);
            return;
        }
        config_fail("indices",
                    "unknown index name '" + name + "'; valid names: " + join(valid_index_names()));
    };

    if (entry.is_string()) {
        from_name(entry.get<std::string>());
        return;
    }
    if (!entry.is_object() || entry.size() != 1)
        config_fail("indices", "each entry must be an index name or a one-key object");
    const std::string key = entry.begin().key();
    const json& body = entry.begin().value();
    if (key == "fdiv") {
        if (body.is_string()) {
            from_name("fdiv." + body.get<std::string>());
            return;
        }
        if (body.is_array()) {
            for (const json& c : body) {
                if (!c.is_string()) config_fail("indices.fdiv", "choices must be strings");
                from_name("fdiv." + c.get<std::string>());
            }
            return;
        }
        config_fail("indices.fdiv", "expected a choice name or an array of choice names");
    }
    if (key == "hsic" || key == "hsic_pf") {
        IndexRequest req;
        req.kind = key == "hsic" ? IndexRequest::Kind::hsic : IndexRequest::Kind::hsic_pf;
        if (!body.is_object()) config_fail("indices." + key, "expected an object of options");
        for (auto it = body.begin(); it != body.end(); ++it) {
            if (it.key() == "kernel_x" && key == "hsic")
                req.kernel_x = it.value().get<std::string>();
            else if (it.key() == "kernel_y" || it.key() == "kernel")
                req.kernel_y = it.value().get<std::string>();
            else
                config_fail("indices." + key, "unknown option '" + it.key() + "'");
        }
        check_kernel_name("indices." + key, req.kernel_x);
        check_kernel_name("indices." + key, req.kernel_y);
        out.push_back(req);
        return;
    }
    if (key == "mi_ksg") {
        IndexRequest req;
        req.kind = IndexRequest::Kind::mi_ksg;
        if (body.is_object() && body.contains("k")) {
            if (!body["k"].is_number_unsigned() || body["k"].get<std::size_t>() < 1)
                config_fail("indices.mi_ksg.k", "k must be a positive integer");
            req.ksg_k = body["k"].get<std::size_t>();
        }
        out.push_back(req);
        return;
    }
    config_fail("indices",
                "unknown index name '" + key + "'; valid names: " + join(valid_index_names()));
}

BenchmarkSpec parse_benchmark(const json& j) {
    if (!j.is_object()) config_fail("source.benchmark", "expected an object");
    if (!j.contains("name") || !j["name"].is_string())
        config_fail("source.benchmark.name", "required string");
    std::string name = j["name"].get<std::string>();
    auto parsed = parse_benchmark_name(name);
    if (!parsed) {
        std::vector<std::string> names;
        for (BenchmarkName b : all_benchmark_names()) names.push_back(benchmark_name_str(b));
        config_fail("source.benchmark.name",
                    "unknown benchmark '" + name + "'; valid: " + join(names));
    }
    BenchmarkSpec spec = BenchmarkSpec::by_name(*parsed);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "name") continue;
        if (key == "input_dim") {
            spec.input_dim = it.value().get<std::size_t>();
        } else if (key == "k") {
            spec.morris_k = it.value().get<std::size_t>();
        } else if (key == "b") {
            spec.b = it.value().get<std::vector<double>>();
        } else if (key == "grid") {
            spec.grid = it.value().get<std::size_t>();
            spec.output_dim = spec.grid * spec.grid;
        } else if (key == "level_set_threshold") {
            spec.level_set_threshold = it.value().get<double>();
        } else {
            config_fail("source.benchmark", "unknown option '" + key + "'");
        }
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        config_fail("source.benchmark", e.what());
    }
    return spec;
}

void parse_screening(const json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) config_fail("screening", "expected an object");
    if (!j.contains("method") || !j["method"].is_string())
        config_fail("screening.method", "required string");
    ScreeningConfig sc;
    std::string method = j["method"].get<std::string>();
    if (method == "max_relevance")
        sc.method.kind = ScreeningMethod::Kind::max_relevance;
    else if (method == "mrmr")
        sc.method.kind = ScreeningMethod::Kind::mrmr;
    else if (method == "iterative_hsic")
        sc.method.kind = ScreeningMethod::Kind::iterative_hsic;
    else if (method == "hsic_lasso")
        sc.method.kind = ScreeningMethod::Kind::hsic_lasso;
    else
        config_fail("screening.method",
                    "unknown method '" + method +
                        "'; valid: max_relevance, mrmr, iterative_hsic, hsic_lasso");

    sc.method.policy = ThresholdPolicy::permutation_quantile(0.05, 199, 0);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "method") continue;
        if (key == "measure") {
            std::string m = it.value().get<std::string>();
            if (m == "dcor")
                sc.method.measure = ScreenMeasure::dcor;
            else if (m == "hsic")
                sc.method.measure = ScreenMeasure::hsic;
            else if (m == "ksg_mi")
                sc.method.measure = ScreenMeasure::ksg_mi;
            else
                config_fail("screening.measure", "unknown measure '" + m + "'");
        } else if (key == "m") {
            sc.method.m = it.value().get<std::size_t>();
        } else if (key == "lambda") {
            sc.method.lambda = it.value().get<double>();
        } else if (key == "level") {
            sc.method.policy.level = it.value().get<double>();
        } else if (key == "B") {
            sc.method.policy.B = it.value().get<std::size_t>();
        } else if (key == "top_fraction") {
            sc.method.policy = ThresholdPolicy::top_fraction(it.value().get<double>());
        } else if (key == "max_size") {
            sc.method.max_size = it.value().get<std::size_t>();
        } else if (key == "bootstrap_B") {
            sc.bootstrap_B = it.value().get<std::size_t>();
        } else {
            config_fail("screening", "unknown option '" + key + "'");
        }
    }
    cfg.screening = sc;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be a JSON object");

    ExperimentConfig cfg;

    if (!j.contains("source")) config_fail("source", "required");
    const json& source = j["source"];
    if (source.is_object() && source.contains("benchmark")) {
        cfg.is_benchmark = true;
        cfg.benchmark = parse_benchmark(source["benchmark"]);
    } else if (source.is_object() && source.contains("csv")) {
        cfg.is_benchmark = false;
        const json& c = source["csv"];
        if (!c.is_object() || !c.contains("inputs") || !c.contains("outputs"))
            config_fail("source.csv", "requires 'inputs' and 'outputs' file paths");
        cfg.csv_inputs = c["inputs"].get<std::string>();
        cfg.csv_outputs = c["outputs"].get<std::string>();
        if (c.contains("has_header")) cfg.csv_has_header = c["has_header"].get<bool>();
    } else {
        config_fail("source", "must contain either 'benchmark' or 'csv'");
    }

    if (cfg.is_benchmark) {
        if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() < 2)
            config_fail("n", "required integer >= 2 for benchmark sources");
        cfg.n = j["n"].get<std::size_t>();
    } else if (j.contains("n")) {
        cfg.n = j["n"].get<std::size_t>();  // checked against the files later
    }

    if (j.contains("replicates")) {
        if (!j["replicates"].is_number_unsigned() || j["replicates"].get<std::size_t>() < 1)
            config_fail("replicates", "must be an integer >= 1");
        cfg.replicates = j["replicates"].get<std::size_t>();
    }
    if (!cfg.is_benchmark && cfg.replicates != 1)
        config_fail("replicates", "csv sources provide a single fixed sample; replicates must be 1");

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();

    if (!j.contains("indices") || !j["indices"].is_array())
        config_fail("indices", "required array");
    for (const json& entry : j["indices"]) parse_index_entry(entry, cfg.indices);
    if (cfg.indices.empty() && !j.contains("screening"))
        config_fail("indices", "at least one index or a screening block is required");

    for (const IndexRequest& req : cfg.indices) {
        if (req.is_pick_freeze() && !cfg.is_benchmark)
            config_fail("indices", "pick-and-freeze index '" + req.name() +
                                       "' requires benchmark source (fresh model evaluations)");
        if (req.needs_scalar_output() && cfg.is_benchmark && cfg.benchmark.output_dim != 1 &&
            !cfg.benchmark.level_set_threshold)
            config_fail("indices",
                        "index '" + req.name() + "' requires a scalar output");
        if (req.kind == IndexRequest::Kind::fdiv && cfg.is_benchmark &&
            cfg.benchmark.level_set_threshold)
            config_fail("indices", "f-divergence indices need a continuous output, not a level set");
    }

    if (j.contains("screening")) parse_screening(j["screening"], cfg);

    if (j.contains("permutation")) {
        const json& p = j["permutation"];
        if (!p.is_object()) config_fail("permutation", "expected an object");
        PermutationConfig pc;
        if (p.contains("B")) {
            pc.B = p["B"].get<std::size_t>();
            if (pc.B < 1) config_fail("permutation.B", "must be >= 1");
        }
        if (p.contains("level")) {
            pc.level = p["level"].get<double>();
            if (!(pc.level > 0.0 && pc.level < 1.0))
                config_fail("permutation.level", "must lie in (0, 1)");
        }
        cfg.permutation = pc;
    }

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

    static const char* known[] = {"source",   "n",           "replicates", "seed",
                                  "indices",  "screening",   "permutation", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) config_fail(it.key(), "unknown top-level field");
    }

    return cfg;
}

ExperimentConfig validate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str(), path);
}

}  // namespace dmsens
