#ifndef LEVYORDER_CLI_HPP
#define LEVYORDER_CLI_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "levyorder/verify.hpp"

namespace levyorder {

/// Configuration failure carrying the offending field name.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field(field) {}
    std::string field;
};

struct JobConfig {
    int schema_version = 1;
    ProcessSpec spec_a;
    ProcessSpec spec_b;
    OrderTag tag = OrderTag::cx;

    int family_size = 20;
    unsigned family_seed = 1234;
    double family_beta = 0.05;

    std::vector<std::string> stages;  // subset of the known stage names

    // Monte Carlo knobs.
    int n_paths = 100000;
    double t = 1.0;
    std::uint64_t seed = 42;
    double level = 0.99;
    int steps_per_unit = 256;
    double margin_tol = 1e-4;
    int threads = 1;

    // Grids.
    std::vector<double> s_points{0.0, 0.5, 1.0};
    double x_min = -3.0, x_max = 3.0;
    int x_count = 13;
    int spectral_n = 4096;
    double spectral_half_width = 20.0;
    double eval_window = 5.0;

    // Residual knobs.
    int r_nodes = 32;
    double h = 1e-4;

    std::string out_dir = "out";
};

JobConfig parse_job(const nlohmann::json& j);  // throws ConfigError
JobConfig load_job(const std::string& path);

/// Spec block parser, shared by the density/symbol subcommands.
ProcessSpec parse_process_spec(const nlohmann::json& j, const std::string& field);

struct JobResult {
    int exit_code = 3;
    nlohmann::json summary;
};

/// Runs the configured stages, writing one JSON report per stage plus
/// summary.json and plot CSVs into out_dir. Timestamps go to run_info.json
/// only, so report bytes are a pure function of (config, seed).
/// Exit codes: 0 pass, 1 violation, 2 inconclusive, 3 config/runtime error.
JobResult run_job(const JobConfig& cfg);

void emit_margins_vs_s(const std::vector<std::pair<double, double>>& rows,
                       const std::string& path);
void emit_ci_bars(const OrderReport& rep, const std::string& path);
void emit_density_overlay(const GridFunction& a, const GridFunction& b, const std::string& path);

}  // namespace levyorder

#endif
