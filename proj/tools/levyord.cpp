#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "levyorder/cli.hpp"

namespace {

using namespace levyorder;

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

int cmd_compare(const std::string& config_path, const std::string& stages,
                std::uint64_t seed, bool seed_set, const std::string& out, int threads) {
    JobConfig cfg = load_job(config_path);
    if (!stages.empty()) {
        cfg.stages.clear();
        std::string cur;
        for (char c : stages + ",") {
            if (c == ',') {
                if (!cur.empty()) cfg.stages.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    if (seed_set) cfg.seed = seed;

    const std::string env_out = env_or("LEVYORD_OUT", "");
    if (!out.empty())
        cfg.out_dir = out;
    else if (!env_out.empty())
        cfg.out_dir = env_out;

    const std::string env_threads = env_or("LEVYORD_THREADS", "");
    if (threads > 0)
        cfg.threads = threads;
    else if (!env_threads.empty())
        cfg.threads = std::stoi(env_threads);

    const JobResult res = run_job(cfg);
    std::cout << res.summary.dump(2) << "\n";
    return res.exit_code;
}

int cmd_density(const std::string& config_path, double t) {
    const JobConfig cfg = load_job(config_path);
    if (!cfg.spec_a.is_pii() || cfg.spec_a.dimension() != 1)
        throw ConfigError("pair.a", "density needs a 1-D PII spec");
    const GridSpec grid{0.0, cfg.spectral_half_width, cfg.spectral_n};
    const DensityResult res = density_pii(cfg.spec_a.pii(), 0.0, t, grid);
    if (!res.tail_ok)
        std::cerr << "warning: characteristic function tail " << res.tail_max
                  << " exceeds 1e-12; density may be unreliable\n";
    std::cout << "x,value\n";
    std::cout.precision(17);
    for (int i = 0; i < grid.n; ++i)
        std::cout << grid.x(i) << "," << res.density.values[i] << "\n";
    return 0;
}

int cmd_symbol(const std::string& config_path, double x, double xi, double h) {
    const JobConfig cfg = load_job(config_path);
    Vec xv(1), xiv(1);
    xv[0] = x;
    xiv[0] = xi;
    const SimOptions opts{cfg.steps_per_unit, cfg.threads, 1e8};
    const ComplexEstimate est =
        symbol_estimate(cfg.spec_a, 0.0, xv, xiv, h, cfg.n_paths, cfg.seed, opts);
    nlohmann::json j;
    j["x"] = x;
    j["xi"] = xi;
    j["h"] = h;
    j["real"] = to_json(est.real);
    j["imag"] = to_json(est.imag);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-order comparison of Levy-type processes"};
    app.require_subcommand(1);

    std::string config_path, stages, out;
    std::uint64_t seed = 0;
    int threads = 0;
    double t = 1.0, x = 0.0, xi = 1.0, h = 1e-3;

    auto* compare = app.add_subcommand("compare", "run a comparison job");
    compare->add_option("config", config_path, "job config JSON")->required();
    compare->add_option("--stages", stages, "comma-separated stage subset");
    auto* seed_opt = compare->add_option("--seed", seed, "override the job seed");
    compare->add_option("--out", out, "output directory");
    compare->add_option("--threads", threads, "worker thread count");

    auto* density = app.add_subcommand("density", "transition density of spec a");
    density->add_option("config", config_path, "job config JSON")->required();
    density->add_option("--t", t, "terminal time")->required();

    auto* symbol = app.add_subcommand("symbol", "probabilistic symbol estimate for spec a");
    // "--h" is the step-size flag here, so help keeps only its long form.
    symbol->set_help_flag("--help", "print help");
    symbol->add_option("config", config_path, "job config JSON")->required();
    symbol->add_option("--x", x, "state")->required();
    symbol->add_option("--xi", xi, "frequency")->required();
    symbol->add_option("--h", h, "time step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed())
            return cmd_compare(config_path, stages, seed, seed_opt->count() > 0, out, threads);
        if (density->parsed()) return cmd_density(config_path, t);
        if (symbol->parsed()) return cmd_symbol(config_path, x, xi, h);
    } catch (const levyorder::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
