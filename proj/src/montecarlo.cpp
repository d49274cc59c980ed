#include "levyorder/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace levyorder {

double normal_quantile_two_sided(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("normal_quantile_two_sided: level outside (0,1)");
    // Acklam's rational approximation to the inverse normal CDF.
    const double p = 0.5 * (1.0 + level);
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    double q, r, z;
    if (p < 0.02425) {
        q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 0.97575) {
        q = p - 0.5;
        r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return z;
}

namespace {

// Sampling recipe for one frozen substep.
struct StepPlan {
    double dt = 0.0;
    double sqdt = 0.0;
    Vec drift;          // (b_m - jump compensator) * dt
    Mat gauss_factor;   // L with L L^T = sigma_m; empty when sigma = 0
    bool has_gauss = false;
    double lambda = 0.0;            // total discretized jump rate
    std::vector<Vec> jump_locs;
    std::vector<double> jump_cdf;   // cumulative probabilities, last = 1
    int record_index = -1;          // grid index to record after this step
};

StepPlan make_plan(const FrozenTriplet& trip, double dt) {
    StepPlan plan;
    plan.dt = dt;
    plan.sqdt = std::sqrt(dt);
    Vec comp = Vec::Zero(trip.b.size());
    std::vector<double> masses;
    trip.levy.for_each_mass([&](const Vec& y, double m) {
        plan.jump_locs.push_back(y);
        masses.push_back(m);
        plan.lambda += m;
        comp += m * cutoff(y, trip.cutoff_mode);
    });
    plan.drift = (trip.b - comp) * dt;
    if (plan.lambda > 0.0) {
        plan.jump_cdf.resize(masses.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            acc += masses[i] / plan.lambda;
            plan.jump_cdf[i] = acc;
        }
        plan.jump_cdf.back() = 1.0;
    }
    if (trip.sigma.cwiseAbs().maxCoeff() > 0.0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (trip.sigma + trip.sigma.transpose()));
        const Vec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        plan.gauss_factor = es.eigenvectors() * lam.asDiagonal();
        plan.has_gauss = true;
    }
    return plan;
}

// Draw order is fixed (d normals, Poisson count, per-jump uniform) so that
// two specs of equal dimension consume the stream identically: the
// common-random-numbers pairing contract.
Vec sample_step(const StepPlan& plan, int dim, CounterRng& rng) {
    Vec z(dim);
    for (int j = 0; j < dim; ++j) z[j] = rng.normal();
    Vec inc = plan.drift;
    if (plan.has_gauss) inc += plan.sqdt * (plan.gauss_factor * z);
    if (plan.lambda > 0.0) {
        const int k = rng.poisson(plan.lambda * plan.dt);
        for (int i = 0; i < k; ++i) {
            const double u = rng.uniform();
            const std::size_t idx = std::lower_bound(plan.jump_cdf.begin(), plan.jump_cdf.end(), u) -
                                    plan.jump_cdf.begin();
            inc += plan.jump_locs[std::min(idx, plan.jump_locs.size() - 1)];
        }
    }
    return inc;
}

// Substep layout over a window [t0, t1] at a given rate; t_left per step
// is needed by the SDE's left-endpoint Phi evaluation.
struct StepLayout {
    std::vector<StepPlan> plans;
    std::vector<double> t_left;
};

StepLayout layout_pii(const TripletSchedule& sched, const TimeGrid& grid, int steps_per_unit) {
    StepLayout out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i], t1 = grid[i + 1];
        const int n_sub = std::max(1, static_cast<int>(std::ceil((t1 - t0) * steps_per_unit - 1e-12)));
        for (int k = 0; k < n_sub; ++k) {
            const double u0 = t0 + (t1 - t0) * k / n_sub;
            const double u1 = t0 + (t1 - t0) * (k + 1) / n_sub;
            StepPlan plan = make_plan(freeze(sched, 0.5 * (u0 + u1)), u1 - u0);
            plan.record_index = (k == n_sub - 1) ? static_cast<int>(i + 1) : -1;
            out.plans.push_back(std::move(plan));
            out.t_left.push_back(u0);
        }
    }
    return out;
}

StepLayout layout_driver(const HomogeneousTriplet& driver, CutoffMode mode, const TimeGrid& grid,
                         int steps_per_unit) {
    TripletSchedule sched = TripletSchedule::constant(driver.b, driver.sigma, driver.levy,
                                                      grid.back(), mode);
    return layout_pii(sched, grid, steps_per_unit);
}

template <class StepFn>
void run_paths(int n_paths, int threads, StepFn&& step_path) {
    threads = std::max(1, threads);
    if (threads == 1 || n_paths < 2 * threads) {
        for (int p = 0; p < n_paths; ++p) step_path(p);
        return;
    }
    std::vector<std::thread> pool;
    const int block = (n_paths + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * block;
        const int hi = std::min(n_paths, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &step_path]() {
            for (int p = lo; p < hi; ++p) step_path(p);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

Vec sample_pii_increment(const TripletSchedule& schedule, double s, double t, CounterRng& rng) {
    if (!(t > s)) throw std::invalid_argument("sample_pii_increment: need t > s");
    const StepPlan plan = make_plan(freeze(schedule, 0.5 * (s + t)), t - s);
    return sample_step(plan, schedule.dimension, rng);
}

PathSet simulate_pii(const TripletSchedule& schedule, const TimeGrid& grid, int n_paths,
                     std::uint64_t seed, const SimOptions& opts) {
    const int dim = schedule.dimension;
    const StepLayout layout = layout_pii(schedule, grid, opts.steps_per_unit);
    PathSet ps;
    ps.times = grid;
    ps.n_paths = n_paths;
    ps.dim = dim;
    ps.seed = seed;
    ps.steps_per_unit = opts.steps_per_unit;
    ps.cutoff_mode = schedule.cutoff_mode;
    ps.states.assign(static_cast<std::size_t>(n_paths) * grid.size() * dim, 0.0);

    auto step_path = [&](int p) {
        Vec x = Vec::Zero(dim);
        const std::size_t base = static_cast<std::size_t>(p) * grid.size() * dim;
        for (int j = 0; j < dim; ++j) ps.states[base + j] = x[j];
        for (std::size_t g = 0; g < layout.plans.size(); ++g) {
            CounterRng rng(seed, static_cast<std::uint64_t>(p), g);
            x += sample_step(layout.plans[g], dim, rng);
            const int rec = layout.plans[g].record_index;
            if (rec >= 0)
                for (int j = 0; j < dim; ++j)
                    ps.states[base + static_cast<std::size_t>(rec) * dim + j] = x[j];
        }
    };
    run_paths(n_paths, opts.threads, step_path);
    return ps;
}

PathSet simulate_sde(const LevyDiffusionSpec& sde, const Vec& x0, const TimeGrid& grid,
                     int n_paths, std::uint64_t seed, const SimOptions& opts) {
    const int dim = sde.dimension;
    const StepLayout layout = layout_driver(sde.driver, sde.cutoff_mode, grid, opts.steps_per_unit);
    PathSet ps;
    ps.times = grid;
    ps.n_paths = n_paths;
    ps.dim = dim;
    ps.seed = seed;
    ps.steps_per_unit = opts.steps_per_unit;
    ps.cutoff_mode = sde.cutoff_mode;
    ps.states.assign(static_cast<std::size_t>(n_paths) * grid.size() * dim, 0.0);
    std::vector<char> blown(n_paths, 0);

    auto step_path = [&](int p) {
        Vec x = x0;
        bool frozen = false;
        const std::size_t base = static_cast<std::size_t>(p) * grid.size() * dim;
        for (int j = 0; j < dim; ++j) ps.states[base + j] = x[j];
        for (std::size_t g = 0; g < layout.plans.size(); ++g) {
            CounterRng rng(seed, static_cast<std::uint64_t>(p), g);
            const Vec dl = sample_step(layout.plans[g], dim, rng);
            if (!frozen) {
                x += sde.phi.phi(x, layout.t_left[g]) * dl;
                if (x.norm() > opts.blowup_bound) {
                    // Freeze the path at the crossing so states stay finite.
                    frozen = true;
                    blown[p] = 1;
                }
            }
            const int rec = layout.plans[g].record_index;
            if (rec >= 0)
                for (int j = 0; j < dim; ++j)
                    ps.states[base + static_cast<std::size_t>(rec) * dim + j] = x[j];
        }
    };
    run_paths(n_paths, opts.threads, step_path);
    for (int p = 0; p < n_paths; ++p) ps.blown_up += blown[p];
    return ps;
}

PathSet simulate(const ProcessSpec& spec, const TimeGrid& grid, int n_paths, std::uint64_t seed,
                 const SimOptions& opts) {
    if (spec.is_pii()) {
        PathSet ps = simulate_pii(spec.pii(), grid, n_paths, seed, opts);
        // Point-mass initial laws away from 0 shift every recorded state.
        if (spec.initial_law.is_point_mass() && !spec.initial_law.support[0].isZero(0.0)) {
            const Vec& x0 = spec.initial_law.support[0];
            for (std::size_t i = 0; i < ps.states.size(); ++i)
                ps.states[i] += x0[i % ps.dim];
        }
        return ps;
    }
    const Vec x0 = spec.initial_law.is_point_mass() ? spec.initial_law.support[0]
                                                    : Vec(Vec::Zero(spec.dimension()));
    return simulate_sde(spec.sde(), x0, grid, n_paths, seed, opts);
}

EstimateCI estimate_expectation(const PathSet& paths, int time_index, const TestFunction& f,
                                double level) {
    if (time_index < 0 || time_index >= static_cast<int>(paths.times.size()))
        throw std::invalid_argument("estimate_expectation: time index out of range");
    const std::size_t n = static_cast<std::size_t>(paths.n_paths);
    double sum = 0.0, sumsq = 0.0;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < paths.n_paths; ++p) {
        const double v = f.value(paths.state_vec(p, time_index));
        if (!std::isfinite(v)) {
            throw std::runtime_error("estimate_expectation: non-finite value at path " +
                                     std::to_string(p));
        }
        sum += v;
        sumsq += v * v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    EstimateCI ci;
    ci.n = n;
    ci.level = level;
    ci.mean = sum / static_cast<double>(n);
    if (vmin == vmax) {
        // Constant integrand: exact (c, 0).
        ci.mean = vmin;
        ci.stderr_ = 0.0;
        return ci;
    }
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - ci.mean * ci.mean);
    ci.stderr_ = std::sqrt(var / static_cast<double>(n > 1 ? n - 1 : 1));
    return ci;
}

EstimateCI estimate_expectation(const PathSet& paths, double t, const TestFunction& f,
                                double level) {
    const auto& pts = paths.times.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (std::abs(pts[i] - t) <= 1e-12)
            return estimate_expectation(paths, static_cast<int>(i), f, level);
    throw std::invalid_argument("estimate_expectation: t not on the recorded grid");
}

ComplexEstimate symbol_estimate(const ProcessSpec& spec, double t, const Vec& x, const Vec& xi,
                                double h, int n_paths, std::uint64_t seed,
                                const SimOptions& opts) {
    if (!(h > 0.0)) throw std::invalid_argument("symbol_estimate: h must be positive");
    ComplexEstimate out;
    out.real.n = out.imag.n = static_cast<std::size_t>(n_paths);
    if (xi.isZero(0.0)) return out;

    const int dim = spec.dimension();
    StepLayout layout;
    if (spec.is_pii()) {
        // Increments of the PII over [t, t+h]; shift the schedule clock.
        const TripletSchedule& s = spec.pii();
        TripletSchedule shifted = s;
        shifted.drift = [&s, t](double u) { return s.drift(t + u); };
        shifted.covariance = [&s, t](double u) { return s.covariance(t + u); };
        shifted.levy = [&s, t](double u) { return s.levy(t + u); };
        layout = layout_pii(shifted, TimeGrid::uniform(h, 1), opts.steps_per_unit);
    } else {
        layout = layout_driver(spec.sde().driver, spec.sde().cutoff_mode, TimeGrid::uniform(h, 1),
                               opts.steps_per_unit);
    }

    const int threads = std::max(1, opts.threads);
    std::vector<double> cs(n_paths), sn(n_paths);
    auto step_path = [&](int p) {
        Vec y = x;
        for (std::size_t g = 0; g < layout.plans.size(); ++g) {
            CounterRng rng(seed, static_cast<std::uint64_t>(p), g);
            const Vec dl = sample_step(layout.plans[g], dim, rng);
            if (spec.is_pii())
                y += dl;
            else
                y += spec.sde().phi.phi(y, t + layout.t_left[g]) * dl;
        }
        const double phase = xi.dot(y - x);
        cs[p] = std::cos(phase);
        sn[p] = std::sin(phase);
    };
    run_paths(n_paths, threads, step_path);

    auto reduce = [n_paths](const std::vector<double>& v) {
        double sum = 0.0, sumsq = 0.0;
        for (double u : v) {
            sum += u;
            sumsq += u * u;
        }
        const double mean = sum / n_paths;
        const double var = std::max(0.0, sumsq / n_paths - mean * mean);
        return std::pair<double, double>(mean, std::sqrt(var / std::max(1, n_paths - 1)));
    };
    const auto [mc, sc] = reduce(cs);
    const auto [ms, ss] = reduce(sn);
    out.real.mean = -(mc - 1.0) / h;
    out.real.stderr_ = sc / h;
    out.imag.mean = -ms / h;
    out.imag.stderr_ = ss / h;
    return out;
}

void save_pathset(const PathSet& paths, const std::string& data_path,
                  const std::string& sidecar_path, const std::string& spec_hash) {
    std::ofstream data(data_path, std::ios::binary);
    if (!data) throw std::runtime_error("save_pathset: cannot open " + data_path);
    data.write(reinterpret_cast<const char*>(paths.states.data()),
               static_cast<std::streamsize>(paths.states.size() * sizeof(double)));

    nlohmann::json side;
    side["n_paths"] = paths.n_paths;
    side["n_times"] = paths.times.size();
    side["dim"] = paths.dim;
    side["times"] = paths.times.points();
    side["seed"] = paths.seed;
    side["steps_per_unit"] = paths.steps_per_unit;
    side["cutoff_mode"] = paths.cutoff_mode == CutoffMode::Truncation ? "truncation" : "identity";
    side["blown_up"] = paths.blown_up;
    side["spec_hash"] = spec_hash;
    std::ofstream sc(sidecar_path);
    if (!sc) throw std::runtime_error("save_pathset: cannot open " + sidecar_path);
    sc << side.dump(2) << "\n";
}

PathSet load_pathset(const std::string& data_path, const std::string& sidecar_path) {
    std::ifstream sc(sidecar_path);
    if (!sc) throw std::runtime_error("load_pathset: cannot open " + sidecar_path);
    nlohmann::json side = nlohmann::json::parse(sc);
    PathSet ps;
    ps.n_paths = side.at("n_paths").get<int>();
    ps.dim = side.at("dim").get<int>();
    ps.times = TimeGrid(side.at("times").get<std::vector<double>>());
    ps.seed = side.at("seed").get<std::uint64_t>();
    ps.steps_per_unit = side.at("steps_per_unit").get<int>();
    ps.cutoff_mode = side.at("cutoff_mode").get<std::string>() == "identity"
                         ? CutoffMode::Identity
                         : CutoffMode::Truncation;
    ps.blown_up = side.value("blown_up", 0);
    const std::size_t count = static_cast<std::size_t>(ps.n_paths) * ps.times.size() * ps.dim;
    ps.states.resize(count);
    std::ifstream data(data_path, std::ios::binary);
    if (!data) throw std::runtime_error("load_pathset: cannot open " + data_path);
    data.read(reinterpret_cast<char*>(ps.states.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(data.gcount()) != count * sizeof(double))
        throw std::runtime_error("load_pathset: short read from " + data_path);
    return ps;
}

}  // namespace levyorder
