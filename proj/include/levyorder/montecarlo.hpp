#ifndef LEVYORDER_MONTECARLO_HPP
#define LEVYORDER_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "levyorder/generator.hpp"
#include "levyorder/rng.hpp"
#include "levyorder/specs.hpp"

namespace levyorder {

/// Two-sided standard normal quantile: z with P(|N| <= z) = level.
double normal_quantile_two_sided(double level);

struct EstimateCI {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
    double level = 0.99;

    double lo() const { return mean - normal_quantile_two_sided(level) * stderr_; }
    double hi() const { return mean + normal_quantile_two_sided(level) * stderr_; }
};

struct ComplexEstimate {
    EstimateCI real;
    EstimateCI imag;
};

/// Simulated paths recorded at the caller's grid times only.
/// states is path-major: states[(p * n_times + i) * dim + j].
struct PathSet {
    TimeGrid times;
    int n_paths = 0;
    int dim = 1;
    std::vector<double> states;
    std::uint64_t seed = 0;
    int steps_per_unit = 256;
    CutoffMode cutoff_mode = CutoffMode::Truncation;
    int blown_up = 0;  // paths that crossed the blow-up bound

    double state(int p, int time_index, int j) const {
        return states[(static_cast<std::size_t>(p) * times.size() + time_index) * dim + j];
    }
    Vec state_vec(int p, int time_index) const {
        Vec x(dim);
        for (int j = 0; j < dim; ++j) x[j] = state(p, time_index, j);
        return x;
    }
};

struct SimOptions {
    int steps_per_unit = 256;
    int threads = 1;
    double blowup_bound = 1e8;
};

/// One increment of the PII over [s, t] with the triplet frozen at the
/// midpoint: Gaussian part plus compound-Poisson jumps from the discretized
/// measure, compensator subtracted under the truncation cut-off.
Vec sample_pii_increment(const TripletSchedule& schedule, double s, double t, CounterRng& rng);

PathSet simulate_pii(const TripletSchedule& schedule, const TimeGrid& grid, int n_paths,
                     std::uint64_t seed, const SimOptions& opts = {});

/// Explicit Euler for dX = Phi(X_{t-}, t) dL: Phi at the left endpoint.
PathSet simulate_sde(const LevyDiffusionSpec& sde, const Vec& x0, const TimeGrid& grid,
                     int n_paths, std::uint64_t seed, const SimOptions& opts = {});

PathSet simulate(const ProcessSpec& spec, const TimeGrid& grid, int n_paths,
                 std::uint64_t seed, const SimOptions& opts = {});

/// Sample mean and stderr of f over the states at grid index time_index.
/// Constant samples give stderr 0 exactly. Throws on non-finite f values.
EstimateCI estimate_expectation(const PathSet& paths, int time_index, const TestFunction& f,
                                double level = 0.99);
EstimateCI estimate_expectation(const PathSet& paths, double t, const TestFunction& f,
                                double level = 0.99);

/// -(E e^{i<X_{t+h}-x, xi>} - 1)/h, the difference quotient of the
/// probabilistic symbol. xi = 0 returns exactly (0, 0) with zero stderr.
ComplexEstimate symbol_estimate(const ProcessSpec& spec, double t, const Vec& x, const Vec& xi,
                                double h, int n_paths, std::uint64_t seed,
                                const SimOptions& opts = {});

/// Flat little-endian doubles plus a JSON sidecar (shape, seed, spec hash).
void save_pathset(const PathSet& paths, const std::string& data_path,
                  const std::string& sidecar_path, const std::string& spec_hash);
PathSet load_pathset(const std::string& data_path, const std::string& sidecar_path);

}  // namespace levyorder

#endif
