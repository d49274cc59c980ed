#ifndef LEVYORDER_VERIFY_HPP
#define LEVYORDER_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "levyorder/montecarlo.hpp"
#include "levyorder/orders.hpp"
#include "levyorder/spectral.hpp"

namespace levyorder {

struct DominanceViolation {
    double s = 0.0;
    Vec x;
    int member = -1;
    double margin = 0.0;
};

struct DominanceReport {
    std::size_t checked = 0;
    std::vector<DominanceViolation> violations;
    double min_margin = 0.0;
    Vec min_margin_x;
    double min_margin_s = 0.0;
    int min_margin_member = -1;
};

/// Scans B_s f(x) - A_s f(x) >= -tol over the product grid; violations are
/// exactly the triples below -tol.
DominanceReport check_generator_dominance(const ProcessSpec& a, const ProcessSpec& b,
                                          const TestFamily& family,
                                          const std::vector<double>& s_grid,
                                          const std::vector<Vec>& x_grid, double tol = 1e-9);

enum class Verdict { supported, violated, inconclusive };
std::string to_string(Verdict v);

struct MemberVerdict {
    std::string member;
    EstimateCI lhs;     // E f(X_t) under spec A
    EstimateCI rhs;     // E f(Y_t) under spec B
    EstimateCI diff;    // paired rhs - lhs (common random numbers)
    Verdict verdict = Verdict::inconclusive;
    double witness_x = 0.0;  // spectral mode: x attaining the margin
};

struct OrderReport {
    std::vector<MemberVerdict> members;
    Verdict overall = Verdict::inconclusive;
    std::string mode;  // "mc" or "spectral"
    double margin_tol = 1e-4;
};

/// Paired Monte Carlo test of E f(X_t) <= E f(Y_t) for each family member.
/// violated <=> upper CI bound of the paired difference < 0;
/// supported <=> lower bound > -margin_tol; else inconclusive.
OrderReport verify_order_mc(const ProcessSpec& a, const ProcessSpec& b, const TestFamily& family,
                            double t, int n_paths, std::uint64_t seed, double level = 0.99,
                            const SimOptions& opts = {}, double margin_tol = 1e-4);

/// Deterministic grid check of (T_{s,t}f - S_{s,t}f)(x) >= -tol for 1-D PII
/// pairs, evaluated spectrally inside |x - center| <= eval_window.
OrderReport verify_order_spectral(const TripletSchedule& a, const TripletSchedule& b,
                                  const TestFamily& family, double s, double t,
                                  const GridSpec& grid, double tol = 1e-7,
                                  double eval_window = 5.0);

/// sup_x |(T_{s,t}f - S_{s,t}f)(x) - int_s^t T_{s,r}(B_r - A_r)S_{r,t}f(x) dr|
/// with the r-integral on r_nodes/2 two-point Gauss-Legendre panels and all
/// operators composed in Fourier space.
double representation_residual(const TripletSchedule& a, const TripletSchedule& b,
                               const GridFunction& f, double s, double t, int r_nodes,
                               double eval_window = 5.0);

/// sup_x |(T_{s,t+h}f - T_{s,t}f)/h - T_{s,t} A_t f|.
double forward_equation_residual(const TripletSchedule& sched, const GridFunction& f, double s,
                                 double t, double h, double eval_window = 5.0);

/// sup_x |(T_{s+h,t}f - T_{s,t}f)/h + A_s T_{s,t}f|.
double backward_equation_residual(const TripletSchedule& sched, const GridFunction& f, double s,
                                  double t, double h, double eval_window = 5.0);

/// Computes S_{s,t}f spectrally and probes membership of the image in the
/// member's own tag class by grid finite differences. PII images must pass.
std::vector<bool> monotonicity_probe(const TripletSchedule& sched, const TestFamily& family,
                                     double s, double t, const GridSpec& grid,
                                     double eval_window = 5.0, double tol = 1e-6);

/// Finite measure as a weighted sample; integrals are weighted sums.
struct WeightedMeasure {
    std::vector<Vec> points;
    std::vector<double> weights;

    double total_mass() const {
        double m = 0.0;
        for (double w : weights) m += w;
        return m;
    }
    static WeightedMeasure uniform01(int n_quad);   // U[0,1] by Gauss-Legendre
    static WeightedMeasure std_normal(int n_quad);  // N(0,1) on [-10,10]
};

/// sup over y_grid of (1+|y|)^{-rho/p} (int |f(x+y)|^p dnu(x))^{1/p}.
double modified_lp_norm(const std::function<double(const Vec&)>& f, const WeightedMeasure& nu,
                        double p, double rho, const std::vector<Vec>& y_grid);

/// Truncated-sup estimate of K*: sup over y_grid of
/// (1+|y|)^{-1} (int |k(y, y+z)|^2 dnu(z))^{1/2}.
double kernel_condition_K(const std::function<double(const Vec&, const Vec&)>& k,
                          const WeightedMeasure& nu, const std::vector<Vec>& y_grid);

nlohmann::json to_json(const EstimateCI& ci);
nlohmann::json to_json(const DominanceReport& rep);
nlohmann::json to_json(const OrderReport& rep);
nlohmann::json to_json(const ConditionReport& rep);

/// One row per member: member,verdict,margin,ci_low,ci_high.
void export_order_csv(const OrderReport& rep, const std::string& path);

}  // namespace levyorder

#endif
