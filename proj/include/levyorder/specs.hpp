#ifndef LEVYORDER_SPECS_HPP
#define LEVYORDER_SPECS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levyorder {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Eigenvalue slack for positive-semidefiniteness checks.
inline constexpr double kEpsPsd = 1e-10;

/// Cut-off function chi applied to the jump compensator.
/// Truncation is chi(y) = y * 1_{|y| < 1} (strict inequality at the unit
/// sphere); Identity is chi(y) = y and requires |y| ^ |y|^2 integrability.
enum class CutoffMode { Truncation, Identity };

inline Vec cutoff(const Vec& y, CutoffMode mode) {
    if (mode == CutoffMode::Identity) return y;
    return y.norm() < 1.0 ? y : Vec(Vec::Zero(y.size()));
}

inline double cutoff1d(double y, CutoffMode mode) {
    if (mode == CutoffMode::Identity) return y;
    return std::abs(y) < 1.0 ? y : 0.0;
}

struct Atom {
    Vec location;
    double mass;
};

/// Continuous part of a Levy measure, discretized on a caller-supplied
/// quadrature (truncation box with an inner exclusion around 0). All jump
/// integrals become finite sums over nodes weighted by weight*density.
struct ContinuousPart {
    std::function<double(const Vec&)> density;
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

/// A Levy measure as finite atoms plus an optional quadrature-discretized
/// continuous part. Mass outside the quadrature box is treated as zero.
class LevyMeasureSpec {
public:
    LevyMeasureSpec() = default;
    explicit LevyMeasureSpec(int dimension) : dimension_(dimension) {}

    static LevyMeasureSpec zero(int dimension) { return LevyMeasureSpec(dimension); }

    int dimension() const { return dimension_; }
    bool empty() const { return atoms_.empty() && !continuous_; }

    void add_atom(Vec location, double mass) {
        atoms_.push_back({std::move(location), mass});
    }
    void add_atom(double location, double mass) {
        Vec y(1);
        y[0] = location;
        add_atom(std::move(y), mass);
    }
    void set_continuous(ContinuousPart part) { continuous_ = std::move(part); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<ContinuousPart>& continuous() const { return continuous_; }

    /// Visits every (location, mass) pair of the discretized measure:
    /// atoms exactly, continuous part as weight*density at each node.
    template <class F>
    void for_each_mass(F&& fn) const {
        for (const Atom& a : atoms_) fn(a.location, a.mass);
        if (continuous_) {
            for (std::size_t i = 0; i < continuous_->nodes.size(); ++i) {
                fn(continuous_->nodes[i],
                   continuous_->weights[i] * continuous_->density(continuous_->nodes[i]));
            }
        }
    }

    double total_mass() const {
        double m = 0.0;
        for_each_mass([&](const Vec&, double w) { m += w; });
        return m;
    }

private:
    int dimension_ = 1;
    std::vector<Atom> atoms_;
    std::optional<ContinuousPart> continuous_;
};

struct MomentIntegrals {
    double m_small;  // integral of |y| ^ |y|^2
    double m_big;    // integral of |y|^2 over {|y| >= 1}
};

/// Atoms summed exactly, continuous part by its stored quadrature.
MomentIntegrals moment_integrals(const LevyMeasureSpec& F);

/// Time-dependent Levy characteristics (b_s, sigma_s, F_s) of a PII.
/// Schedules are evaluated on caller-supplied grids; simulation freezes
/// them piecewise-constant at step midpoints.
struct TripletSchedule {
    int dimension = 1;
    std::function<Vec(double)> drift;
    std::function<Mat(double)> covariance;
    std::function<LevyMeasureSpec(double)> levy;
    double horizon = 1.0;
    CutoffMode cutoff_mode = CutoffMode::Truncation;

    static TripletSchedule constant(Vec b, Mat sigma, LevyMeasureSpec F, double horizon,
                                    CutoffMode mode = CutoffMode::Truncation);
    /// 1-D helper: drift b, variance sigma2, jump measure F.
    static TripletSchedule constant1d(double b, double sigma2, LevyMeasureSpec F,
                                      double horizon = 1.0,
                                      CutoffMode mode = CutoffMode::Truncation);
};

/// Triplet frozen at a single time point.
struct FrozenTriplet {
    Vec b;
    Mat sigma;
    LevyMeasureSpec levy;
    CutoffMode cutoff_mode = CutoffMode::Truncation;
};

FrozenTriplet freeze(const TripletSchedule& schedule, double s);

/// SDE coefficient Phi(x, t), assumed bounded by `bound` (C^{1,1}_b).
struct DiffusionCoefficient {
    std::function<Mat(const Vec& x, double t)> phi;
    double bound = 1.0;
    double grad_step = 1e-6;  // finite-difference step for x-derivatives

    static DiffusionCoefficient constant(Mat value);
    static DiffusionCoefficient constant1d(double value);
};

struct HomogeneousTriplet {
    Vec b;
    Mat sigma;
    LevyMeasureSpec levy;
};

/// dX_t = Phi(X_{t-}, t) dL_t with L the homogeneous driver.
struct LevyDiffusionSpec {
    DiffusionCoefficient phi;
    HomogeneousTriplet driver;
    CutoffMode cutoff_mode = CutoffMode::Truncation;
    int dimension = 1;
};

struct InitialLaw {
    std::vector<Vec> support;  // size 1 => point mass; otherwise empirical sample

    bool is_point_mass() const { return support.size() == 1; }
    static InitialLaw point(Vec x0) { return InitialLaw{{std::move(x0)}}; }
    static InitialLaw point1d(double x0) {
        Vec v(1);
        v[0] = x0;
        return point(std::move(v));
    }
    static InitialLaw origin(int dim) { return point(Vec::Zero(dim)); }
};

struct ProcessSpec {
    std::variant<TripletSchedule, LevyDiffusionSpec> process;
    InitialLaw initial_law;

    bool is_pii() const { return std::holds_alternative<TripletSchedule>(process); }
    const TripletSchedule& pii() const { return std::get<TripletSchedule>(process); }
    const LevyDiffusionSpec& sde() const { return std::get<LevyDiffusionSpec>(process); }
    int dimension() const {
        return is_pii() ? pii().dimension : sde().dimension;
    }

    static ProcessSpec from_pii(TripletSchedule schedule);
    static ProcessSpec from_sde(LevyDiffusionSpec sde, Vec x0);
};

/// Strictly increasing times in [0, T], first point 0.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> points);  // throws on invalid input
    static TimeGrid uniform(double T, int n_cells);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double back() const { return points_.back(); }

private:
    std::vector<double> points_{0.0};
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
    double grid_point = 0.0;  // offending time (or probe coordinate) on failure
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Checks the standing assumptions on the validation grid. Failures are
/// reported as data, not thrown.
ValidationReport validate_spec(const ProcessSpec& spec, const TimeGrid& grid);

ValidationReport validate_measure(const LevyMeasureSpec& F);

}  // namespace levyorder

#endif
