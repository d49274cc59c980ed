#ifndef LEVYORDER_ORDERS_HPP
#define LEVYORDER_ORDERS_HPP

#include <string>
#include <vector>

#include "levyorder/generator.hpp"
#include "levyorder/specs.hpp"

namespace levyorder {

/// Finite seeded surrogate for an order-generating function class.
struct TestFamily {
    OrderTag tag;
    std::vector<TestFunction> members;
    unsigned seed = 0;
    double beta = 0.05;  // soft-plus smoothing
};

struct OrderVerdict {
    bool satisfied = true;
    double worst_margin = 0.0;  // min over members of RHS - LHS
    int witness = -1;           // member index attaining worst_margin
};

/// Members drawn from documented parametric pools (smoothed ramps, soft-plus
/// hinges, convex quadratics, coordinatewise products); deterministic in seed.
/// For cx-containing tags, member 0 is the canonical quadratic |x|^2 and
/// member 1 the canonical smoothed hinge h_beta(x_1).
TestFamily make_test_family(OrderTag tag, int dim, int count, unsigned seed, double beta = 0.05);

/// Default probe grid used by the membership probes: a coarse lattice in
/// [-radius, radius]^dim plus random points.
std::vector<Vec> default_probe_grid(int dim, unsigned seed = 99, double radius = 5.0);

/// Numerical membership probe on a finite grid:
///   st: gradient components >= -tol; cx: Hessian eigenvalues >= -tol;
///   sm: mixed second partials >= -tol; dcx: sm probe + diagonal >= -tol;
///   intersections check both parents.
bool family_membership_probe(const TestFunction& f, OrderTag tag,
                             const std::vector<Vec>& probe_grid, double tol = 1e-7);

/// A <=_psd B: min eigenvalue of B - A >= -eps. Inputs symmetrized; throws
/// if asymmetry exceeds tolerance.
bool psd_order(const Mat& A, const Mat& B, double eps = kEpsPsd);

/// sigma1 <=_d sigma2: entrywise sigma2 - sigma1 >= -eps with equal diagonals.
bool d_order(const Mat& sigma1, const Mat& sigma2, double eps = kEpsPsd);

/// Integral order of Levy measures over the family, members shifted so
/// f(0) = 0. worst_margin = min over members of (int f dF2 - int f dF1).
OrderVerdict levy_order(const LevyMeasureSpec& F1, const LevyMeasureSpec& F2,
                        const TestFamily& family, double tol = 1e-9);

struct ConditionRow {
    std::string name;
    bool pass = true;
    std::string detail;
    double grid_point = 0.0;
};

struct ConditionReport {
    std::vector<ConditionRow> rows;
    std::vector<std::string> notes;
    bool pass = true;
};

/// Structural sufficient conditions on characteristics for the requested tag
/// (st, cx, sm, ism). For SDE pairs additionally Phi nonnegativity and
/// Phi1 <=_psd Phi2 on a probe grid. Throws on mixed variants or tags with
/// no defined condition row.
ConditionReport sufficient_conditions(const ProcessSpec& a, const ProcessSpec& b, OrderTag tag,
                                      const std::vector<double>& s_grid,
                                      const TestFamily* family = nullptr);

}  // namespace levyorder

#endif
