#ifndef LEVYORDER_GENERATOR_HPP
#define LEVYORDER_GENERATOR_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "levyorder/specs.hpp"

namespace levyorder {

/// Function classes generating integral stochastic orders.
enum class OrderTag { st, cx, dcx, sm, icx, idcx, ism };

std::string to_string(OrderTag tag);
OrderTag order_tag_from_string(const std::string& s);

/// A C^2 scalar test function with analytic gradient and Hessian.
/// `b_bound` is a constant c with |f(x)| <= c (1 + |x|) when the function
/// admits one (hinges do, quadratics do not).
struct TestFunction {
    std::string name;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    std::function<Mat(const Vec&)> hess;
    std::set<OrderTag> family_tags;
    std::optional<double> b_bound;

    double operator()(const Vec& x) const { return value(x); }

    /// 1-D constructor from scalar f, f', f''.
    static TestFunction scalar(std::string name, std::function<double(double)> f,
                               std::function<double(double)> df,
                               std::function<double(double)> d2f);
};

/// theta_s(i xi): Gaussian + drift + compensated jump sum under the
/// schedule's cut-off mode.
Complex cumulant(const FrozenTriplet& triplet, const Vec& xi);
Complex cumulant(const TripletSchedule& schedule, double s, const Vec& xi);
Complex cumulant1d(const TripletSchedule& schedule, double s, double xi);

/// exp(int_s^t theta_u(i xi) du), time integral by Gauss-Legendre.
Complex char_function_pii(const TripletSchedule& schedule, double s, double t, const Vec& xi,
                          int n_quad = 64);
Complex char_function_pii1d(const TripletSchedule& schedule, double s, double t, double xi,
                            int n_quad = 64);

/// G_s f(x) = 1/2 sum sigma^{jk} d2f + sum b^j df + compensated jump sum.
double apply_generator_pii(const FrozenTriplet& triplet, const TestFunction& f, const Vec& x);
double apply_generator_pii(const TripletSchedule& schedule, double s, const TestFunction& f,
                           const Vec& x);

/// Generator of dX = Phi(X,t) dL: diffusion Phi sigma Phi^T, drift Phi b,
/// jumps through y -> Phi(x,s) y.
double apply_generator_sde(const DiffusionCoefficient& phi, const HomogeneousTriplet& driver,
                           CutoffMode mode, double s, const TestFunction& f, const Vec& x);

double apply_generator(const ProcessSpec& spec, double s, const TestFunction& f, const Vec& x);

/// psi(Phi^T(x,t) xi); psi is the negative-definite symbol of the driver,
/// psi(xi) = -theta(i xi).
Complex symbol_sde(const DiffusionCoefficient& phi,
                   const std::function<Complex(const Vec&)>& psi, double t, const Vec& x,
                   const Vec& xi);

/// Symbol of a homogeneous triplet: psi(xi) = -theta(i xi).
std::function<Complex(const Vec&)> levy_symbol(const HomogeneousTriplet& driver, CutoffMode mode);

/// apply_generator(b) - apply_generator(a), evaluated term by term so that
/// identical parts cancel exactly.
double generator_difference(const ProcessSpec& a, const ProcessSpec& b, double s,
                            const TestFunction& f, const Vec& x);

}  // namespace levyorder

#endif
