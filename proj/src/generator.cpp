#include "levyorder/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "levyorder/quadrature.hpp"

namespace levyorder {

std::string to_string(OrderTag tag) {
    switch (tag) {
        case OrderTag::st: return "st";
        case OrderTag::cx: return "cx";
        case OrderTag::dcx: return "dcx";
        case OrderTag::sm: return "sm";
        case OrderTag::icx: return "icx";
        case OrderTag::idcx: return "idcx";
        case OrderTag::ism: return "ism";
    }
    return "?";
}

OrderTag order_tag_from_string(const std::string& s) {
    if (s == "st") return OrderTag::st;
    if (s == "cx") return OrderTag::cx;
    if (s == "dcx") return OrderTag::dcx;
    if (s == "sm") return OrderTag::sm;
    if (s == "icx") return OrderTag::icx;
    if (s == "idcx") return OrderTag::idcx;
    if (s == "ism") return OrderTag::ism;
    throw std::invalid_argument("unknown order tag: " + s);
}

TestFunction TestFunction::scalar(std::string name, std::function<double(double)> f,
                                  std::function<double(double)> df,
                                  std::function<double(double)> d2f) {
    TestFunction tf;
    tf.name = std::move(name);
    tf.value = [f](const Vec& x) { return f(x[0]); };
    tf.grad = [df](const Vec& x) {
        Vec g(1);
        g[0] = df(x[0]);
        return g;
    };
    tf.hess = [d2f](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = d2f(x[0]);
        return h;
    };
    return tf;
}

Complex cumulant(const FrozenTriplet& trip, const Vec& xi) {
    const Complex I(0.0, 1.0);
    Complex value = -0.5 * xi.dot(trip.sigma * xi) + I * xi.dot(trip.b);
    trip.levy.for_each_mass([&](const Vec& y, double m) {
        const double phase = xi.dot(y);
        const Complex e(std::cos(phase), std::sin(phase));
        value += m * (e - 1.0 - I * xi.dot(cutoff(y, trip.cutoff_mode)));
    });
    return value;
}

Complex cumulant(const TripletSchedule& schedule, double s, const Vec& xi) {
    return cumulant(freeze(schedule, s), xi);
}

Complex cumulant1d(const TripletSchedule& schedule, double s, double xi) {
    Vec v(1);
    v[0] = xi;
    return cumulant(schedule, s, v);
}

Complex char_function_pii(const TripletSchedule& schedule, double s, double t, const Vec& xi,
                          int n_quad) {
    if (s > t) throw std::invalid_argument("char_function_pii: s > t");
    if (s == t) return Complex(1.0, 0.0);
    const QuadRule rule = gauss_legendre(n_quad, s, t);
    Complex integral(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        integral += rule.weights[i] * cumulant(schedule, rule.nodes[i], xi);
    return std::exp(integral);
}

Complex char_function_pii1d(const TripletSchedule& schedule, double s, double t, double xi,
                            int n_quad) {
    Vec v(1);
    v[0] = xi;
    return char_function_pii(schedule, s, t, v, n_quad);
}

namespace {

// The three generator terms evaluated separately so that
// generator_difference can cancel identical parts exactly.
struct GeneratorTerms {
    double diffusion;
    double drift;
    double jump;
    double total() const { return diffusion + drift + jump; }
};

GeneratorTerms pii_terms(const FrozenTriplet& trip, const TestFunction& f, const Vec& x) {
    GeneratorTerms t{};
    const Mat H = f.hess(x);
    const Vec g = f.grad(x);
    t.diffusion = 0.5 * (trip.sigma.array() * H.array()).sum();
    t.drift = trip.b.dot(g);
    const double fx = f.value(x);
    double jump = 0.0;
    trip.levy.for_each_mass([&](const Vec& y, double m) {
        jump += m * (f.value(x + y) - fx - g.dot(cutoff(y, trip.cutoff_mode)));
    });
    t.jump = jump;
    return t;
}

GeneratorTerms sde_terms(const DiffusionCoefficient& phi, const HomogeneousTriplet& driver,
                         CutoffMode mode, double s, const TestFunction& f, const Vec& x) {
    GeneratorTerms t{};
    const Mat P = phi.phi(x, s);
    const Mat sigma_eff = P * driver.sigma * P.transpose();
    const Vec b_eff = P * driver.b;
    const Mat H = f.hess(x);
    const Vec g = f.grad(x);
    t.diffusion = 0.5 * (sigma_eff.array() * H.array()).sum();
    t.drift = b_eff.dot(g);
    const double fx = f.value(x);
    double jump = 0.0;
    driver.levy.for_each_mass([&](const Vec& y, double m) {
        jump += m * (f.value(x + P * y) - fx - g.dot(P * cutoff(y, mode)));
    });
    t.jump = jump;
    return t;
}

GeneratorTerms spec_terms(const ProcessSpec& spec, double s, const TestFunction& f, const Vec& x) {
    if (spec.is_pii()) return pii_terms(freeze(spec.pii(), s), f, x);
    const LevyDiffusionSpec& sde = spec.sde();
    return sde_terms(sde.phi, sde.driver, sde.cutoff_mode, s, f, x);
}

}  // namespace

double apply_generator_pii(const FrozenTriplet& trip, const TestFunction& f, const Vec& x) {
    return pii_terms(trip, f, x).total();
}

double apply_generator_pii(const TripletSchedule& schedule, double s, const TestFunction& f,
                           const Vec& x) {
    return apply_generator_pii(freeze(schedule, s), f, x);
}

double apply_generator_sde(const DiffusionCoefficient& phi, const HomogeneousTriplet& driver,
                           CutoffMode mode, double s, const TestFunction& f, const Vec& x) {
    return sde_terms(phi, driver, mode, s, f, x).total();
}

double apply_generator(const ProcessSpec& spec, double s, const TestFunction& f, const Vec& x) {
    return spec_terms(spec, s, f, x).total();
}

Complex symbol_sde(const DiffusionCoefficient& phi,
                   const std::function<Complex(const Vec&)>& psi, double t, const Vec& x,
                   const Vec& xi) {
    if (xi.isZero(0.0)) return Complex(0.0, 0.0);
    return psi(phi.phi(x, t).transpose() * xi);
}

std::function<Complex(const Vec&)> levy_symbol(const HomogeneousTriplet& driver, CutoffMode mode) {
    FrozenTriplet trip{driver.b, driver.sigma, driver.levy, mode};
    return [trip](const Vec& xi) { return -cumulant(trip, xi); };
}

double generator_difference(const ProcessSpec& a, const ProcessSpec& b, double s,
                            const TestFunction& f, const Vec& x) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("generator_difference: dimension mismatch");
    const GeneratorTerms ta = spec_terms(a, s, f, x);
    const GeneratorTerms tb = spec_terms(b, s, f, x);
    return (tb.diffusion - ta.diffusion) + (tb.drift - ta.drift) + (tb.jump - ta.jump);
}

}  // namespace levyorder
