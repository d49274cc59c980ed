#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levyorder/quadrature.hpp"
#include "levyorder/specs.hpp"

using namespace levyorder;

namespace {

Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

LevyMeasureSpec stable_like_tail(double alpha, double inner, double outer, int nodes) {
    LevyMeasureSpec F(1);
    ContinuousPart part;
    part.density = [alpha](const Vec& y) { return std::pow(std::abs(y[0]), -1.0 - alpha); };
    for (int side : {-1, 1}) {
        const QuadRule rule = gauss_legendre(nodes, inner, outer);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            part.nodes.push_back(vec1(side * rule.nodes[i]));
            part.weights.push_back(rule.weights[i]);
        }
    }
    F.set_continuous(std::move(part));
    return F;
}

}  // namespace

TEST_CASE("cutoff modes") {
    CHECK(cutoff1d(0.5, CutoffMode::Truncation) == 0.5);
    CHECK(cutoff1d(1.0, CutoffMode::Truncation) == 0.0);  // |y| < 1 strict
    CHECK(cutoff1d(7.0, CutoffMode::Identity) == 7.0);

    // Odd symmetry of the truncation mode.
    for (double y : {-2.5, -0.9, -0.3, 0.1, 0.7, 1.4}) {
        CHECK(cutoff1d(-y, CutoffMode::Truncation) == -cutoff1d(y, CutoffMode::Truncation));
    }
}

TEST_CASE("moment_integrals on atomic measures") {
    LevyMeasureSpec delta2(1);
    delta2.add_atom(2.0, 1.0);
    const MomentIntegrals m = moment_integrals(delta2);
    CHECK(m.m_small == doctest::Approx(2.0));
    CHECK(m.m_big == doctest::Approx(4.0));

    const MomentIntegrals zero = moment_integrals(LevyMeasureSpec::zero(1));
    CHECK(zero.m_small == 0.0);
    CHECK(zero.m_big == 0.0);

    LevyMeasureSpec sym(1);
    sym.add_atom(-1.0, 0.5);
    sym.add_atom(1.0, 0.5);
    const MomentIntegrals ms = moment_integrals(sym);
    CHECK(ms.m_small == doctest::Approx(1.0));
    CHECK(ms.m_big == doctest::Approx(1.0));
}

TEST_CASE("moment_integrals additive over disjoint atom sets") {
    LevyMeasureSpec a(1), b(1), both(1);
    a.add_atom(0.3, 2.0);
    b.add_atom(-1.7, 0.25);
    both.add_atom(0.3, 2.0);
    both.add_atom(-1.7, 0.25);
    const MomentIntegrals ma = moment_integrals(a);
    const MomentIntegrals mb = moment_integrals(b);
    const MomentIntegrals mc = moment_integrals(both);
    CHECK(mc.m_small == doctest::Approx(ma.m_small + mb.m_small));
    CHECK(mc.m_big == doctest::Approx(ma.m_big + mb.m_big));
}

TEST_CASE("validate_spec: Brownian triplet passes") {
    const auto spec = ProcessSpec::from_pii(
        TripletSchedule::constant1d(0.0, 1.0, LevyMeasureSpec::zero(1)));
    const ValidationReport rep = validate_spec(spec, TimeGrid::uniform(1.0, 4));
    CHECK(rep.all_pass());
}

TEST_CASE("validate_spec: indefinite covariance fails the psd check") {
    Mat sigma(2, 2);
    sigma << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    const auto spec = ProcessSpec::from_pii(
        TripletSchedule::constant(Vec::Zero(2), sigma, LevyMeasureSpec::zero(2), 1.0));
    const ValidationReport rep = validate_spec(spec, TimeGrid::uniform(1.0, 2));
    CHECK_FALSE(rep.all_pass());
    bool psd_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "sigma.psd" && !c.pass) psd_failed = true;
    CHECK(psd_failed);
}

TEST_CASE("validate_spec: identity cutoff with truncated stable-like tail passes") {
    TripletSchedule sched = TripletSchedule::constant1d(
        0.0, 0.0, stable_like_tail(1.5, 0.01, 5.0, 128), 1.0, CutoffMode::Identity);
    const ValidationReport rep = validate_spec(ProcessSpec::from_pii(std::move(sched)),
                                               TimeGrid::uniform(1.0, 2));
    CHECK(rep.all_pass());
}

TEST_CASE("validate_spec is deterministic") {
    Mat sigma(2, 2);
    sigma << 1.0, 2.0, 2.0, 1.0;
    const auto spec = ProcessSpec::from_pii(
        TripletSchedule::constant(Vec::Zero(2), sigma, LevyMeasureSpec::zero(2), 1.0));
    const TimeGrid grid = TimeGrid::uniform(1.0, 3);
    const ValidationReport r1 = validate_spec(spec, grid);
    const ValidationReport r2 = validate_spec(spec, grid);
    REQUIRE(r1.checks.size() == r2.checks.size());
    for (std::size_t i = 0; i < r1.checks.size(); ++i) {
        CHECK(r1.checks[i].name == r2.checks[i].name);
        CHECK(r1.checks[i].pass == r2.checks[i].pass);
        CHECK(r1.checks[i].grid_point == r2.checks[i].grid_point);
    }
}

TEST_CASE("validate_measure rejects atoms at the origin and bad masses") {
    LevyMeasureSpec bad(1);
    bad.add_atom(0.0, 1.0);
    CHECK_FALSE(validate_measure(bad).all_pass());

    LevyMeasureSpec neg(1);
    neg.add_atom(1.0, -0.5);
    CHECK_FALSE(validate_measure(neg).all_pass());

    LevyMeasureSpec good(1);
    good.add_atom(1.0, 0.5);
    CHECK(validate_measure(good).all_pass());
}

TEST_CASE("TimeGrid invariants") {
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), std::invalid_argument);
    const TimeGrid g = TimeGrid::uniform(2.0, 4);
    CHECK(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g.back() == 2.0);
}

TEST_CASE("DiffusionCoefficient bound probe") {
    LevyDiffusionSpec sde;
    sde.dimension = 1;
    sde.driver = {Vec::Zero(1), Mat::Identity(1, 1), LevyMeasureSpec::zero(1)};
    sde.phi = DiffusionCoefficient::constant1d(1.0);
    const auto spec = ProcessSpec::from_sde(sde, Vec::Zero(1));
    CHECK(validate_spec(spec, TimeGrid::uniform(1.0, 2)).all_pass());

    // An unbounded coefficient trips the probe.
    LevyDiffusionSpec bad = sde;
    bad.phi.phi = [](const Vec& x, double) { return Mat(x[0] * Mat::Identity(1, 1)); };
    bad.phi.bound = 1.0;
    const auto bad_spec = ProcessSpec::from_sde(bad, Vec::Zero(1));
    CHECK_FALSE(validate_spec(bad_spec, TimeGrid::uniform(1.0, 2)).all_pass());
}
