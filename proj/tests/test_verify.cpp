#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "levyorder/verify.hpp"

using namespace levyorder;

namespace {

Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

TripletSchedule brownian(double sigma2) {
    return TripletSchedule::constant1d(0.0, sigma2, LevyMeasureSpec::zero(1));
}

TestFamily single(TestFunction f, OrderTag tag) {
    TestFamily fam;
    fam.tag = tag;
    fam.members.push_back(std::move(f));
    return fam;
}

TestFunction hinge_exact() {
    return TestFunction::scalar(
        "hinge_exact", [](double x) { return std::max(x, 0.0); },
        [](double x) { return x > 0.0 ? 1.0 : 0.0; }, [](double) { return 0.0; });
}

std::vector<Vec> x_grid_1d(double lo, double hi, int count) {
    std::vector<Vec> g;
    for (int i = 0; i < count; ++i) g.push_back(vec1(lo + (hi - lo) * i / (count - 1)));
    return g;
}

const GridSpec kGrid{0.0, 20.0, 4096};

}  // namespace

TEST_CASE("check_generator_dominance: Brownian 1 vs 2 with cx family") {
    const auto a = ProcessSpec::from_pii(brownian(1.0));
    const auto b = ProcessSpec::from_pii(brownian(2.0));
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 20, 123);
    const std::vector<double> s_grid{0.0, 0.5, 1.0};
    const auto xs = x_grid_1d(-3.0, 3.0, 13);

    const DominanceReport rep = check_generator_dominance(a, b, fam, s_grid, xs);
    CHECK(rep.violations.empty());
    CHECK(rep.min_margin >= -1e-9);
    CHECK(rep.checked == s_grid.size() * xs.size() * fam.members.size());
}

TEST_CASE("check_generator_dominance: identical specs have zero margin") {
    const auto a = ProcessSpec::from_pii(brownian(1.5));
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 10, 9);
    const DominanceReport rep =
        check_generator_dominance(a, a, fam, {0.0, 1.0}, x_grid_1d(-2.0, 2.0, 5));
    CHECK(rep.violations.empty());
    CHECK(rep.min_margin == doctest::Approx(0.0));
}

TEST_CASE("check_generator_dominance: reversed pair flags x^2 with margin -1") {
    const auto a = ProcessSpec::from_pii(brownian(2.0));
    const auto b = ProcessSpec::from_pii(brownian(1.0));
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 20, 123);
    const std::vector<double> s_grid{0.0, 0.5, 1.0};
    const auto xs = x_grid_1d(-3.0, 3.0, 13);

    const DominanceReport rep = check_generator_dominance(a, b, fam, s_grid, xs);
    CHECK_FALSE(rep.violations.empty());
    // Member 0 is the quadratic: B f - A f = (1/2)(1 - 2) f'' = -1 at every (s, x).
    std::size_t quad_hits = 0;
    for (const auto& v : rep.violations) {
        if (v.member != 0) continue;
        ++quad_hits;
        CHECK(v.margin == doctest::Approx(-1.0).epsilon(1e-9));
    }
    CHECK(quad_hits == s_grid.size() * xs.size());
}

TEST_CASE("verify_order_mc: Brownian hinge closed forms") {
    const auto a = ProcessSpec::from_pii(brownian(1.0));
    const auto b = ProcessSpec::from_pii(brownian(4.0));
    const TestFamily fam = single(hinge_exact(), OrderTag::cx);

    const OrderReport rep = verify_order_mc(a, b, fam, 1.0, 200000, 7, 0.99, SimOptions{1, 2});
    REQUIRE(rep.members.size() == 1);
    const MemberVerdict& m = rep.members[0];
    CHECK(std::abs(m.lhs.mean - 1.0 / std::sqrt(2.0 * M_PI)) < 4.0 * m.lhs.stderr_);
    CHECK(std::abs(m.rhs.mean - 2.0 / std::sqrt(2.0 * M_PI)) < 4.0 * m.rhs.stderr_);
    CHECK(m.verdict == Verdict::supported);
    CHECK(rep.overall == Verdict::supported);
    CHECK(rep.mode == "mc");
}

TEST_CASE("verify_order_mc: identical specs give exactly zero paired diff") {
    const auto a = ProcessSpec::from_pii(brownian(1.0));
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 5, 11);
    const OrderReport rep = verify_order_mc(a, a, fam, 1.0, 2000, 3, 0.99, SimOptions{4, 1});
    CHECK(rep.overall == Verdict::supported);
    for (const auto& m : rep.members) {
        CHECK(m.diff.mean == 0.0);
        CHECK(m.diff.stderr_ == 0.0);
    }
}

TEST_CASE("verify_order_mc: reversed Brownian pair is violated") {
    const auto a = ProcessSpec::from_pii(brownian(4.0));
    const auto b = ProcessSpec::from_pii(brownian(1.0));
    const OrderReport rep = verify_order_mc(a, b, single(hinge_exact(), OrderTag::cx), 1.0,
                                            100000, 7, 0.99, SimOptions{1, 2});
    CHECK(rep.overall == Verdict::violated);
    CHECK(rep.members[0].diff.hi() < 0.0);
}

TEST_CASE("verify_order_mc: compound Poisson half vs full atoms") {
    LevyMeasureSpec half(1), full(1);
    half.add_atom(-1.0, 0.5);
    half.add_atom(1.0, 0.5);
    full.add_atom(-1.0, 1.0);
    full.add_atom(1.0, 1.0);
    const auto a = ProcessSpec::from_pii(TripletSchedule::constant1d(0.0, 0.0, half));
    const auto b = ProcessSpec::from_pii(TripletSchedule::constant1d(0.0, 0.0, full));
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 20, 123);

    const OrderReport rep = verify_order_mc(a, b, fam, 1.0, 50000, 17, 0.99, SimOptions{8, 2});
    CHECK(rep.overall == Verdict::supported);
    for (const auto& m : rep.members) CHECK(m.verdict != Verdict::violated);
}

TEST_CASE("verify_order_spectral: Brownian 1 vs 2") {
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 10, 123);
    const OrderReport rep = verify_order_spectral(brownian(1.0), brownian(2.0), fam, 0.0, 1.0,
                                                  kGrid);
    CHECK(rep.overall == Verdict::supported);
    CHECK(rep.mode == "spectral");
    for (const auto& m : rep.members) CHECK(m.diff.mean > 1e-8);
}

TEST_CASE("verify_order_spectral: identical schedules give zero margins") {
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 6, 5);
    const OrderReport rep = verify_order_spectral(brownian(1.0), brownian(1.0), fam, 0.0, 1.0,
                                                  kGrid);
    CHECK(rep.overall == Verdict::supported);
    for (const auto& m : rep.members) CHECK(m.diff.mean == doctest::Approx(0.0));
}

TEST_CASE("verify_order_spectral: reversed pair violated with witness") {
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 10, 123);
    const OrderReport rep = verify_order_spectral(brownian(2.0), brownian(1.0), fam, 0.0, 1.0,
                                                  kGrid);
    CHECK(rep.overall == Verdict::violated);
    bool any = false;
    for (const auto& m : rep.members) {
        if (m.verdict != Verdict::violated) continue;
        any = true;
        CHECK(std::abs(m.witness_x) <= 5.0);
        CHECK(m.diff.mean < 0.0);
    }
    CHECK(any);
}

TEST_CASE("spectral and mc verdicts agree on the Brownian pair") {
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 8, 123);
    const auto a = ProcessSpec::from_pii(brownian(1.0));
    const auto b = ProcessSpec::from_pii(brownian(2.0));
    const OrderReport mc = verify_order_mc(a, b, fam, 1.0, 100000, 5, 0.99, SimOptions{1, 2});
    const OrderReport sp = verify_order_spectral(brownian(1.0), brownian(2.0), fam, 0.0, 1.0,
                                                 kGrid);
    CHECK(to_string(mc.overall) == to_string(sp.overall));
}

TEST_CASE("representation_residual: identical schedules vanish") {
    const TestFunction h = make_test_family(OrderTag::cx, 1, 2, 7).members[1];
    const GridFunction f = GridFunction::sample(kGrid, [&](double x) { return h.value(vec1(x)); });
    CHECK(representation_residual(brownian(1.0), brownian(1.0), f, 0.0, 1.0, 32) <= 1e-10);
}

TEST_CASE("representation_residual: Brownian 1 vs 2 with smoothed hinge") {
    const TestFunction h = make_test_family(OrderTag::cx, 1, 2, 7).members[1];
    const GridFunction f = GridFunction::sample(kGrid, [&](double x) { return h.value(vec1(x)); });
    const double r32 = representation_residual(brownian(1.0), brownian(2.0), f, 0.0, 1.0, 32);
    const double r64 = representation_residual(brownian(1.0), brownian(2.0), f, 0.0, 1.0, 64);
    CHECK(r32 <= 1e-4);
    CHECK(r64 <= r32 * 1.1);
}

TEST_CASE("representation_residual: Brownian vs Brownian plus Poisson") {
    LevyMeasureSpec F(1);
    F.add_atom(1.0, 1.0);
    const TripletSchedule bp = TripletSchedule::constant1d(0.0, 1.0, F);
    const GridFunction f =
        GridFunction::sample(kGrid, [](double x) { return std::exp(-x * x); });
    const double r32 = representation_residual(brownian(1.0), bp, f, 0.0, 1.0, 32);
    const double r64 = representation_residual(brownian(1.0), bp, f, 0.0, 1.0, 64);
    CHECK(r32 <= 1e-4);
    CHECK(r64 <= r32 * 1.1);
}

TEST_CASE("forward and backward equation residuals") {
    const GridFunction f =
        GridFunction::sample(kGrid, [](double x) { return std::exp(-x * x); });
    const TripletSchedule bm = brownian(1.0);

    const double fw = forward_equation_residual(bm, f, 0.0, 1.0, 1e-4);
    const double bw = backward_equation_residual(bm, f, 0.0, 1.0, 1e-4);
    CHECK(fw <= 1e-2);
    CHECK(bw <= 1e-2);

    // First-order difference quotients: halving h halves the residual.
    const double fw2 = forward_equation_residual(bm, f, 0.0, 1.0, 5e-5);
    const double bw2 = backward_equation_residual(bm, f, 0.0, 1.0, 5e-5);
    CHECK(fw2 / fw > 0.4);
    CHECK(fw2 / fw < 0.6);
    CHECK(bw2 / bw > 0.4);
    CHECK(bw2 / bw < 0.6);

    const GridFunction c = GridFunction::sample(kGrid, [](double) { return 0.75; });
    CHECK(forward_equation_residual(bm, c, 0.0, 1.0, 1e-4) <= 1e-9);
    CHECK(backward_equation_residual(bm, c, 0.0, 1.0, 1e-4) <= 1e-9);
}

TEST_CASE("monotonicity_probe passes for translation-invariant transitions") {
    for (OrderTag tag : {OrderTag::st, OrderTag::cx, OrderTag::sm}) {
        const TestFamily fam = make_test_family(tag, 1, 6, 31);
        const std::vector<bool> ok = monotonicity_probe(brownian(1.0), fam, 0.0, 1.0, kGrid);
        REQUIRE(ok.size() == fam.members.size());
        for (bool b : ok) CHECK(b);
    }
}

TEST_CASE("modified_lp_norm closed forms") {
    std::vector<Vec> ys;
    for (int i = -10; i <= 10; ++i) ys.push_back(vec1(static_cast<double>(i)));

    const WeightedMeasure u01 = WeightedMeasure::uniform01(64);
    CHECK(u01.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(modified_lp_norm([](const Vec&) { return 0.0; }, u01, 2.0, 1.0, ys) == 0.0);
    CHECK(modified_lp_norm([](const Vec&) { return 1.0; }, u01, 2.0, 0.0, ys) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // f(x) = x, nu = U[0,1], p = rho = 2: value sqrt(y^2 + y + 1/3)/(1 + |y|),
    // supremum 1 approached as |y| grows.
    const auto lin = [](const Vec& x) { return x[0]; };
    std::vector<Vec> wide;
    for (int i = -100; i <= 100; i += 5) wide.push_back(vec1(static_cast<double>(i)));
    const double narrow_val = modified_lp_norm(lin, u01, 2.0, 2.0, ys);
    const double wide_val = modified_lp_norm(lin, u01, 2.0, 2.0, wide);
    CHECK(wide_val > 0.99);
    CHECK(wide_val < 1.0);
    CHECK(wide_val >= narrow_val);

    // Oracle at a single probe point y = 10.
    const double probe = modified_lp_norm(lin, u01, 2.0, 2.0, {vec1(10.0)});
    CHECK(probe == doctest::Approx(std::sqrt(100.0 + 10.0 + 1.0 / 3.0) / 11.0).epsilon(1e-10));
}

TEST_CASE("kernel_condition_K closed forms") {
    std::vector<Vec> ys;
    for (int i = -5; i <= 5; ++i) ys.push_back(vec1(static_cast<double>(i)));
    const WeightedMeasure nu = WeightedMeasure::std_normal(200);

    CHECK(kernel_condition_K([](const Vec&, const Vec&) { return 0.0; }, nu, ys) == 0.0);
    CHECK(kernel_condition_K([](const Vec&, const Vec&) { return 1.0; }, nu, ys) ==
          doctest::Approx(1.0).epsilon(1e-10));

    // Translation-invariant Gaussian kernel k(y, w) = phi(w - y):
    // K = sqrt(int phi(z)^2 dN(0,1)(z)) = sqrt(1 / (2 pi sqrt(3))).
    const auto phi_kernel = [](const Vec& y, const Vec& w) {
        const double z = w[0] - y[0];
        return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    };
    const double target = std::sqrt(1.0 / (2.0 * M_PI * std::sqrt(3.0)));
    CHECK(kernel_condition_K(phi_kernel, nu, ys) == doctest::Approx(target).epsilon(1e-8));
}

TEST_CASE("report serialization shapes") {
    const TestFamily fam = make_test_family(OrderTag::cx, 1, 3, 123);
    const auto a = ProcessSpec::from_pii(brownian(1.0));
    const auto b = ProcessSpec::from_pii(brownian(2.0));

    const OrderReport mc = verify_order_mc(a, b, fam, 1.0, 2000, 5, 0.99, SimOptions{4, 1});
    const nlohmann::json jm = to_json(mc);
    CHECK(jm["mode"] == "mc");
    CHECK(jm["members"].size() == 3);
    CHECK(jm["members"][0].contains("lhs"));
    CHECK(jm["members"][0]["diff"].contains("lo"));

    const DominanceReport dom =
        check_generator_dominance(a, b, fam, {0.0}, x_grid_1d(-1.0, 1.0, 3));
    const nlohmann::json jd = to_json(dom);
    CHECK(jd["checked"] == 9);
    CHECK(jd["violations"].is_array());

    const std::string path = "/tmp/lo_order.csv";
    export_order_csv(mc, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "member,verdict,margin,ci_low,ci_high");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
    std::remove(path.c_str());
}
