#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "levyorder/orders.hpp"

using namespace levyorder;

namespace {

Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

TestFamily single(TestFunction f, OrderTag tag) {
    TestFamily fam;
    fam.tag = tag;
    fam.members.push_back(std::move(f));
    return fam;
}

}  // namespace

TEST_CASE("make_test_family membership probes") {
    const std::vector<Vec> grid1 = default_probe_grid(1);
    const std::vector<Vec> grid2 = default_probe_grid(2);
    for (OrderTag tag : {OrderTag::st, OrderTag::cx, OrderTag::dcx, OrderTag::sm, OrderTag::icx,
                         OrderTag::idcx, OrderTag::ism}) {
        for (int dim : {1, 2}) {
            const TestFamily fam = make_test_family(tag, dim, 8, 2024);
            REQUIRE(fam.members.size() == 8);
            const auto& grid = dim == 1 ? grid1 : grid2;
            for (const TestFunction& f : fam.members) {
                CHECK(f.family_tags.count(tag) == 1);
                CHECK(family_membership_probe(f, tag, grid));
            }
        }
    }
}

TEST_CASE("make_test_family is deterministic in the seed") {
    const TestFamily a = make_test_family(OrderTag::cx, 2, 6, 99);
    const TestFamily b = make_test_family(OrderTag::cx, 2, 6, 99);
    const std::vector<Vec> grid = default_probe_grid(2);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t m = 0; m < a.members.size(); ++m)
        for (const Vec& x : grid)
            CHECK(a.members[m].value(x) == b.members[m].value(x));
}

TEST_CASE("icx pool sits inside both cx and st pools") {
    const std::vector<Vec> grid = default_probe_grid(1);
    const TestFamily fam = make_test_family(OrderTag::icx, 1, 6, 5);
    for (const TestFunction& f : fam.members) {
        CHECK(family_membership_probe(f, OrderTag::cx, grid));
        CHECK(family_membership_probe(f, OrderTag::st, grid));
    }
}

TEST_CASE("family_membership_probe closed-form cases") {
    const std::vector<Vec> grid1 = default_probe_grid(1);
    const std::vector<Vec> grid2 = default_probe_grid(2);

    const TestFunction sq = TestFunction::scalar(
        "sq", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
        [](double) { return 2.0; });
    CHECK(family_membership_probe(sq, OrderTag::cx, grid1));

    const TestFunction neg = TestFunction::scalar(
        "neg", [](double x) { return -x; }, [](double) { return -1.0; },
        [](double) { return 0.0; });
    CHECK_FALSE(family_membership_probe(neg, OrderTag::st, grid1));

    TestFunction prod;
    prod.name = "xy";
    prod.value = [](const Vec& x) { return x[0] * x[1]; };
    prod.grad = [](const Vec& x) {
        Vec g(2);
        g << x[1], x[0];
        return g;
    };
    prod.hess = [](const Vec&) {
        Mat h(2, 2);
        h << 0.0, 1.0, 1.0, 0.0;
        return h;
    };
    CHECK(family_membership_probe(prod, OrderTag::sm, grid2));
    CHECK_FALSE(family_membership_probe(prod, OrderTag::cx, grid2));
}

TEST_CASE("psd_order") {
    CHECK(psd_order(Mat::Identity(2, 2), 2.0 * Mat::Identity(2, 2)));
    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    a.diagonal() << 2.0, 1.0;
    b.diagonal() << 1.0, 2.0;
    CHECK_FALSE(psd_order(a, b));
    CHECK(psd_order(a, a));

    Mat asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(psd_order(asym, asym), std::invalid_argument);
}

TEST_CASE("d_order") {
    Mat s1 = Mat::Identity(2, 2);
    Mat s2 = Mat::Identity(2, 2);
    s2(0, 1) = s2(1, 0) = 0.5;
    CHECK(d_order(s1, s2));
    CHECK_FALSE(d_order(Mat::Identity(2, 2), 2.0 * Mat::Identity(2, 2)));
    CHECK(d_order(s2, s2));
}

TEST_CASE("psd_order and d_order are transitive on random psd triples") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Mat m(2, 2), p(2, 2), q(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                m(i, j) = u(gen);
                p(i, j) = u(gen);
                q(i, j) = u(gen);
            }
        const Mat A = m * m.transpose();
        const Mat B = A + p * p.transpose();
        const Mat C = B + q * q.transpose();
        CHECK(psd_order(A, B));
        CHECK(psd_order(B, C));
        CHECK(psd_order(A, C));
    }
}

TEST_CASE("levy_order jump examples") {
    LevyMeasureSpec half(1), full(1);
    half.add_atom(-1.0, 0.5);
    half.add_atom(1.0, 0.5);
    full.add_atom(-1.0, 1.0);
    full.add_atom(1.0, 1.0);

    const TestFamily cx = make_test_family(OrderTag::cx, 1, 20, 123);
    const OrderVerdict v = levy_order(half, full, cx);
    CHECK(v.satisfied);
    CHECK(v.worst_margin >= -1e-9);

    CHECK(levy_order(full, full, cx).satisfied);
    CHECK(levy_order(full, full, cx).worst_margin == doctest::Approx(0.0));

    // A decreasing convex member falsifies the doubled-atom comparison.
    LevyMeasureSpec one(1), two(1);
    one.add_atom(1.0, 1.0);
    two.add_atom(1.0, 2.0);
    const double beta = 0.05;
    const TestFunction dec = TestFunction::scalar(
        "dec_hinge",
        [beta](double x) { return beta * std::log1p(std::exp(-x / beta)); },
        [beta](double x) { return -1.0 / (1.0 + std::exp(x / beta)); },
        [beta](double x) {
            const double s = 1.0 / (1.0 + std::exp(-x / beta));
            return s * (1.0 - s) / beta;
        });
    const OrderVerdict bad = levy_order(one, two, single(dec, OrderTag::cx));
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.witness == 0);
}

TEST_CASE("sufficient_conditions PII rows") {
    const auto grid = std::vector<double>{0.0, 0.5, 1.0};

    // st row: drift increases, everything else equal.
    const auto a_st = ProcessSpec::from_pii(
        TripletSchedule::constant1d(0.0, 1.0, LevyMeasureSpec::zero(1)));
    const auto b_st = ProcessSpec::from_pii(
        TripletSchedule::constant1d(1.0, 1.0, LevyMeasureSpec::zero(1)));
    CHECK(sufficient_conditions(a_st, b_st, OrderTag::st, grid).pass);
    CHECK_FALSE(sufficient_conditions(b_st, a_st, OrderTag::st, grid).pass);

    // cx row: sigma grows in psd order, drift equal.
    const auto a_cx = ProcessSpec::from_pii(
        TripletSchedule::constant1d(0.0, 1.0, LevyMeasureSpec::zero(1)));
    const auto b_cx = ProcessSpec::from_pii(
        TripletSchedule::constant1d(0.0, 2.0, LevyMeasureSpec::zero(1)));
    CHECK(sufficient_conditions(a_cx, b_cx, OrderTag::cx, grid).pass);
    CHECK_FALSE(sufficient_conditions(b_cx, a_cx, OrderTag::cx, grid).pass);
}

TEST_CASE("sufficient_conditions is reflexive for every tag") {
    LevyMeasureSpec F(1);
    F.add_atom(0.7, 1.1);
    const auto spec = ProcessSpec::from_pii(TripletSchedule::constant1d(0.3, 0.8, F));
    const auto grid = std::vector<double>{0.0, 1.0};
    for (OrderTag tag : {OrderTag::st, OrderTag::cx, OrderTag::dcx, OrderTag::sm, OrderTag::icx,
                         OrderTag::idcx, OrderTag::ism}) {
        const ConditionReport rep = sufficient_conditions(spec, spec, tag, grid);
        CHECK(rep.pass);
    }
}

TEST_CASE("sufficient_conditions rejects mixed variants") {
    const auto pii = ProcessSpec::from_pii(
        TripletSchedule::constant1d(0.0, 1.0, LevyMeasureSpec::zero(1)));
    LevyDiffusionSpec sde;
    sde.dimension = 1;
    sde.driver = {Vec::Zero(1), Mat::Identity(1, 1), LevyMeasureSpec::zero(1)};
    sde.phi = DiffusionCoefficient::constant1d(1.0);
    const auto sde_spec = ProcessSpec::from_sde(sde, Vec::Zero(1));
    CHECK_THROWS_AS(sufficient_conditions(pii, sde_spec, OrderTag::st, {0.0}),
                    std::invalid_argument);
}

TEST_CASE("sufficient_conditions SDE variant checks Phi rows") {
    LevyDiffusionSpec s1, s2;
    s1.dimension = s2.dimension = 1;
    s1.driver = {Vec::Zero(1), Mat::Identity(1, 1), LevyMeasureSpec::zero(1)};
    s2.driver = {Vec::Zero(1), Mat::Identity(1, 1), LevyMeasureSpec::zero(1)};
    s1.phi = DiffusionCoefficient::constant1d(1.0);
    s2.phi = DiffusionCoefficient::constant1d(2.0);
    const auto a = ProcessSpec::from_sde(s1, Vec::Zero(1));
    const auto b = ProcessSpec::from_sde(s2, Vec::Zero(1));
    CHECK(sufficient_conditions(a, b, OrderTag::cx, {0.0, 1.0}).pass);
    CHECK_FALSE(sufficient_conditions(b, a, OrderTag::cx, {0.0, 1.0}).pass);
}

TEST_CASE("b_bound holds where declared") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (OrderTag tag : {OrderTag::st, OrderTag::cx, OrderTag::ism}) {
        const TestFamily fam = make_test_family(tag, 1, 10, 41);
        for (const TestFunction& f : fam.members) {
            if (!f.b_bound) continue;
            for (int i = 0; i < 20; ++i) {
                const Vec x = vec1(u(gen));
                CHECK(std::abs(f.value(x)) <= *f.b_bound * (1.0 + x.norm()) + 1e-9);
            }
        }
    }
}
