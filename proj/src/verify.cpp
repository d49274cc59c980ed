#include "levyorder/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "levyorder/quadrature.hpp"

namespace levyorder {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::supported: return "supported";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

DominanceReport check_generator_dominance(const ProcessSpec& a, const ProcessSpec& b,
                                          const TestFamily& family,
                                          const std::vector<double>& s_grid,
                                          const std::vector<Vec>& x_grid, double tol) {
    DominanceReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
        for (const Vec& x : x_grid) {
            for (std::size_t m = 0; m < family.members.size(); ++m) {
                const double margin = generator_difference(a, b, s, family.members[m], x);
                ++rep.checked;
                if (margin < rep.min_margin) {
                    rep.min_margin = margin;
                    rep.min_margin_x = x;
                    rep.min_margin_s = s;
                    rep.min_margin_member = static_cast<int>(m);
                }
                if (margin < -tol)
                    rep.violations.push_back({s, x, static_cast<int>(m), margin});
            }
        }
    }
    if (rep.checked == 0) rep.min_margin = 0.0;
    return rep;
}

namespace {

Verdict member_verdict(const EstimateCI& diff, double margin_tol) {
    if (diff.hi() < 0.0) return Verdict::violated;
    if (diff.lo() > -margin_tol) return Verdict::supported;
    return Verdict::inconclusive;
}

Verdict combine(const std::vector<MemberVerdict>& members) {
    Verdict overall = Verdict::supported;
    for (const auto& m : members) {
        if (m.verdict == Verdict::violated) return Verdict::violated;
        if (m.verdict == Verdict::inconclusive) overall = Verdict::inconclusive;
    }
    return overall;
}

struct RunningMoments {
    double sum = 0.0, sumsq = 0.0;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();

    void add(double v) {
        sum += v;
        sumsq += v * v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    EstimateCI finish(std::size_t n, double level) const {
        EstimateCI ci;
        ci.n = n;
        ci.level = level;
        if (n == 0) return ci;
        if (vmin == vmax) {
            ci.mean = vmin;
            ci.stderr_ = 0.0;
            return ci;
        }
        ci.mean = sum / static_cast<double>(n);
        const double var = std::max(0.0, sumsq / static_cast<double>(n) - ci.mean * ci.mean);
        ci.stderr_ = std::sqrt(var / static_cast<double>(n > 1 ? n - 1 : 1));
        return ci;
    }
};

}  // namespace

OrderReport verify_order_mc(const ProcessSpec& a, const ProcessSpec& b, const TestFamily& family,
                            double t, int n_paths, std::uint64_t seed, double level,
                            const SimOptions& opts, double margin_tol) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("verify_order_mc: dimension mismatch");
    const TimeGrid grid = TimeGrid::uniform(t, 1);
    const PathSet pa = simulate(a, grid, n_paths, seed, opts);
    const PathSet pb = simulate(b, grid, n_paths, seed, opts);
    const int last = static_cast<int>(grid.size()) - 1;

    OrderReport rep;
    rep.mode = "mc";
    rep.margin_tol = margin_tol;
    for (const TestFunction& f : family.members) {
        RunningMoments ma, mb, md;
        for (int p = 0; p < n_paths; ++p) {
            const double va = f.value(pa.state_vec(p, last));
            const double vb = f.value(pb.state_vec(p, last));
            if (!std::isfinite(va) || !std::isfinite(vb))
                throw std::runtime_error("verify_order_mc: non-finite value for member " + f.name);
            ma.add(va);
            mb.add(vb);
            md.add(vb - va);
        }
        MemberVerdict mv;
        mv.member = f.name;
        mv.lhs = ma.finish(n_paths, level);
        mv.rhs = mb.finish(n_paths, level);
        mv.diff = md.finish(n_paths, level);
        mv.verdict = member_verdict(mv.diff, margin_tol);
        rep.members.push_back(std::move(mv));
    }
    rep.overall = combine(rep.members);
    return rep;
}

OrderReport verify_order_spectral(const TripletSchedule& a, const TripletSchedule& b,
                                  const TestFamily& family, double s, double t,
                                  const GridSpec& grid, double tol, double eval_window) {
    if (a.dimension != 1 || b.dimension != 1)
        throw std::invalid_argument("verify_order_spectral: 1-D PII only");
    const std::vector<Complex> ma = transition_multiplier(a, s, t, grid);
    const std::vector<Complex> mb = transition_multiplier(b, s, t, grid);

    OrderReport rep;
    rep.mode = "spectral";
    rep.margin_tol = tol;
    for (const TestFunction& f : family.members) {
        const GridFunction fg = GridFunction::sample(grid, [&](double x) {
            Vec v(1);
            v[0] = x;
            return f.value(v);
        });
        const GridFunction sa = apply_multiplier(fg, ma);
        const GridFunction sb = apply_multiplier(fg, mb);
        double margin = std::numeric_limits<double>::infinity();
        double witness = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            if (std::abs(grid.x(i) - grid.center) > eval_window) continue;
            const double d = sb.values[i] - sa.values[i];
            if (d < margin) {
                margin = d;
                witness = grid.x(i);
            }
        }
        MemberVerdict mv;
        mv.member = f.name;
        mv.diff.mean = margin;
        mv.diff.level = 1.0 - 1e-12;  // deterministic value, degenerate CI
        mv.diff.stderr_ = 0.0;
        mv.diff.n = 1;
        mv.witness_x = witness;
        mv.verdict = margin < -tol ? Verdict::violated : Verdict::supported;
        rep.members.push_back(std::move(mv));
    }
    rep.overall = combine(rep.members);
    return rep;
}

namespace {

double interior_sup(const GridFunction& f, double eval_window) {
    double m = 0.0;
    for (int i = 0; i < f.grid.n; ++i)
        if (std::abs(f.grid.x(i) - f.grid.center) <= eval_window)
            m = std::max(m, std::abs(f.values[i]));
    return m;
}

}  // namespace

double representation_residual(const TripletSchedule& a, const TripletSchedule& b,
                               const GridFunction& f, double s, double t, int r_nodes,
                               double eval_window) {
    if (a.dimension != 1 || b.dimension != 1)
        throw std::invalid_argument("representation_residual: 1-D PII only");
    const GridSpec& grid = f.grid;
    const std::vector<Complex> ma_st = transition_multiplier(a, s, t, grid);
    const std::vector<Complex> mb_st = transition_multiplier(b, s, t, grid);

    // r-integral on composite two-point Gauss-Legendre panels so the
    // quadrature error, not transform roundoff, dominates and refinement
    // is observable.
    const int panels = std::max(1, r_nodes / 2);
    const QuadRule rule = composite_gauss_legendre(2, panels, s, t);

    std::vector<Complex> rhs(grid.n, Complex(0.0, 0.0));
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double r = rule.nodes[q];
        const double w = rule.weights[q];
        const std::vector<Complex> mb_sr = transition_multiplier(b, s, r, grid);
        const std::vector<Complex> ma_rt = transition_multiplier(a, r, t, grid);
        const std::vector<Complex> ga = generator_multiplier(a, r, grid);
        const std::vector<Complex> gb = generator_multiplier(b, r, grid);
        for (int k = 0; k < grid.n; ++k)
            rhs[k] += w * mb_sr[k] * (gb[k] - ga[k]) * ma_rt[k];
    }

    std::vector<Complex> diff(grid.n);
    for (int k = 0; k < grid.n; ++k) diff[k] = (mb_st[k] - ma_st[k]) - rhs[k];
    return interior_sup(apply_multiplier(f, diff), eval_window);
}

double forward_equation_residual(const TripletSchedule& sched, const GridFunction& f, double s,
                                 double t, double h, double eval_window) {
    const GridSpec& grid = f.grid;
    const std::vector<Complex> m0 = transition_multiplier(sched, s, t, grid);
    const std::vector<Complex> m1 = transition_multiplier(sched, s, t + h, grid);
    const std::vector<Complex> gt = generator_multiplier(sched, t, grid);
    std::vector<Complex> res(grid.n);
    for (int k = 0; k < grid.n; ++k) res[k] = (m1[k] - m0[k]) / h - m0[k] * gt[k];
    return interior_sup(apply_multiplier(f, res), eval_window);
}

double backward_equation_residual(const TripletSchedule& sched, const GridFunction& f, double s,
                                  double t, double h, double eval_window) {
    const GridSpec& grid = f.grid;
    const std::vector<Complex> m0 = transition_multiplier(sched, s, t, grid);
    const std::vector<Complex> m1 = transition_multiplier(sched, s + h, t, grid);
    const std::vector<Complex> gs = generator_multiplier(sched, s, grid);
    std::vector<Complex> res(grid.n);
    for (int k = 0; k < grid.n; ++k) res[k] = (m1[k] - m0[k]) / h + gs[k] * m0[k];
    return interior_sup(apply_multiplier(f, res), eval_window);
}

std::vector<bool> monotonicity_probe(const TripletSchedule& sched, const TestFamily& family,
                                     double s, double t, const GridSpec& grid,
                                     double eval_window, double tol) {
    if (sched.dimension != 1)
        throw std::invalid_argument("monotonicity_probe: 1-D PII only");
    const std::vector<Complex> m = transition_multiplier(sched, s, t, grid);
    std::vector<bool> out;
    const double dx = grid.dx();
    for (const TestFunction& f : family.members) {
        const GridFunction fg = GridFunction::sample(grid, [&](double x) {
            Vec v(1);
            v[0] = x;
            return f.value(v);
        });
        const GridFunction g = apply_multiplier(fg, m);
        bool ok = true;
        const OrderTag tag = family.tag;
        const bool need_incr = tag == OrderTag::st || tag == OrderTag::icx ||
                               tag == OrderTag::idcx || tag == OrderTag::ism;
        const bool need_cvx = tag == OrderTag::cx || tag == OrderTag::dcx ||
                              tag == OrderTag::icx || tag == OrderTag::idcx;
        for (int i = 1; i + 1 < grid.n && ok; ++i) {
            if (std::abs(grid.x(i) - grid.center) > eval_window) continue;
            if (need_incr) {
                const double d1 = (g.values[i + 1] - g.values[i - 1]) / (2.0 * dx);
                if (d1 < -tol) ok = false;
            }
            if (need_cvx) {
                const double d2 =
                    (g.values[i + 1] - 2.0 * g.values[i] + g.values[i - 1]) / (dx * dx);
                if (d2 < -tol) ok = false;
            }
        }
        out.push_back(ok);
    }
    return out;
}

WeightedMeasure WeightedMeasure::uniform01(int n_quad) {
    WeightedMeasure nu;
    const QuadRule rule = gauss_legendre(n_quad, 0.0, 1.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Vec x(1);
        x[0] = rule.nodes[i];
        nu.points.push_back(x);
        nu.weights.push_back(rule.weights[i]);
    }
    return nu;
}

WeightedMeasure WeightedMeasure::std_normal(int n_quad) {
    WeightedMeasure nu;
    const QuadRule rule = gauss_legendre(n_quad, -10.0, 10.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Vec x(1);
        x[0] = rule.nodes[i];
        nu.points.push_back(x);
        const double z = rule.nodes[i];
        nu.weights.push_back(rule.weights[i] * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI));
    }
    return nu;
}

double modified_lp_norm(const std::function<double(const Vec&)>& f, const WeightedMeasure& nu,
                        double p, double rho, const std::vector<Vec>& y_grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("modified_lp_norm: p must be >= 1");
    double best = 0.0;
    for (const Vec& y : y_grid) {
        double integral = 0.0;
        for (std::size_t i = 0; i < nu.points.size(); ++i)
            integral += nu.weights[i] * std::pow(std::abs(f(nu.points[i] + y)), p);
        const double value = std::pow(integral, 1.0 / p) / std::pow(1.0 + y.norm(), rho / p);
        best = std::max(best, value);
    }
    return best;
}

double kernel_condition_K(const std::function<double(const Vec&, const Vec&)>& k,
                          const WeightedMeasure& nu, const std::vector<Vec>& y_grid) {
    double best = 0.0;
    for (const Vec& y : y_grid) {
        double integral = 0.0;
        for (std::size_t i = 0; i < nu.points.size(); ++i) {
            const double v = k(y, y + nu.points[i]);
            integral += nu.weights[i] * v * v;
        }
        best = std::max(best, std::sqrt(integral) / (1.0 + y.norm()));
    }
    return best;
}

nlohmann::json to_json(const EstimateCI& ci) {
    return {{"mean", ci.mean}, {"stderr", ci.stderr_}, {"n", ci.n},
            {"level", ci.level}, {"lo", ci.lo()}, {"hi", ci.hi()}};
}

nlohmann::json to_json(const DominanceReport& rep) {
    nlohmann::json j;
    j["checked"] = rep.checked;
    j["min_margin"] = rep.min_margin;
    j["min_margin_s"] = rep.min_margin_s;
    j["min_margin_member"] = rep.min_margin_member;
    j["min_margin_x"] = std::vector<double>(rep.min_margin_x.data(),
                                            rep.min_margin_x.data() + rep.min_margin_x.size());
    j["violations"] = nlohmann::json::array();
    for (const auto& v : rep.violations) {
        j["violations"].push_back(
            {{"s", v.s},
             {"x", std::vector<double>(v.x.data(), v.x.data() + v.x.size())},
             {"member", v.member},
             {"margin", v.margin}});
    }
    return j;
}

nlohmann::json to_json(const OrderReport& rep) {
    nlohmann::json j;
    j["mode"] = rep.mode;
    j["overall"] = to_string(rep.overall);
    j["margin_tol"] = rep.margin_tol;
    j["members"] = nlohmann::json::array();
    for (const auto& m : rep.members) {
        nlohmann::json jm;
        jm["member"] = m.member;
        jm["verdict"] = to_string(m.verdict);
        jm["diff"] = to_json(m.diff);
        if (rep.mode == "mc") {
            jm["lhs"] = to_json(m.lhs);
            jm["rhs"] = to_json(m.rhs);
        } else {
            jm["witness_x"] = m.witness_x;
        }
        j["members"].push_back(std::move(jm));
    }
    return j;
}

nlohmann::json to_json(const ConditionReport& rep) {
    nlohmann::json j;
    j["pass"] = rep.pass;
    j["notes"] = rep.notes;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        j["rows"].push_back({{"name", r.name},
                             {"pass", r.pass},
                             {"detail", r.detail},
                             {"grid_point", r.grid_point}});
    }
    return j;
}

void export_order_csv(const OrderReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_order_csv: cannot open " + path);
    out << "member,verdict,margin,ci_low,ci_high\n";
    out.precision(17);
    for (const auto& m : rep.members) {
        out << m.member << "," << to_string(m.verdict) << "," << m.diff.mean << ","
            << m.diff.lo() << "," << m.diff.hi() << "\n";
    }
}

}  // namespace levyorder
