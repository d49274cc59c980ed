#include "levyorder/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "levyorder/quadrature.hpp"

namespace levyorder {

namespace {

const nlohmann::json& need(const nlohmann::json& j, const std::string& key,
                           const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key, "missing");
    return j.at(key);
}

template <class T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

Vec parse_vec(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

Mat parse_mat(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where, "expected an array of rows");
    const std::size_t cols = j[0].size();
    Mat m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != cols) throw ConfigError(where, "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

std::function<Vec(double)> parse_vec_schedule(const nlohmann::json& j, const std::string& where) {
    const std::string kind = get_or<std::string>(j, "kind", "constant");
    if (kind == "constant") {
        const Vec v = parse_vec(need(j, "value", where), where + ".value");
        return [v](double) { return v; };
    }
    if (kind == "linear") {
        const Vec a = parse_vec(need(j, "a", where), where + ".a");
        const Vec c = parse_vec(need(j, "c", where), where + ".c");
        return [a, c](double s) { return Vec(a + c * s); };
    }
    throw ConfigError(where + ".kind", "unknown kind '" + kind + "'");
}

std::function<Mat(double)> parse_mat_schedule(const nlohmann::json& j, const std::string& where) {
    const std::string kind = get_or<std::string>(j, "kind", "constant");
    if (kind == "constant") {
        const Mat v = parse_mat(need(j, "value", where), where + ".value");
        return [v](double) { return v; };
    }
    if (kind == "linear") {
        const Mat a = parse_mat(need(j, "a", where), where + ".a");
        const Mat c = parse_mat(need(j, "c", where), where + ".c");
        return [a, c](double s) { return Mat(a + c * s); };
    }
    throw ConfigError(where + ".kind", "unknown kind '" + kind + "'");
}

LevyMeasureSpec parse_levy(const nlohmann::json& j, int dim, const std::string& where) {
    LevyMeasureSpec F(dim);
    if (j.is_null()) return F;
    if (j.contains("atoms")) {
        for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
            const auto& a = j["atoms"][i];
            const std::string aw = where + ".atoms[" + std::to_string(i) + "]";
            F.add_atom(parse_vec(need(a, "location", aw), aw + ".location"),
                       need(a, "mass", aw).get<double>());
        }
    }
    if (j.contains("continuous")) {
        const auto& c = j["continuous"];
        const std::string cw = where + ".continuous";
        if (dim != 1) throw ConfigError(cw, "continuous parts are 1-D only");
        const std::string form = get_or<std::string>(c, "form", "power_law");
        if (form != "power_law") throw ConfigError(cw + ".form", "unknown form '" + form + "'");
        const double alpha = need(c, "alpha", cw).get<double>();
        const double scale = get_or(c, "scale", 1.0);
        const double inner = get_or(c, "inner", 0.05);
        const double outer = get_or(c, "outer", 5.0);
        const int nodes = get_or(c, "nodes", 64);
        if (!(inner > 0.0) || !(outer > inner))
            throw ConfigError(cw, "need 0 < inner < outer");
        ContinuousPart part;
        part.density = [scale, alpha](const Vec& y) {
            return scale * std::pow(std::abs(y[0]), -1.0 - alpha);
        };
        for (int side : {-1, 1}) {
            const QuadRule rule = gauss_legendre(nodes, inner, outer);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                Vec y(1);
                y[0] = side * rule.nodes[i];
                part.nodes.push_back(y);
                part.weights.push_back(rule.weights[i]);
            }
        }
        F.set_continuous(std::move(part));
    }
    return F;
}

CutoffMode parse_cutoff(const nlohmann::json& j, const std::string& where) {
    const std::string mode = get_or<std::string>(j, "cutoff", "truncation");
    if (mode == "truncation") return CutoffMode::Truncation;
    if (mode == "identity") return CutoffMode::Identity;
    throw ConfigError(where + ".cutoff", "unknown mode '" + mode + "'");
}

DiffusionCoefficient parse_phi(const nlohmann::json& j, int dim, const std::string& where) {
    const std::string kind = get_or<std::string>(j, "kind", "constant");
    if (kind == "constant") {
        Mat v = parse_mat(need(j, "value", where), where + ".value");
        if (v.rows() != dim) throw ConfigError(where + ".value", "dimension mismatch");
        return DiffusionCoefficient::constant(std::move(v));
    }
    if (kind == "state_tanh") {
        // Phi(x, t) = scale (1 + 0.5 tanh(x_1)) I: bounded, C^1, state-dependent.
        const double scale = get_or(j, "scale", 1.0);
        DiffusionCoefficient phi;
        phi.bound = 1.5 * std::abs(scale) * std::sqrt(static_cast<double>(dim)) + 1e-9;
        phi.phi = [scale, dim](const Vec& x, double) {
            return Mat(scale * (1.0 + 0.5 * std::tanh(x[0])) * Mat::Identity(dim, dim));
        };
        return phi;
    }
    throw ConfigError(where + ".kind", "unknown kind '" + kind + "'");
}

}  // namespace

ProcessSpec parse_process_spec(const nlohmann::json& j, const std::string& where) {
    const std::string type = get_or<std::string>(j, "type", "pii");
    const int dim = get_or(j, "dimension", 1);
    if (dim < 1) throw ConfigError(where + ".dimension", "must be >= 1");
    Vec x0 = j.contains("initial") ? parse_vec(j["initial"], where + ".initial")
                                   : Vec(Vec::Zero(dim));
    if (x0.size() != dim) throw ConfigError(where + ".initial", "dimension mismatch");

    if (type == "pii") {
        TripletSchedule sched;
        sched.dimension = dim;
        sched.horizon = get_or(j, "horizon", 1.0);
        sched.cutoff_mode = parse_cutoff(j, where);
        sched.drift = parse_vec_schedule(need(j, "drift", where), where + ".drift");
        sched.covariance =
            parse_mat_schedule(need(j, "covariance", where), where + ".covariance");
        const LevyMeasureSpec F =
            parse_levy(j.contains("levy") ? j["levy"] : nlohmann::json(), dim, where + ".levy");
        sched.levy = [F](double) { return F; };
        ProcessSpec spec = ProcessSpec::from_pii(std::move(sched));
        spec.initial_law = InitialLaw::point(std::move(x0));
        return spec;
    }
    if (type == "sde") {
        const auto& drv = need(j, "driver", where);
        LevyDiffusionSpec sde;
        sde.dimension = dim;
        sde.cutoff_mode = parse_cutoff(j, where);
        sde.driver.b = parse_vec(need(drv, "b", where + ".driver"), where + ".driver.b");
        sde.driver.sigma =
            parse_mat(need(drv, "sigma", where + ".driver"), where + ".driver.sigma");
        sde.driver.levy = parse_levy(drv.contains("levy") ? drv["levy"] : nlohmann::json(), dim,
                                     where + ".driver.levy");
        sde.phi = parse_phi(need(j, "phi", where), dim, where + ".phi");
        return ProcessSpec::from_sde(std::move(sde), std::move(x0));
    }
    throw ConfigError(where + ".type", "unknown type '" + type + "'");
}

JobConfig parse_job(const nlohmann::json& j) {
    JobConfig cfg;
    cfg.schema_version = get_or(j, "schema_version", 1);
    if (cfg.schema_version != 1) throw ConfigError("schema_version", "unsupported version");

    const auto& pair = need(j, "pair", "");
    cfg.spec_a = parse_process_spec(need(pair, "a", "pair"), "pair.a");
    cfg.spec_b = parse_process_spec(need(pair, "b", "pair"), "pair.b");
    if (cfg.spec_a.dimension() != cfg.spec_b.dimension())
        throw ConfigError("pair", "dimension mismatch between a and b");

    try {
        cfg.tag = order_tag_from_string(get_or<std::string>(j, "ordering", "cx"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("ordering", e.what());
    }

    if (j.contains("family")) {
        const auto& f = j["family"];
        cfg.family_size = get_or(f, "size", cfg.family_size);
        cfg.family_seed = get_or(f, "seed", cfg.family_seed);
        cfg.family_beta = get_or(f, "beta", cfg.family_beta);
    }
    if (cfg.family_size < 1) throw ConfigError("family.size", "must be >= 1");

    static const std::set<std::string> known{"validate",  "conditions", "dominance", "mc",
                                            "spectral",  "residuals",  "norms"};
    cfg.stages = get_or(j, "stages", std::vector<std::string>(known.begin(), known.end()));
    for (const auto& s : cfg.stages)
        if (!known.count(s)) throw ConfigError("stages", "unknown stage '" + s + "'");

    if (j.contains("mc")) {
        const auto& m = j["mc"];
        cfg.n_paths = get_or(m, "n_paths", cfg.n_paths);
        cfg.t = get_or(m, "t", cfg.t);
        cfg.seed = get_or(m, "seed", cfg.seed);
        cfg.level = get_or(m, "level", cfg.level);
        cfg.steps_per_unit = get_or(m, "steps_per_unit", cfg.steps_per_unit);
        cfg.margin_tol = get_or(m, "margin_tol", cfg.margin_tol);
        cfg.threads = get_or(m, "threads", cfg.threads);
    }
    if (cfg.n_paths < 1) throw ConfigError("mc.n_paths", "must be >= 1");
    if (!(cfg.t > 0.0)) throw ConfigError("mc.t", "must be > 0");

    if (j.contains("grids")) {
        const auto& g = j["grids"];
        cfg.s_points = get_or(g, "s_points", cfg.s_points);
        cfg.x_min = get_or(g, "x_min", cfg.x_min);
        cfg.x_max = get_or(g, "x_max", cfg.x_max);
        cfg.x_count = get_or(g, "x_count", cfg.x_count);
        cfg.spectral_n = get_or(g, "spectral_n", cfg.spectral_n);
        cfg.spectral_half_width = get_or(g, "spectral_half_width", cfg.spectral_half_width);
        cfg.eval_window = get_or(g, "eval_window", cfg.eval_window);
    }
    if (cfg.x_count < 2 || !(cfg.x_max > cfg.x_min))
        throw ConfigError("grids", "need x_count >= 2 and x_max > x_min");
    if (cfg.spectral_n < 2 || (cfg.spectral_n & (cfg.spectral_n - 1)) != 0)
        throw ConfigError("grids.spectral_n", "must be a power of two");

    if (j.contains("residuals")) {
        const auto& r = j["residuals"];
        cfg.r_nodes = get_or(r, "r_nodes", cfg.r_nodes);
        cfg.h = get_or(r, "h", cfg.h);
    }
    cfg.out_dir = get_or<std::string>(j, "out_dir", cfg.out_dir);
    return cfg;
}

JobConfig load_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("(file)", "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("(file)", std::string("parse error: ") + e.what());
    }
    return parse_job(j);
}

namespace {

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

bool has_stage(const JobConfig& cfg, const std::string& name) {
    return std::find(cfg.stages.begin(), cfg.stages.end(), name) != cfg.stages.end();
}

std::vector<Vec> make_x_grid(const JobConfig& cfg, int dim) {
    std::vector<Vec> grid;
    for (int i = 0; i < cfg.x_count; ++i) {
        const double v = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.x_count - 1);
        if (dim == 1) {
            Vec x(1);
            x[0] = v;
            grid.push_back(x);
        } else {
            for (int jdim = 0; jdim < dim; ++jdim) {
                Vec x = Vec::Zero(dim);
                x[jdim] = v;
                grid.push_back(x);
            }
        }
    }
    return grid;
}

}  // namespace

void emit_margins_vs_s(const std::vector<std::pair<double, double>>& rows,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "s,min_margin\n";
    out.precision(17);
    for (const auto& [s, margin] : rows) out << s << "," << margin << "\n";
}

void emit_ci_bars(const OrderReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "member,mean,lo,hi\n";
    out.precision(17);
    for (const auto& m : rep.members)
        out << m.member << "," << m.diff.mean << "," << m.diff.lo() << "," << m.diff.hi()
            << "\n";
}

void emit_density_overlay(const GridFunction& a, const GridFunction& b, const std::string& path) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("emit_density_overlay: grid mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,density_a,density_b\n";
    out.precision(17);
    for (int i = 0; i < a.grid.n; ++i)
        out << a.grid.x(i) << "," << a.values[i] << "," << b.values[i] << "\n";
}

JobResult run_job(const JobConfig& cfg) {
    namespace fs = std::filesystem;
    JobResult result;
    nlohmann::json& summary = result.summary;
    summary["schema_version"] = cfg.schema_version;
    summary["ordering"] = to_string(cfg.tag);

    bool violation = false, inconclusive = false;
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    const int dim = cfg.spec_a.dimension();
    const bool pii_1d = dim == 1 && cfg.spec_a.is_pii() && cfg.spec_b.is_pii();

    if ((has_stage(cfg, "mc") || has_stage(cfg, "spectral")) && !has_stage(cfg, "validate"))
        throw ConfigError("stages", "mc/spectral require the validate stage");
    if (has_stage(cfg, "spectral") && !pii_1d)
        throw ConfigError("stages", "spectral requires a 1-D PII pair");
    if (has_stage(cfg, "residuals") && !pii_1d)
        throw ConfigError("stages", "residuals require a 1-D PII pair");

    const TestFamily family =
        make_test_family(cfg.tag, dim, cfg.family_size, cfg.family_seed, cfg.family_beta);
    const SimOptions opts{cfg.steps_per_unit, cfg.threads, 1e8};
    const GridSpec grid{0.0, cfg.spectral_half_width, cfg.spectral_n};

    std::vector<double> s_grid = cfg.s_points;
    if (s_grid.empty()) s_grid.push_back(0.0);

    if (has_stage(cfg, "validate")) {
        TimeGrid tgrid = TimeGrid::uniform(cfg.t, 4);
        const ValidationReport ra = validate_spec(cfg.spec_a, tgrid);
        const ValidationReport rb = validate_spec(cfg.spec_b, tgrid);
        nlohmann::json jv;
        auto dump_checks = [](const ValidationReport& r) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& c : r.checks)
                arr.push_back({{"name", c.name},
                               {"pass", c.pass},
                               {"detail", c.detail},
                               {"grid_point", c.grid_point}});
            return arr;
        };
        jv["a"] = dump_checks(ra);
        jv["b"] = dump_checks(rb);
        jv["pass"] = ra.all_pass() && rb.all_pass();
        write_json(jv, out_dir / "validate.json");
        summary["validate"] = jv["pass"];
        if (!jv["pass"].get<bool>())
            throw std::runtime_error("validation failed; see validate.json");
    }

    if (has_stage(cfg, "conditions")) {
        const ConditionReport rep =
            sufficient_conditions(cfg.spec_a, cfg.spec_b, cfg.tag, s_grid, &family);
        write_json(to_json(rep), out_dir / "conditions.json");
        summary["conditions"] = rep.pass;
        if (!rep.pass) inconclusive = true;
    }

    if (has_stage(cfg, "dominance")) {
        const std::vector<Vec> x_grid = make_x_grid(cfg, dim);
        DominanceReport total;
        total.min_margin = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, double>> per_s;
        for (double s : s_grid) {
            const DominanceReport rep =
                check_generator_dominance(cfg.spec_a, cfg.spec_b, family, {s}, x_grid);
            per_s.emplace_back(s, rep.min_margin);
            total.checked += rep.checked;
            total.violations.insert(total.violations.end(), rep.violations.begin(),
                                    rep.violations.end());
            if (rep.min_margin < total.min_margin) {
                total.min_margin = rep.min_margin;
                total.min_margin_s = rep.min_margin_s;
                total.min_margin_x = rep.min_margin_x;
                total.min_margin_member = rep.min_margin_member;
            }
        }
        write_json(to_json(total), out_dir / "dominance.json");
        emit_margins_vs_s(per_s, (out_dir / "margins_vs_s.csv").string());
        summary["dominance_min_margin"] = total.min_margin;
        summary["dominance_violations"] = total.violations.size();
        if (!total.violations.empty()) violation = true;
    }

    if (has_stage(cfg, "mc")) {
        const OrderReport rep = verify_order_mc(cfg.spec_a, cfg.spec_b, family, cfg.t,
                                                cfg.n_paths, cfg.seed, cfg.level, opts,
                                                cfg.margin_tol);
        write_json(to_json(rep), out_dir / "mc.json");
        emit_ci_bars(rep, (out_dir / "ci_bars.csv").string());
        summary["mc"] = to_string(rep.overall);
        if (rep.overall == Verdict::violated) violation = true;
        if (rep.overall == Verdict::inconclusive) inconclusive = true;
    }

    if (has_stage(cfg, "spectral")) {
        const OrderReport rep = verify_order_spectral(cfg.spec_a.pii(), cfg.spec_b.pii(), family,
                                                      0.0, cfg.t, grid, 1e-7, cfg.eval_window);
        write_json(to_json(rep), out_dir / "spectral.json");
        summary["spectral"] = to_string(rep.overall);
        if (rep.overall == Verdict::violated) violation = true;
        if (rep.overall == Verdict::inconclusive) inconclusive = true;

        const DensityResult da = density_pii(cfg.spec_a.pii(), 0.0, cfg.t, grid);
        const DensityResult db = density_pii(cfg.spec_b.pii(), 0.0, cfg.t, grid);
        if (da.tail_ok && db.tail_ok)
            emit_density_overlay(da.density, db.density,
                                 (out_dir / "density_overlay.csv").string());
        summary["density_tail_ok"] = da.tail_ok && db.tail_ok;
    }

    if (has_stage(cfg, "residuals")) {
        const TestFunction& member =
            family.members.size() > 1 ? family.members[1] : family.members[0];
        const GridFunction fh = GridFunction::sample(grid, [&](double x) {
            Vec v(1);
            v[0] = x;
            return member.value(v);
        });
        const double rep_res = representation_residual(cfg.spec_a.pii(), cfg.spec_b.pii(), fh,
                                                       0.0, cfg.t, cfg.r_nodes, cfg.eval_window);
        const GridFunction bump =
            GridFunction::sample(grid, [](double x) { return std::exp(-x * x); });
        const double fwd = forward_equation_residual(cfg.spec_a.pii(), bump, 0.0, cfg.t, cfg.h,
                                                     cfg.eval_window);
        const double bwd = backward_equation_residual(cfg.spec_a.pii(), bump, 0.0, cfg.t, cfg.h,
                                                      cfg.eval_window);
        nlohmann::json jr;
        jr["representation"] = rep_res;
        jr["representation_member"] = member.name;
        jr["r_nodes"] = cfg.r_nodes;
        jr["forward"] = fwd;
        jr["backward"] = bwd;
        jr["h"] = cfg.h;
        write_json(jr, out_dir / "residuals.json");
        summary["residuals"] = jr;
    }

    if (has_stage(cfg, "norms")) {
        std::vector<Vec> y_grid;
        for (int i = -100; i <= 100; ++i) {
            Vec y(1);
            y[0] = static_cast<double>(i);
            y_grid.push_back(y);
        }
        const double mod_norm = modified_lp_norm([](const Vec& x) { return x[0]; },
                                                 WeightedMeasure::uniform01(64), 2.0, 2.0,
                                                 y_grid);
        const WeightedMeasure nu = WeightedMeasure::std_normal(256);
        const double kstar = kernel_condition_K(
            [](const Vec& y, const Vec& ypz) {
                const double z = (ypz - y)[0];
                return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            },
            nu, y_grid);
        nlohmann::json jn;
        jn["modified_l2_rho2_linear"] = mod_norm;
        jn["kernel_K_gaussian"] = kstar;
        write_json(jn, out_dir / "norms.json");
        summary["norms"] = jn;
    }

    result.exit_code = violation ? 1 : (inconclusive ? 2 : 0);
    summary["exit_code"] = result.exit_code;
    write_json(summary, out_dir / "summary.json");

    // Timestamps are quarantined here so report bytes stay reproducible.
    nlohmann::json info;
    info["threads"] = cfg.threads;
    info["completed_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count();
    write_json(info, out_dir / "run_info.json");
    return result;
}

}  // namespace levyorder
