#include "levyorder/specs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levyorder {

MomentIntegrals moment_integrals(const LevyMeasureSpec& F) {
    MomentIntegrals out{0.0, 0.0};
    F.for_each_mass([&](const Vec& y, double m) {
        const double r = y.norm();
        out.m_small += m * std::min(r, r * r);
        if (r >= 1.0) out.m_big += m * r * r;
    });
    return out;
}

TripletSchedule TripletSchedule::constant(Vec b, Mat sigma, LevyMeasureSpec F, double horizon,
                                          CutoffMode mode) {
    TripletSchedule s;
    s.dimension = static_cast<int>(b.size());
    s.drift = [b](double) { return b; };
    s.covariance = [sigma](double) { return sigma; };
    s.levy = [F](double) { return F; };
    s.horizon = horizon;
    s.cutoff_mode = mode;
    return s;
}

TripletSchedule TripletSchedule::constant1d(double b, double sigma2, LevyMeasureSpec F,
                                            double horizon, CutoffMode mode) {
    Vec bv(1);
    bv[0] = b;
    Mat sv(1, 1);
    sv(0, 0) = sigma2;
    return constant(bv, sv, std::move(F), horizon, mode);
}

FrozenTriplet freeze(const TripletSchedule& schedule, double s) {
    return FrozenTriplet{schedule.drift(s), schedule.covariance(s), schedule.levy(s),
                         schedule.cutoff_mode};
}

DiffusionCoefficient DiffusionCoefficient::constant(Mat value) {
    DiffusionCoefficient c;
    c.bound = value.norm() + 1.0;
    c.phi = [value](const Vec&, double) { return value; };
    return c;
}

DiffusionCoefficient DiffusionCoefficient::constant1d(double value) {
    Mat m(1, 1);
    m(0, 0) = value;
    return constant(std::move(m));
}

ProcessSpec ProcessSpec::from_pii(TripletSchedule schedule) {
    const int dim = schedule.dimension;
    return ProcessSpec{std::move(schedule), InitialLaw::origin(dim)};
}

ProcessSpec ProcessSpec::from_sde(LevyDiffusionSpec sde, Vec x0) {
    return ProcessSpec{std::move(sde), InitialLaw::point(std::move(x0))};
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("TimeGrid: empty");
    if (points_.front() != 0.0) throw std::invalid_argument("TimeGrid: first point must be 0");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1]))
            throw std::invalid_argument("TimeGrid: points must be strictly increasing");
    }
}

TimeGrid TimeGrid::uniform(double T, int n_cells) {
    if (!(T > 0.0) || n_cells < 1) throw std::invalid_argument("TimeGrid::uniform: bad arguments");
    std::vector<double> pts(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i) pts[i] = T * i / n_cells;
    return TimeGrid(std::move(pts));
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_measure(const LevyMeasureSpec& F, double at, std::vector<CheckResult>& out) {
    bool masses_ok = true;
    double bad_mass = 0.0;
    for (const Atom& a : F.atoms()) {
        if (!(a.mass > 0.0)) {
            masses_ok = false;
            bad_mass = a.mass;
        }
        if (a.location.norm() == 0.0) {
            out.push_back({"levy.no_atom_at_origin", false, "atom placed at the origin", at});
        }
    }
    out.push_back({"levy.masses_positive", masses_ok,
                   masses_ok ? "" : "non-positive atom mass " + fmt(bad_mass), at});

    if (F.continuous()) {
        bool dens_ok = true;
        double bad_node = 0.0;
        const auto& cp = *F.continuous();
        for (std::size_t i = 0; i < cp.nodes.size(); ++i) {
            const double d = cp.density(cp.nodes[i]);
            if (!(d >= 0.0) || !std::isfinite(d)) {
                dens_ok = false;
                bad_node = cp.nodes[i].norm();
            }
            if (cp.nodes[i].norm() == 0.0)
                out.push_back({"levy.no_node_at_origin", false, "quadrature node at the origin", at});
        }
        out.push_back({"levy.density_nonnegative", dens_ok,
                       dens_ok ? "" : "negative/non-finite density at |y|=" + fmt(bad_node), at});
    }

    const MomentIntegrals mi = moment_integrals(F);
    const bool finite = std::isfinite(mi.m_small) && std::isfinite(mi.m_big);
    out.push_back({"levy.one_wedge_y2_integrable", finite,
                   finite ? "" : "moment integrals not finite", at});
}

void check_frozen(const FrozenTriplet& trip, double s, std::vector<CheckResult>& out) {
    const Mat& sigma = trip.sigma;
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    out.push_back({"sigma.symmetric", asym <= 1e-9,
                   asym <= 1e-9 ? "" : "asymmetry " + fmt(asym), s});
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sigma + sigma.transpose()));
    const double lmin = es.eigenvalues().minCoeff();
    out.push_back({"sigma.psd", lmin >= -kEpsPsd,
                   lmin >= -kEpsPsd ? "" : "eigenvalue " + fmt(lmin), s});

    check_measure(trip.levy, s, out);

    if (trip.cutoff_mode == CutoffMode::Identity) {
        const MomentIntegrals mi = moment_integrals(trip.levy);
        const bool ok = std::isfinite(mi.m_small);
        out.push_back({"levy.identity_cutoff_integrable", ok,
                       ok ? "" : "|y| ^ |y|^2 integral diverges", s});
    }
}

}  // namespace

ValidationReport validate_measure(const LevyMeasureSpec& F) {
    ValidationReport rep;
    check_measure(F, 0.0, rep.checks);
    return rep;
}

ValidationReport validate_spec(const ProcessSpec& spec, const TimeGrid& grid) {
    ValidationReport rep;
    if (spec.is_pii()) {
        const TripletSchedule& sched = spec.pii();
        for (double s : grid.points()) check_frozen(freeze(sched, s), s, rep.checks);
    } else {
        const LevyDiffusionSpec& sde = spec.sde();
        check_frozen(FrozenTriplet{sde.driver.b, sde.driver.sigma, sde.driver.levy,
                                   sde.cutoff_mode},
                     0.0, rep.checks);
        // Probe |Phi| <= bound on grid times x a coarse spatial probe set.
        std::vector<Vec> probes;
        probes.push_back(Vec::Zero(sde.dimension));
        for (const Vec& x : spec.initial_law.support) probes.push_back(x);
        for (int j = 0; j < sde.dimension; ++j) {
            for (double v : {-10.0, -1.0, 1.0, 10.0}) {
                Vec x = Vec::Zero(sde.dimension);
                x[j] = v;
                probes.push_back(x);
            }
        }
        bool bounded = true;
        double worst = 0.0, worst_t = 0.0;
        for (double t : grid.points()) {
            for (const Vec& x : probes) {
                const double nrm = sde.phi.phi(x, t).norm();
                if (nrm > worst) {
                    worst = nrm;
                    worst_t = t;
                }
                if (nrm > sde.phi.bound + 1e-12) bounded = false;
            }
        }
        rep.checks.push_back({"phi.bounded", bounded,
                              bounded ? "" : "|Phi| = " + fmt(worst) + " exceeds bound", worst_t});
    }
    return rep;
}

}  // namespace levyorder
