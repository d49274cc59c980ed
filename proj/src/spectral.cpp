#include "levyorder/spectral.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace levyorder {

GridFunction GridFunction::sample(const GridSpec& g, const std::function<double(double)>& f) {
    GridFunction out;
    out.grid = g;
    out.values.resize(g.n);
    for (int i = 0; i < g.n; ++i) out.values[i] = f(g.x(i));
    return out;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void fft(std::vector<Complex>& v, int sign) {
    const std::size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = v[i + k];
                const Complex t = w * v[i + k + len / 2];
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

std::vector<Complex> transition_multiplier(const TripletSchedule& schedule, double s, double t,
                                           const GridSpec& grid, int n_quad) {
    std::vector<Complex> m(grid.n);
    for (int k = 0; k < grid.n; ++k)
        m[k] = char_function_pii1d(schedule, s, t, -grid.xi(k), n_quad);
    return m;
}

std::vector<Complex> generator_multiplier(const TripletSchedule& schedule, double r,
                                          const GridSpec& grid) {
    const FrozenTriplet trip = freeze(schedule, r);
    std::vector<Complex> m(grid.n);
    for (int k = 0; k < grid.n; ++k) {
        Vec xi(1);
        xi[0] = -grid.xi(k);
        m[k] = cumulant(trip, xi);
    }
    return m;
}

GridFunction apply_multiplier(const GridFunction& f, const std::vector<Complex>& m) {
    const int n = f.grid.n;
    if (static_cast<int>(m.size()) != n)
        throw std::invalid_argument("apply_multiplier: size mismatch");
    std::vector<Complex> spec(f.values.begin(), f.values.end());
    fft(spec, +1);
    for (int k = 0; k < n; ++k) spec[k] *= m[k];
    fft(spec, -1);
    GridFunction out;
    out.grid = f.grid;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = spec[i].real() / n;
    return out;
}

GridFunction fourier_multiplier_transition(const TripletSchedule& schedule, double s, double t,
                                           const GridFunction& f, int n_quad) {
    if (s == t) return f;
    return apply_multiplier(f, transition_multiplier(schedule, s, t, f.grid, n_quad));
}

double boundary_mass(const GridFunction& f, int edge_cells) {
    double mass = 0.0;
    const int n = f.grid.n;
    for (int i = 0; i < std::min(edge_cells, n); ++i)
        mass += std::abs(f.values[i]) + std::abs(f.values[n - 1 - i]);
    return mass * f.grid.dx();
}

DensityResult density_pii(const TripletSchedule& schedule, double s, double t,
                          const GridSpec& grid, int n_quad) {
    DensityResult out;
    const double x0 = grid.x(0);
    std::vector<Complex> h(grid.n);
    double tail_max = 0.0;
    const double xi_max = std::abs(grid.xi(grid.n / 2));
    for (int k = 0; k < grid.n; ++k) {
        const double xi = grid.xi(k);
        const Complex mu = char_function_pii1d(schedule, s, t, xi, n_quad);
        if (std::abs(xi) > 0.9 * xi_max) tail_max = std::max(tail_max, std::abs(mu));
        h[k] = mu * Complex(std::cos(-xi * x0), std::sin(-xi * x0));
    }
    out.tail_max = tail_max;
    out.tail_ok = tail_max < 1e-12;
    fft(h, -1);
    const double dxi = 2.0 * M_PI / (grid.n * grid.dx());
    out.density.grid = grid;
    out.density.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i)
        out.density.values[i] = h[i].real() * dxi / (2.0 * M_PI);
    return out;
}

double sobolev_norm(const GridFunction& f, double r) {
    std::vector<Complex> spec(f.values.begin(), f.values.end());
    fft(spec, -1);
    const double dx = f.grid.dx();
    const double dxi = 2.0 * M_PI / (f.grid.n * dx);
    // Unitary-normalization spectrum magnitude: |fhat(xi_k)| = dx |F_k| / sqrt(2 pi).
    double acc = 0.0;
    for (int k = 0; k < f.grid.n; ++k) {
        const double mag2 = std::norm(spec[k]) * dx * dx / (2.0 * M_PI);
        acc += mag2 * std::pow(1.0 + std::abs(f.grid.xi(k)), 2.0 * r);
    }
    return std::sqrt(acc * dxi);
}

double grid_integral(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.dx();
}

void export_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    out << "x,value\n";
    out.precision(17);
    for (int i = 0; i < f.grid.n; ++i) out << f.grid.x(i) << "," << f.values[i] << "\n";
}

}  // namespace levyorder
