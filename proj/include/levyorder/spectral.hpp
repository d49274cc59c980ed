#ifndef LEVYORDER_SPECTRAL_HPP
#define LEVYORDER_SPECTRAL_HPP

#include <string>
#include <vector>

#include "levyorder/generator.hpp"
#include "levyorder/specs.hpp"

namespace levyorder {

/// Uniform 1-D grid, size a power of two. Frequencies follow the usual
/// wraparound layout: xi(k) = 2 pi k' / (n dx) with k' = k or k - n.
struct GridSpec {
    double center = 0.0;
    double half_width = 20.0;
    int n = 4096;

    double dx() const { return 2.0 * half_width / n; }
    double x(int i) const { return center - half_width + i * dx(); }
    double xi(int k) const {
        const int ks = k < n / 2 ? k : k - n;
        return 2.0 * M_PI * ks / (n * dx());
    }
    bool operator==(const GridSpec& o) const {
        return center == o.center && half_width == o.half_width && n == o.n;
    }
};

struct GridFunction {
    GridSpec grid;
    std::vector<double> values;

    static GridFunction sample(const GridSpec& g, const std::function<double(double)>& f);
    double max_abs() const;
};

/// In-place radix-2 transform, v.size() a power of two.
/// sign=-1: F_k = sum_i v_i e^{-2 pi i ik/N}; sign=+1 the conjugate (unscaled).
void fft(std::vector<Complex>& v, int sign);

/// Multiplier samples m_k = char_function_pii(s, t, -xi(k)); the transition
/// operator acts by out = (1/N) fft(m . fft(f, +1), -1).
std::vector<Complex> transition_multiplier(const TripletSchedule& schedule, double s, double t,
                                           const GridSpec& grid, int n_quad = 64);

/// Generator multiplier a_k(r) = cumulant at time r evaluated at -xi(k).
std::vector<Complex> generator_multiplier(const TripletSchedule& schedule, double r,
                                          const GridSpec& grid);

/// Applies a frequency-domain multiplier to a real grid function.
GridFunction apply_multiplier(const GridFunction& f, const std::vector<Complex>& m);

/// T_{s,t} f as a Fourier multiplier operator; exact copy when s == t.
GridFunction fourier_multiplier_transition(const TripletSchedule& schedule, double s, double t,
                                           const GridFunction& f, int n_quad = 64);

/// |f| mass (dx-weighted) in the outer cells on each side; periodization
/// error diagnostic for the multiplier transition.
double boundary_mass(const GridFunction& f, int edge_cells = 16);

struct DensityResult {
    GridFunction density;
    bool tail_ok = true;   // |char fn| < 1e-12 on the top frequencies
    double tail_max = 0.0;
};

/// Transition density of the PII increment over [s, t] by Fourier inversion.
DensityResult density_pii(const TripletSchedule& schedule, double s, double t,
                          const GridSpec& grid, int n_quad = 64);

/// Sobolev-Slobodeckii norm: (int |fhat|^2 (1+|xi|)^{2r} dxi)^{1/2} with the
/// unitary transform normalization, so r = 0 is the L2 norm.
double sobolev_norm(const GridFunction& f, double r);

/// Trapezoid-free mass: dx-weighted column sum.
double grid_integral(const GridFunction& f);

/// CSV export: header "x,value", '.' decimal, LF endings.
void export_csv(const GridFunction& f, const std::string& path);

}  // namespace levyorder

#endif
