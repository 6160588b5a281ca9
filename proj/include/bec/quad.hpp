#pragma once

#include <functional>
#include <vector>

namespace bec {

// Shared numerical policy for every momentum integral in the library.
// p_cutoff <= 0 means "derive the cutoff from the integrand's decay rate";
// callers that know their exponential rate pass it to the semi-infinite
// helpers, which extend the window until the tail bound fits the budget.
struct QuadratureConfig {
  double rtol = 1e-10;
  double atol = 1e-13;
  double p_cutoff = 0.0;
  int max_subdivisions = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // Kronrod estimate plus any tail bound
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod 7/15 on [a, b]. Worst-interval bisection until the
// summed error estimate meets max(atol, rtol*|I|). Throws NonConvergence if
// the subdivision cap is hit first.
QuadResult integrate_gk(const Integrand& f, double a, double b,
                        const QuadratureConfig& cfg);

double integrate(const Integrand& f, double a, double b,
                 const QuadratureConfig& cfg);

// Semi-infinite integral of an integrand decaying like p^k * exp(-rate*p).
// Integrates [a, P] adaptively and adds an analytic tail bound at P to the
// error budget. P is max(cfg.p_cutoff, 40/rate) so the tail is negligible
// even when the caller's cutoff is optimistic.
QuadResult integrate_decaying(const Integrand& f, double a, double rate,
                              const QuadratureConfig& cfg);

// Second, structurally different scheme for cross-checks: trapezoid
// refinement with Richardson extrapolation (Romberg). Public integrals are
// required to agree between the two schemes to 10x rtol.
QuadResult integrate_romberg(const Integrand& f, double a, double b,
                             const QuadratureConfig& cfg);

// Integral of f(p)*sin(p*r) over [0, p_max], splitting at the sine zeros so
// each panel is non-oscillatory. Used by the radial reduction of 3D Fourier
// transforms; r = 0 falls back to plain adaptive quadrature of f.
QuadResult integrate_oscillatory_sin(const Integrand& f, double r,
                                     double p_max,
                                     const QuadratureConfig& cfg);

// Gauss-Laguerre nodes/weights for weight e^{-x} on [0, inf).
struct GaussLaguerre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLaguerre gauss_laguerre(int n);

// Brent-Dekker root finding on a sign-changing bracket.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, double rtol, int max_iter);

// Richardson extrapolation of f(h) with an even error series f(h) = L +
// c2 h^2 + c4 h^4 + ...; samples are f at h0, h0/2, h0/4, ... Returns the
// highest-order tableau entry.
double richardson_even(const std::vector<double>& samples);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bec
