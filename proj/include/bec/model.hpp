#pragma once

#include <array>
#include <cmath>

namespace bec {

// Homogeneous charged-scalar background at inverse temperature beta.
// Units: every dimensionful quantity is expressed in powers of the same
// energy unit; masses/chemical potential linear, lambda dimensionless.
// Signature convention is (-,+,+,+) throughout; plane waves are
// e^{ipx} with p.x = -p0 x0 + p.x, so on-shell modes evolve as e^{-i w t}.
struct ModelParams {
  double m = 1.0;       // Lagrangian mass
  double mu = 0.0;      // chemical potential, >= 0
  double lambda = 1.0;  // quartic coupling, > 0
  double beta = 1.0;    // inverse temperature, > 0
  double m_v = 0.0;     // virtual-mass deformation, >= 0

  void validate() const;
};

// Quadratic fluctuation spectrum around a condensate of amplitude phi.
//   M1^2 = (m^2 - mu^2) + 3 lambda phi^2 + m_v^2   (radial direction)
//   M2^2 = (m^2 - mu^2) +   lambda phi^2 + m_v^2   (phase direction)
//   M^2  = (M1^2 + M2^2)/2,  dM^2 = (M1^2 - M2^2)/2
// Invariant: M1_sq >= M2_sq >= 0. M2_sq == 0 identifies the gapless phase.
struct MassSpectrum {
  double phi = 0.0;
  double M1_sq = 0.0;
  double M2_sq = 0.0;
  double M_sq = 0.0;
  double dM_sq = 0.0;
};

struct Momentum3 {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
};

// Minimizer of the effective potential: sqrt((mu^2-m^2)/lambda) for
// mu^2 > m^2, zero otherwise (the boundary mu^2 = m^2 reports phi = 0).
double condensate_amplitude(const ModelParams& params);

// Spectrum around a caller-supplied condensate amplitude; phi need not be
// the minimizer (off-shell spectra are legitimate inputs elsewhere).
// Rejects configurations with M2^2 < 0; values within roundoff of zero are
// snapped to exactly zero so the gapless phase is representable.
MassSpectrum mass_spectrum(const ModelParams& params, double phi);

inline MassSpectrum mass_spectrum(const ModelParams& params) {
  return mass_spectrum(params, condensate_amplitude(params));
}

// Two-branch dispersion
//   w_pm^2 = w^2 + 2 mu^2 +- sqrt((w^2 + 2 mu^2)^2 - w1^2 w2^2),
// w^2 = p^2 + M^2, wi^2 = p^2 + Mi^2. The radicand is evaluated in the
// cancellation-free form 4 mu^4 + 4 mu^2 w^2 + dM^4 and w_minus via the
// Vieta product, so w_plus^2 w_minus^2 = w1^2 w2^2 holds to rounding and
// w_minus(0) is exactly zero in the gapless phase.
std::array<double, 2> omega_pm(double p, const MassSpectrum& ms, double mu);

inline std::array<double, 2> omega_pm(const Momentum3& p,
                                      const MassSpectrum& ms, double mu) {
  return omega_pm(p.norm(), ms, mu);
}

// Phase velocity of the gapless branch, lim_{p->0} w_minus(p)/p, by
// Richardson extrapolation on a halving grid. Requires M2_sq == 0.
double sound_speed(const MassSpectrum& ms, double mu);

// Closed form for the on-shell condensate: c_s^2 = (mu^2-m^2)/(3mu^2-m^2).
double sound_speed_closed(const ModelParams& params);

// Gapless closed form in spectrum variables: c_s^2 = M1^2/(M1^2 + 4 mu^2).
double sound_speed_closed(const MassSpectrum& ms, double mu);

}  // namespace bec
