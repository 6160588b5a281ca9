#include "bec/model.hpp"

#include <cmath>
#include <vector>

#include "bec/errors.hpp"
#include "bec/quad.hpp"

namespace bec {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  if (!finite(m) || !finite(mu) || !finite(lambda) || !finite(beta) ||
      !finite(m_v))
    throw InvalidInput("model: parameters must be finite");
  if (!(m > 0.0)) throw InvalidInput("model: m must be positive");
  if (!(lambda > 0.0)) throw InvalidInput("model: lambda must be positive");
  if (!(beta > 0.0)) throw InvalidInput("model: beta must be positive");
  if (mu < 0.0) throw InvalidInput("model: mu must be non-negative");
  if (m_v < 0.0) throw InvalidInput("model: m_v must be non-negative");
}

double condensate_amplitude(const ModelParams& params) {
  params.validate();
  const double gap = params.mu * params.mu - params.m * params.m;
  if (gap <= 0.0) return 0.0;
  return std::sqrt(gap / params.lambda);
}

MassSpectrum mass_spectrum(const ModelParams& params, double phi) {
  params.validate();
  if (!finite(phi) || phi < 0.0)
    throw InvalidInput("mass_spectrum: phi must be finite and non-negative");
  const double base = params.m * params.m - params.mu * params.mu;
  const double lp2 = params.lambda * phi * phi;
  const double mv2 = params.m_v * params.m_v;
  MassSpectrum ms;
  ms.phi = phi;
  ms.M1_sq = base + 3.0 * lp2 + mv2;
  ms.M2_sq = base + lp2 + mv2;
  // Roundoff from phi = sqrt((mu^2-m^2)/lambda) leaves M2_sq at O(eps);
  // snap to zero so downstream gapless branches are taken exactly.
  const double scale =
      params.m * params.m + params.mu * params.mu + 3.0 * lp2 + mv2;
  if (std::abs(ms.M1_sq) <= 1e-12 * scale) ms.M1_sq = 0.0;
  if (std::abs(ms.M2_sq) <= 1e-12 * scale) ms.M2_sq = 0.0;
  if (ms.M2_sq < 0.0)
    throw InvalidInput("mass_spectrum: M2^2 < 0 (phi below the stable branch)");
  ms.M_sq = 0.5 * (ms.M1_sq + ms.M2_sq);
  ms.dM_sq = 0.5 * (ms.M1_sq - ms.M2_sq);
  return ms;
}

std::array<double, 2> omega_pm(double p, const MassSpectrum& ms, double mu) {
  if (!finite(p) || p < 0.0)
    throw InvalidInput("omega_pm: momentum must be finite and non-negative");
  const double p2 = p * p;
  const double w2 = p2 + ms.M_sq;
  const double w1_sq = p2 + ms.M1_sq;
  const double w2_sq = p2 + ms.M2_sq;
  if (!(w1_sq >= 0.0) || !(w2_sq >= 0.0) || !finite(w2))
    throw InvalidInput("omega_pm: inconsistent mass spectrum");
  const double s = w2 + 2.0 * mu * mu;
  // Algebraically rad == s^2 - w1_sq*w2_sq; this form cannot go negative.
  double rad = 4.0 * mu * mu * (mu * mu + w2) + ms.dM_sq * ms.dM_sq;
  const double alg = s * s - w1_sq * w2_sq;
  if (alg < -1e-10 * s * s)
    throw InvalidInput("omega_pm: negative radicand (inconsistent masses)");
  if (rad < 0.0) rad = 0.0;
  const double omega_plus_sq = s + std::sqrt(rad);
  if (omega_plus_sq <= 0.0) return {0.0, 0.0};
  const double omega_plus = std::sqrt(omega_plus_sq);
  // Vieta product form: keeps w_minus exact at the gapless point.
  const double omega_minus =
      std::sqrt(w1_sq) * std::sqrt(w2_sq) / omega_plus;
  return {omega_plus, omega_minus};
}

double sound_speed(const MassSpectrum& ms, double mu) {
  if (ms.M2_sq > 1e-12 * (1.0 + ms.M1_sq))
    throw InvalidInput("sound_speed: spectrum is gapped (M2^2 > 0)");
  const double scale = std::sqrt(ms.M1_sq + 4.0 * mu * mu);
  if (scale <= 0.0) return 1.0;  // free massless limit
  std::vector<double> samples;
  double p = 0.05 * scale;
  for (int k = 0; k < 5; ++k, p *= 0.5)
    samples.push_back(omega_pm(p, ms, mu)[1] / p);
  return richardson_even(samples);
}

double sound_speed_closed(const ModelParams& params) {
  params.validate();
  const double m2 = params.m * params.m;
  const double mu2 = params.mu * params.mu;
  if (!(mu2 > m2))
    throw InvalidInput("sound_speed_closed: requires the condensed phase");
  return std::sqrt((mu2 - m2) / (3.0 * mu2 - m2));
}

double sound_speed_closed(const MassSpectrum& ms, double mu) {
  if (ms.M2_sq != 0.0)
    throw InvalidInput("sound_speed_closed: spectrum is gapped");
  const double denom = ms.M1_sq + 4.0 * mu * mu;
  if (denom <= 0.0) return 1.0;
  return std::sqrt(ms.M1_sq / denom);
}

}  // namespace bec
