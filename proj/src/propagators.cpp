#include "bec/propagators.hpp"

#include <cmath>
#include <string>

#include "bec/errors.hpp"

namespace bec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double gap_splitting_sq(double p, const MassSpectrum& ms, double mu) {
  const double w_sq = p * p + ms.M_sq;
  const double rad = 4.0 * mu * mu * (mu * mu + w_sq) +
                     ms.dM_sq * ms.dM_sq;
  return std::sqrt(rad);  // w_+^2 - w_-^2 = 2 * this
}

}  // namespace

Mat2C kinetic_matrix(cplx p0, double p, const MassSpectrum& ms, double mu,
                     bool conjugate) {
  const double sgn = conjugate ? 1.0 : -1.0;
  Mat2C out;
  out.cI = p0 * p0 - cplx(p * p + ms.M_sq);
  out.c3 = sgn * ms.dM_sq;
  out.c2 = sgn * 2.0 * mu * p0;
  out.c1 = 0.0;
  return out;
}

double default_epsilon(double p, const MassSpectrum& ms, double mu) {
  const auto w = omega_pm(p, ms, mu);
  return 1e-6 * std::max(w[0], 1.0);
}

Mat2C propagator_matrix(PropagatorKind kind, double p0, double p,
                        const MassSpectrum& ms, double mu, double epsilon) {
  if (!(p >= 0.0)) throw InvalidInput("propagators: |p| must be nonnegative");
  const double eps = epsilon > 0.0 ? epsilon : default_epsilon(p, ms, mu);
  const auto w = omega_pm(p, ms, mu);
  for (double shell : {w[0], w[1]}) {
    if (std::abs(std::abs(p0) - shell) < 0.5 * eps) {
      throw InvalidInput(
          "propagators: p0 within epsilon/2 of the shell at omega=" +
          std::to_string(shell) + "; the value there is regulator-dominated");
    }
  }
  const double dd2 = 2.0 * gap_splitting_sq(p, ms, mu);  // w+^2 - w-^2
  if (dd2 == 0.0) {
    throw InvalidInput(
        "propagators: degenerate branches (mu = 0 and dM^2 = 0); use the "
        "scalar propagator per branch instead");
  }

  cplx scalar;
  if (kind == PropagatorKind::Feynman) {
    const cplx z = p0 * p0 + cplx(0.0, eps);
    scalar = cplx(0.0, 1.0) *
             (1.0 / (z - w[0] * w[0]) - 1.0 / (z - w[1] * w[1]));
  } else {
    const double s = (kind == PropagatorKind::Retarded) ? eps : -eps;
    const cplx z = p0 + cplx(0.0, s);
    const cplx z2 = z * z;
    scalar = 1.0 / (z2 - w[0] * w[0]) - 1.0 / (z2 - w[1] * w[1]);
  }
  Mat2C num = kinetic_matrix(cplx(p0), p, ms, mu, /*conjugate=*/true);
  num *= scalar / dd2;
  return num;
}

std::array<DeltaShell, 4> commutator_shells(double p, const MassSpectrum& ms,
                                            double mu) {
  if (!(p >= 0.0)) throw InvalidInput("propagators: |p| must be nonnegative");
  const auto w = omega_pm(p, ms, mu);
  const double dd2 = 2.0 * gap_splitting_sq(p, ms, mu);
  if (dd2 == 0.0 || w[1] == 0.0) {
    throw InvalidInput(
        "propagators: commutator shells need nondegenerate branches with "
        "w_- > 0");
  }
  std::array<DeltaShell, 4> shells;
  int k = 0;
  for (int branch : {+1, -1}) {
    const double omega = (branch > 0) ? w[0] : w[1];
    for (int sign : {+1, -1}) {
      DeltaShell& sh = shells[k++];
      sh.location = sign * omega;
      sh.sign = sign;
      sh.branch = branch;
      sh.weight =
          kinetic_matrix(cplx(sh.location), p, ms, mu, /*conjugate=*/true);
      const double lam =
          -(double(sign) * double(branch)) / (dd2 * 2.0 * omega);
      sh.weight *= cplx(0.0, kTwoPi * lam);
    }
  }
  return shells;
}

Mat2C SpectralWeights::coincidence_sum() const {
  Mat2C out;
  for (const SpectralShell& sh : shells) out += sh.weight;
  return out;
}

SpectralWeights spectral_weights(double p, const MassSpectrum& ms, double mu,
                                 double beta) {
  if (!(p >= 0.0)) throw InvalidInput("propagators: |p| must be nonnegative");
  if (!(beta > 0.0)) throw InvalidInput("propagators: beta must be positive");
  const auto w = omega_pm(p, ms, mu);
  const double dd2 = 2.0 * gap_splitting_sq(p, ms, mu);
  if (dd2 == 0.0 || w[1] == 0.0) {
    throw InvalidInput(
        "propagators: thermal weights need w_- > 0 (gapless zero mode is a "
        "distribution in d3p, not a shell weight)");
  }
  SpectralWeights out;
  int k = 0;
  for (int branch : {+1, -1}) {
    const double omega = (branch > 0) ? w[0] : w[1];
    for (int sign : {+1, -1}) {
      SpectralShell& sh = out.shells[k++];
      sh.location = sign * omega;
      sh.sign = sign;
      sh.branch = branch;
      sh.omega = omega;
      // 1/(1 - e^{-beta p0}); negative p0 gives -e^{-beta|p0|}/(1-e^{-beta|p0|}).
      sh.bose = -1.0 / std::expm1(-beta * sh.location);
      sh.scalar =
          (double(sign) * double(branch)) / (dd2 * 2.0 * omega) * sh.bose;
      sh.weight =
          kinetic_matrix(cplx(sh.location), p, ms, mu, /*conjugate=*/true);
      sh.weight *= cplx(sh.scalar);
    }
  }
  return out;
}

}  // namespace bec
