#pragma once

#include <complex>
#include <functional>

#include "bec/model.hpp"
#include "bec/pauli.hpp"
#include "bec/quad.hpp"

namespace bec {

// Short-distance expansion coefficients on the time axis (coinciding spatial
// points, timelike separation x0).

// Parallel-transport factor U(x0) = cos(mu x0) 1 - i sin(mu x0) s2.
Mat2C u_coeff(double x0, double mu);

// First subleading coefficient
//   V0(x0) = -(1/2) U(x0) [ (M^2+mu^2) 1
//            + dM^2 ( sinc(2 mu x0) s3 + (cos(2 mu x0)-1)/(2 mu x0) s1 ) ].
// The trigonometric ratios switch to series below |2 mu x0| = 1e-2.
Mat2C v0_coeff(double x0, const MassSpectrum& ms, double mu);

// Coinciding-point limit of the next coefficient:
//   [V1] = -(1/8)((M^2+mu^2)^2 + dM^4) 1 - (1/4)(M^2 + mu^2/3) dM^2 s3.
Mat2C v1_coinciding(const MassSpectrum& ms, double mu);

// Residual of the transport equation 2 x0 dU/dx0 + 2 i mu x0 s2 U, with the
// derivative taken by central differences at step h. Zero (to O(h^2)) for
// the exact U; a perturbed candidate leaves an O(1) plateau.
Mat2C transport_residual(const std::function<Mat2C(double)>& u_fn, double x0,
                         double mu, double h);

// Two-particle spectral density (1/16 pi^2) sqrt(1 - 4m^2/M^2) for
// M^2 >= 4 m^2; exactly zero at the threshold and at M^2 = 0.
double rho2_spectral(double M_sq, double m);

// First-order shift of the coincidence value <Phi^2> under a mass
// perturbation dm^2, as a spectral integral over the two-particle cut:
//   value = dm^2 * p^2 * Int_{4m^2}^inf dM^2 rho2(M^2)
//           / ((M^2 + a)(M^2 + p^2 + i eps)),
// with p^2 the (-,+,+,+) invariant. Spacelike p^2 > 0 keeps the integrand
// real; p^2 <= -4m^2 crosses the cut and the principal value plus the
// -i pi rho2 residue is returned with on_cut set.
struct SpectralShift {
  std::complex<double> value;
  bool on_cut = false;
};

SpectralShift delta_phi2_first_order(double p_sq, double dm_sq, double m,
                                     double a,
                                     const QuadratureConfig& quad = {});

}  // namespace bec
