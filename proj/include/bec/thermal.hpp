#pragma once

#include <array>

#include "bec/model.hpp"
#include "bec/pauli.hpp"
#include "bec/quad.hpp"

namespace bec {

// Quasi-particle weighted expectation values in the KMS state built on a
// spectrum (M1^2, M2^2) at chemical potential mu and inverse temperature
// beta. All are radial integrals (2 pi^2)^-1 Int p^2 dp of shell weights
// times Bose factors; integrands are written in cancellation-free form so
// the gapless case M2^2 = 0 stays finite at p -> 0.
struct ThermalObservables {
  double psi_sq = 0.0;             // <:psi1^2 + psi2^2:>
  double j_tilde = 0.0;            // quasi-particle charge density
  double rho_cr = 0.0;             // j_tilde + 2 mu psi_sq
  double m_b1_sq = 0.0;            // thermal mass shift, heavy channel
  double m_b2_sq = 0.0;            // thermal mass shift, light channel
  double condensate_charge = 0.0;  // 2 mu phi^2
};

// {m_b1^2, m_b2^2} alone (cheaper than the full set).
std::array<double, 2> thermal_masses(const MassSpectrum& ms, double mu,
                                     double beta,
                                     const QuadratureConfig& quad = {});

ThermalObservables thermal_expectations(const ModelParams& params,
                                        const MassSpectrum& ms,
                                        const QuadratureConfig& quad = {});

// Critical charge density at the given inverse temperature: the charge the
// thermal cloud carries when the condensate is about to form, plus nothing
// (condensate term excluded; add 2 mu phi^2 separately if needed).
double critical_charge_density(const MassSpectrum& ms, double mu, double beta,
                               const QuadratureConfig& quad = {});

// Inverts T -> rho_cr(spectrum at fixed masses, beta = 1/T) for the T at
// which the cloud holds exactly rho_target. Monotone in T, solved by
// bracketing + Brent. Throws NonConvergence when no bracket exists within
// the expansion limits.
double critical_temperature(const MassSpectrum& ms, double mu,
                            double rho_target,
                            const QuadratureConfig& quad = {});

// Free-gas critical density at mu = m (the non-interacting benchmark):
//   rho = (1/pi^2) Int p^2 [ n(beta(E-m)) - n(beta(E+m)) ] dp + 2 m c^2
// with E = sqrt(p^2 + m^2) and c the optional condensate amplitude.
double free_critical_density(double m, double beta, double c_amplitude = 0.0,
                             const QuadratureConfig& quad = {});

// One-loop gap-equation mass for a single scalar of mass M at coupling
// lambda_c:
//   M_beta^2 = lambda_c [ log(M xi)/(8 pi^2) M^2
//                         + (2 pi^2)^-1 Int p^2/E n(beta E) dp ].
// xi <= 0 selects the renormalization point xi = 1/M (log term drops).
// M -> 0 reproduces the T^2/12 law.
double massless_thermal_mass(double lambda_c, double M, double beta,
                             double xi = 0.0,
                             const QuadratureConfig& quad = {});

// Strict convexity window for the virtual mass: m_v^2 < lambda(3 m_b1^2 +
// m_b2^2) and m_v^2 < lambda(3 m_b2^2 + m_b1^2) with the thermal masses
// evaluated on the supplied spectrum.
bool convexity_check(double m_v, double lambda, const MassSpectrum& ms,
                     double mu, double beta,
                     const QuadratureConfig& quad = {});

// Imaginary-time two-point kernel at separation (u, r), 0 <= u <= beta:
//   K(u,r) = (2 pi^2)^-1 Int p^2 j0(pr) sum_b (b/(2(w+^2-w-^2) 2 w_b))
//            [e^{-u w_b} Dbar(w_b,p) + e^{-(beta-u) w_b} Dbar(-w_b,p)]
//            / (1 - e^{-beta w_b}) dp.
// Requires M2^2 > 0 (a spectral gap; the gapless kernel decays only
// polynomially and is outside the cluster-decay use case). At u on the
// boundary the p-integral is only cutoff-defined; interior u is exponentially
// convergent. Satisfies K(beta-u, r) = K(u, r)^T.
Mat2C kms_kernel_imag_time(double u, double r, const MassSpectrum& ms,
                           double mu, double beta,
                           const QuadratureConfig& quad = {});

}  // namespace bec
