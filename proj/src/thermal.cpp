#include "bec/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bec/errors.hpp"

namespace bec {

namespace {

constexpr double kInvTwoPiSq = 0.050660591821168885722;  // 1/(2 pi^2)

// Bose occupation 1/(e^x - 1) for x > 0.
double bose_n(double x) { return 1.0 / std::expm1(x); }

// Per-momentum shell data with the differences that suffer cancellation
// rewritten through conjugate expressions. dd is half the branch splitting,
// dd = (w+^2 - w-^2)/2 = sqrt(4 mu^4 + 4 mu^2 w^2 + dM^4).
struct ShellData {
  double w_sq, w1_sq, w2_sq;
  double dd;
  double wp, wm;
  double dd_minus_mu2;   // dd - 2 mu^2
  double dd_minus_both;  // dd - 2 mu^2 - dM^2
  double dd_minus_dm;    // dd - dM^2
  bool degenerate;
};

ShellData shell_data(double p, const MassSpectrum& ms, double mu) {
  ShellData s;
  const double p2 = p * p;
  const double mu2 = mu * mu;
  const double dm = ms.dM_sq;
  s.w_sq = p2 + ms.M_sq;
  s.w1_sq = p2 + ms.M1_sq;
  s.w2_sq = p2 + ms.M2_sq;
  const double rad = 4.0 * mu2 * (mu2 + s.w_sq) + dm * dm;
  s.dd = std::sqrt(rad);
  s.degenerate = (s.dd == 0.0);
  if (s.degenerate) {
    s.wp = s.wm = std::sqrt(s.w_sq);
    s.dd_minus_mu2 = s.dd_minus_both = s.dd_minus_dm = 0.0;
    return s;
  }
  s.wp = std::sqrt(s.w_sq + 2.0 * mu2 + s.dd);
  s.wm = std::sqrt(s.w1_sq) * std::sqrt(s.w2_sq) / s.wp;
  s.dd_minus_mu2 = (4.0 * mu2 * s.w_sq + dm * dm) / (s.dd + 2.0 * mu2);
  s.dd_minus_both = 4.0 * mu2 * s.w2_sq / (s.dd + 2.0 * mu2 + dm);
  s.dd_minus_dm = 4.0 * mu2 * (mu2 + s.w_sq) / (s.dd + dm);
  return s;
}

QuadratureConfig radial_config(const MassSpectrum& ms, double mu, double beta,
                               const QuadratureConfig& quad) {
  QuadratureConfig cfg = quad;
  if (cfg.p_cutoff <= 0.0) {
    const double scale = std::sqrt(ms.M1_sq) + std::abs(mu);
    cfg.p_cutoff = std::max({20.0 / beta, 10.0 * scale, 1.0});
  }
  return cfg;
}

double radial_integral(const Integrand& f, const MassSpectrum& ms, double mu,
                       double beta, const QuadratureConfig& quad) {
  const QuadratureConfig cfg = radial_config(ms, mu, beta, quad);
  return kInvTwoPiSq * integrate_decaying(f, 0.0, beta, cfg).value;
}

void require_thermal_args(const MassSpectrum& ms, double mu, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("thermal: beta must be positive");
  if (!(mu >= 0.0)) throw InvalidInput("thermal: mu must be nonnegative");
  if (!(ms.M2_sq >= 0.0) || !(ms.M1_sq >= ms.M2_sq)) {
    throw InvalidInput("thermal: spectrum must satisfy M1^2 >= M2^2 >= 0");
  }
}

}  // namespace

std::array<double, 2> thermal_masses(const MassSpectrum& ms, double mu,
                                     double beta,
                                     const QuadratureConfig& quad) {
  require_thermal_args(ms, mu, beta);
  const double mu2 = mu * mu;
  const double dm = ms.dM_sq;
  const auto heavy = [&](double p) {
    const ShellData s = shell_data(p, ms, mu);
    if (s.degenerate) return p * p * bose_n(beta * s.wp) / s.wp;
    const double a_plus = (s.dd + 2.0 * mu2 + dm) / s.dd;
    const double a_minus = s.dd_minus_both / s.dd;
    return p * p * 0.5 *
           (a_plus * bose_n(beta * s.wp) / s.wp +
            a_minus * bose_n(beta * s.wm) / s.wm);
  };
  const auto light = [&](double p) {
    const ShellData s = shell_data(p, ms, mu);
    if (s.degenerate) return p * p * bose_n(beta * s.wp) / s.wp;
    const double a_plus = (s.dd_minus_dm + 2.0 * mu2) / s.dd;
    const double a_minus = (s.dd_minus_mu2 + dm) / s.dd;
    return p * p * 0.5 *
           (a_plus * bose_n(beta * s.wp) / s.wp +
            a_minus * bose_n(beta * s.wm) / s.wm);
  };
  return {radial_integral(heavy, ms, mu, beta, quad),
          radial_integral(light, ms, mu, beta, quad)};
}

ThermalObservables thermal_expectations(const ModelParams& params,
                                        const MassSpectrum& ms,
                                        const QuadratureConfig& quad) {
  params.validate();
  const double mu = params.mu;
  const double beta = params.beta;
  require_thermal_args(ms, mu, beta);
  const double mu2 = mu * mu;

  ThermalObservables out;
  const auto masses = thermal_masses(ms, mu, beta, quad);
  out.m_b1_sq = masses[0];
  out.m_b2_sq = masses[1];

  const auto psi2 = [&](double p) {
    const ShellData s = shell_data(p, ms, mu);
    if (s.degenerate) return p * p * 2.0 * bose_n(beta * s.wp) / s.wp;
    return p * p * ((1.0 + 2.0 * mu2 / s.dd) * bose_n(beta * s.wp) / s.wp +
                    (s.dd_minus_mu2 / s.dd) * bose_n(beta * s.wm) / s.wm);
  };
  out.psi_sq = radial_integral(psi2, ms, mu, beta, quad);

  if (mu == 0.0) {
    out.j_tilde = 0.0;
  } else {
    const auto jt = [&](double p) {
      const ShellData s = shell_data(p, ms, mu);
      return p * p * 4.0 * mu *
             (s.wm * bose_n(beta * s.wm) - s.wp * bose_n(beta * s.wp)) / s.dd;
    };
    out.j_tilde = radial_integral(jt, ms, mu, beta, quad);
  }
  out.rho_cr = out.j_tilde + 2.0 * mu * out.psi_sq;
  out.condensate_charge = 2.0 * mu * ms.phi * ms.phi;
  return out;
}

double critical_charge_density(const MassSpectrum& ms, double mu, double beta,
                               const QuadratureConfig& quad) {
  require_thermal_args(ms, mu, beta);
  if (mu == 0.0) return 0.0;
  const double mu2 = mu * mu;
  const auto rho = [&](double p) {
    const ShellData s = shell_data(p, ms, mu);
    const double np = bose_n(beta * s.wp);
    const double nm = bose_n(beta * s.wm);
    if (s.degenerate) return p * p * 4.0 * mu * np / s.wp;
    const double psi2 = (1.0 + 2.0 * mu2 / s.dd) * np / s.wp +
                        (s.dd_minus_mu2 / s.dd) * nm / s.wm;
    const double jt = 4.0 * mu * (s.wm * nm - s.wp * np) / s.dd;
    return p * p * (2.0 * mu * psi2 + jt);
  };
  return radial_integral(rho, ms, mu, beta, quad);
}

double critical_temperature(const MassSpectrum& ms, double mu,
                            double rho_target, const QuadratureConfig& quad) {
  if (!(mu > 0.0)) {
    throw InvalidInput(
        "thermal: critical temperature needs mu > 0 (zero chemical potential "
        "carries no charge)");
  }
  if (!(rho_target > 0.0)) {
    throw InvalidInput("thermal: target charge density must be positive");
  }
  const auto residual = [&](double T) {
    return critical_charge_density(ms, mu, 1.0 / T, quad) - rho_target;
  };
  // rho ~ mu T^2/3 at high temperature fixes the starting scale.
  double t0 = std::sqrt(3.0 * rho_target / mu);
  double lo = t0 / 50.0, hi = t0 * 50.0;
  double f_lo = residual(lo), f_hi = residual(hi);
  int guard = 0;
  while (f_lo > 0.0 && guard++ < 8) {
    hi = lo;
    f_hi = f_lo;
    lo /= 8.0;
    f_lo = residual(lo);
  }
  guard = 0;
  while (f_hi < 0.0 && guard++ < 8) {
    lo = hi;
    f_lo = f_hi;
    hi *= 8.0;
    f_hi = residual(hi);
  }
  if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
    throw NonConvergence(
        "thermal: could not bracket the critical temperature within 8 "
        "decades of the T^2-law estimate");
  }
  return brent_root(residual, lo, hi, 1e-14 * hi, 1e-12, 200);
}

double free_critical_density(double m, double beta, double c_amplitude,
                             const QuadratureConfig& quad) {
  if (!(m > 0.0)) throw InvalidInput("thermal: free gas mass must be positive");
  if (!(beta > 0.0)) throw InvalidInput("thermal: beta must be positive");
  const auto f = [&](double p) {
    const double e = std::sqrt(p * p + m * m);
    // E - m = p^2/(E + m) avoids the subtraction near p = 0.
    const double gap = p * p / (e + m);
    return p * p * (bose_n(beta * gap) - bose_n(beta * (e + m)));
  };
  QuadratureConfig cfg = quad;
  if (cfg.p_cutoff <= 0.0) cfg.p_cutoff = std::max({20.0 / beta, 10.0 * m, 1.0});
  const double integral =
      2.0 * kInvTwoPiSq * integrate_decaying(f, 0.0, beta, cfg).value;
  return integral + 2.0 * m * c_amplitude * c_amplitude;
}

double massless_thermal_mass(double lambda_c, double M, double beta,
                             double xi, const QuadratureConfig& quad) {
  if (!(lambda_c > 0.0)) throw InvalidInput("thermal: coupling must be positive");
  if (!(M >= 0.0)) throw InvalidInput("thermal: M must be nonnegative");
  if (!(beta > 0.0)) throw InvalidInput("thermal: beta must be positive");
  double log_term = 0.0;
  if (M > 0.0 && xi > 0.0) {
    log_term = std::log(M * xi) / (8.0 * M_PI * M_PI) * M * M;
  }
  const auto f = [&](double p) {
    const double e = std::sqrt(p * p + M * M);
    return p * p / e * bose_n(beta * e);
  };
  QuadratureConfig cfg = quad;
  if (cfg.p_cutoff <= 0.0) cfg.p_cutoff = std::max({20.0 / beta, 10.0 * M, 1.0});
  const double thermal =
      kInvTwoPiSq * integrate_decaying(f, 0.0, beta, cfg).value;
  return lambda_c * (log_term + thermal);
}

bool convexity_check(double m_v, double lambda, const MassSpectrum& ms,
                     double mu, double beta, const QuadratureConfig& quad) {
  if (!(m_v >= 0.0)) throw InvalidInput("thermal: m_v must be nonnegative");
  if (!(lambda > 0.0)) throw InvalidInput("thermal: lambda must be positive");
  const auto masses = thermal_masses(ms, mu, beta, quad);
  const double mv2 = m_v * m_v;
  return mv2 < lambda * (3.0 * masses[0] + masses[1]) &&
         mv2 < lambda * (3.0 * masses[1] + masses[0]);
}

Mat2C kms_kernel_imag_time(double u, double r, const MassSpectrum& ms,
                           double mu, double beta,
                           const QuadratureConfig& quad) {
  require_thermal_args(ms, mu, beta);
  if (!(ms.M2_sq > 0.0)) {
    throw InvalidInput(
        "thermal: imaginary-time kernel needs a spectral gap (M2^2 > 0)");
  }
  if (!(u >= 0.0 && u <= beta)) {
    throw InvalidInput("thermal: u must lie in [0, beta]");
  }
  if (!(r >= 0.0)) throw InvalidInput("thermal: r must be nonnegative");

  const double dm = ms.dM_sq;
  // Pauli channels of the p-integrand; all three are real.
  const auto channels = [&](double p, double out[3]) {
    const ShellData s = shell_data(p, ms, mu);
    out[0] = out[1] = out[2] = 0.0;
    for (int b = +1; b >= -1; b -= 2) {
      const double omega = (b > 0) ? s.wp : s.wm;
      const double ci = (b > 0) ? (2.0 * mu * mu + s.dd) : -s.dd_minus_mu2;
      const double norm =
          double(b) / (4.0 * s.dd * omega * (-std::expm1(-beta * omega)));
      const double e_u = std::exp(-u * omega);
      const double e_v = std::exp(-(beta - u) * omega);
      out[0] += norm * ci * (e_u + e_v);
      out[1] += norm * dm * (e_u + e_v);
      out[2] += norm * 2.0 * mu * omega * (e_u - e_v);
    }
  };

  QuadratureConfig cfg = radial_config(ms, mu, beta, quad);
  const double interior = std::min(u, beta - u);
  if (interior > beta / 100.0) {
    cfg.p_cutoff = std::max(cfg.p_cutoff, 40.0 / interior);
  }
  // Else: boundary kernel, only cutoff-defined; keep the default window.

  double vals[3];
  for (int c = 0; c < 3; ++c) {
    const auto f = [&, c](double p) {
      double out[3];
      channels(p, out);
      return p * p * out[c];
    };
    if (r == 0.0) {
      vals[c] = kInvTwoPiSq * integrate_gk(f, 0.0, cfg.p_cutoff, cfg).value;
    } else {
      const auto g = [&, c](double p) {
        double out[3];
        channels(p, out);
        return p * out[c] / r;
      };
      vals[c] =
          kInvTwoPiSq * integrate_oscillatory_sin(g, r, cfg.p_cutoff, cfg).value;
    }
  }
  Mat2C out;
  out.cI = vals[0];
  out.c3 = vals[1];
  out.c2 = vals[2];
  return out;
}

}  // namespace bec
