#include "bec/goldstone.hpp"

#include <algorithm>
#include <cmath>

#include "bec/errors.hpp"

namespace bec {

PlaneWaveMode plane_wave_mode(int branch, const Momentum3& p,
                              const MassSpectrum& ms, double mu) {
  if (branch != +1 && branch != -1) {
    throw InvalidInput("goldstone: branch must be +1 or -1");
  }
  PlaneWaveMode mode;
  mode.branch = branch;
  mode.p = p;
  const auto w = omega_pm(p.norm(), ms, mu);
  mode.omega = (branch > 0) ? w[0] : w[1];
  mode.degenerate = (mu == 0.0 && ms.dM_sq == 0.0);

  const double om = mode.omega;
  const double om2 = om * om;
  const double pn2 = p.norm_sq();
  const double w1_sq = pn2 + ms.M1_sq;
  const double w2_sq = pn2 + ms.M2_sq;

  // Two exact null-vector candidates of D-hat(om, p); each is trivially
  // annihilated by one row and by the other through the on-shell quartic.
  const std::array<cplx, 2> cand_a = {cplx(om2 - w2_sq),
                                      cplx(0.0, 2.0 * mu * om)};
  const std::array<cplx, 2> cand_b = {cplx(0.0, -2.0 * mu * om),
                                      cplx(om2 - w1_sq)};
  const auto norm_sq = [](const std::array<cplx, 2>& v) {
    return std::norm(v[0]) + std::norm(v[1]);
  };
  std::array<cplx, 2> v =
      (norm_sq(cand_a) >= norm_sq(cand_b)) ? cand_a : cand_b;

  const double n = std::sqrt(norm_sq(v));
  const double floor = 1e-14 * std::max({om2, w1_sq, w2_sq, 1.0});
  if (n <= floor) {
    // Degenerate branches: fix the decoupling convention basis.
    v = (branch > 0) ? std::array<cplx, 2>{1.0, 0.0}
                     : std::array<cplx, 2>{0.0, 1.0};
  } else {
    v[0] /= n;
    v[1] /= n;
    const cplx lead = (std::abs(v[0]) > 1e-14) ? v[0] : v[1];
    const cplx phase = lead / std::abs(lead);
    v[0] /= phase;
    v[1] /= phase;
  }
  mode.v = v;
  return mode;
}

DivergenceReport divergence_residual(const std::vector<WavePacket>& waves,
                                     const ModelParams& params,
                                     const MassSpectrum& ms,
                                     DivergenceOrder order) {
  params.validate();
  if (waves.empty()) throw InvalidInput("goldstone: need at least one wave");

  double omega_scale = 0.0, p_scale = 0.0;
  for (const WavePacket& w : waves) {
    omega_scale = std::max(omega_scale, std::abs(w.mode.omega));
    p_scale = std::max(p_scale, w.mode.p.norm());
  }
  if (omega_scale == 0.0) omega_scale = 1.0;
  if (p_scale == 0.0) p_scale = 1.0;

  const double phi = ms.phi;
  const double mu = params.mu;
  const double lam = params.lambda;
  const double dM12 = ms.M1_sq - ms.M2_sq;

  DivergenceReport rep;
  const double dir[3] = {0.48, 0.60, 0.64};  // unit vector
  for (int it = 0; it < 7; ++it) {
    for (int ix = 0; ix < 7; ++ix) {
      const double t = (0.83 * it - 1.9) / omega_scale;
      const double xr = (0.71 * ix - 2.3) / p_scale;
      double psi[2] = {0.0, 0.0}, psid[2] = {0.0, 0.0}, box[2] = {0.0, 0.0};
      for (const WavePacket& w : waves) {
        const double pdotx =
            xr * (w.mode.p.x * dir[0] + w.mode.p.y * dir[1] +
                  w.mode.p.z * dir[2]);
        const cplx e = std::exp(cplx(0.0, pdotx - w.mode.omega * t));
        const double om = w.mode.omega;
        const double k2 = w.mode.p.norm_sq();
        for (int i = 0; i < 2; ++i) {
          psi[i] += w.amplitude * std::real(w.mode.v[i] * e);
          psid[i] += w.amplitude * std::real(cplx(0.0, -om) * w.mode.v[i] * e);
          box[i] += w.amplitude * (om * om - k2) * std::real(w.mode.v[i] * e);
        }
      }
      const double deriv_form = 2.0 * (psi[1] * box[0] - psi[0] * box[1]) -
                                2.0 * phi * box[1] -
                                4.0 * mu *
                                    (phi * psid[0] + psi[0] * psid[0] +
                                     psi[1] * psid[1]);
      const double closed_lin =
          2.0 * psi[0] * psi[1] * dM12 - 2.0 * phi * ms.M2_sq * psi[1];
      const double closed_full =
          2.0 * psi[0] * psi[1] * (dM12 - 2.0 * lam * phi * phi) -
          2.0 * phi * ms.M2_sq * psi[1];
      const double closed =
          (order == DivergenceOrder::Linearized) ? closed_lin : closed_full;

      rep.max_mismatch =
          std::max(rep.max_mismatch, std::abs(deriv_form - closed_lin));
      rep.max_divergence = std::max(rep.max_divergence, std::abs(closed));
      rep.scale = std::max({rep.scale,
                            std::abs(2.0 * psi[1] * box[0]),
                            std::abs(2.0 * psi[0] * box[1]),
                            std::abs(2.0 * phi * box[1]),
                            std::abs(4.0 * mu * phi * psid[0]),
                            std::abs(2.0 * psi[0] * psi[1] * dM12)});
    }
  }
  if (rep.scale == 0.0) rep.scale = 1.0;
  return rep;
}

namespace {

constexpr double kInvTwoPiSq = 0.050660591821168885722;
constexpr double kAnnulusOuter = 1.25;

// C-infinity step h(1-s)/(h(s)+h(1-s)) with h(t) = exp(-1/t), written in the
// logistic form 1/(1 + e^rho) with rho = 1/(1-s) - 1/s: 1 at s <= 0, 0 at
// s >= 1. The first two derivatives are carried along for the
// integrated-by-parts transform below.
struct StepDerivs {
  double w = 0.0, w1 = 0.0, w2 = 0.0;
};

StepDerivs smoothstep_derivs(double s) {
  if (s <= 0.0) return {1.0, 0.0, 0.0};
  if (s >= 1.0) return {0.0, 0.0, 0.0};
  const double a = 1.0 - s;
  const double rho = 1.0 / a - 1.0 / s;
  // e^rho overflows past ~709; the true values there are flat zeros or ones.
  if (rho > 500.0) return {0.0, 0.0, 0.0};
  if (rho < -500.0) return {1.0, 0.0, 0.0};
  const double r = std::exp(rho);
  const double w = 1.0 / (1.0 + r);
  const double v = r * w * w;  // w (1 - w)
  const double rho1 = 1.0 / (a * a) + 1.0 / (s * s);
  const double rho2 = 2.0 / (a * a * a) - 2.0 / (s * s * s);
  return {w, -rho1 * v, (-rho2 + rho1 * rho1 * (1.0 - 2.0 * w)) * v};
}

// Radial window profile: 1 on the unit ball, smooth roll-off to 0 at 1.25.
double window_profile(double u) {
  if (u <= 1.0) return 1.0;
  if (u >= kAnnulusOuter) return 0.0;
  return smoothstep_derivs((u - 1.0) / (kAnnulusOuter - 1.0)).w;
}

double sinc(double z) {
  if (std::abs(z) < 1e-2) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Fourier transform of the window profile, ghat(q) = 4 pi Int u^2 g(u)
// sinc(qu) du. Below q = 8 this is a closed form over the ball plus an
// adaptive pass over the roll-off annulus. Above, the ball and annulus
// pieces cancel to many digits and their quadrature noise would be amplified
// by q^2 downstream, so the transform is evaluated through two integrations
// by parts instead: q^3 ghat(q) = -4 pi Int (2 g' + u g'') sin(qu) du, whose
// integrand is supported on the annulus alone. Panels split at the zeros of
// sin(qu).
double window_hat(double q) {
  QuadratureConfig cfg;
  cfg.rtol = 1e-13;
  // A panel that straddles a sign change of the integrand cancels to ~1e-13
  // with a round-off floor near 1e-16; the absolute budget must clear that
  // floor or subdivision never terminates.
  cfg.atol = 1e-15;
  if (std::abs(q) < 8.0) {
    double ball;
    if (std::abs(q) < 0.1) {
      const double q2 = q * q;
      ball = 1.0 / 3.0 - q2 / 30.0 + q2 * q2 / 840.0;
    } else {
      ball = (std::sin(q) - q * std::cos(q)) / (q * q * q);
    }
    const auto f = [&](double u) {
      return window_profile(u) * u * u * sinc(q * u);
    };
    const double annulus = integrate_gk(f, 1.0, kAnnulusOuter, cfg).value;
    return 4.0 * M_PI * (ball + annulus);
  }

  const double del = kAnnulusOuter - 1.0;
  const auto fd = [&](double u) {
    const StepDerivs d = smoothstep_derivs((u - 1.0) / del);
    const double g1 = d.w1 / del;
    const double g2 = d.w2 / (del * del);
    return (2.0 * g1 + u * g2) * std::sin(q * u);
  };
  const double period = M_PI / std::abs(q);
  double parts = 0.0;
  double lo = 1.0;
  int k = int(std::ceil(1.0 / period));
  while (lo < kAnnulusOuter) {
    const double hi = std::min(kAnnulusOuter, k * period);
    if (hi > lo) parts += integrate_gk(fd, lo, hi, cfg).value;
    lo = hi;
    ++k;
  }
  return -4.0 * M_PI * parts / (q * q * q);
}

// -(phi/2) (2 pi^2)^-1 Int q^2 ghat(q) H(q/R) dq with
// H(p) = [G+ fhat(w+) - G- fhat(w-)] / dd.
double smeared_pairing(const MassSpectrum& ms, double mu, double phi, double R,
                       const std::function<double(double)>& f_hat,
                       const QuadratureConfig& quad) {
  const auto h_of_p = [&](double p) {
    const double p2 = p * p;
    const double mu2 = mu * mu;
    const double w_sq = p2 + ms.M_sq;
    const double w2_sq = p2 + ms.M2_sq;
    const double dm = ms.dM_sq;
    const double rad = 4.0 * mu2 * (mu2 + w_sq) + dm * dm;
    const double dd = std::sqrt(rad);
    const auto w = omega_pm(p, ms, mu);
    if (dd == 0.0) {
      // Degenerate branches: H collapses to the scalar second derivative.
      return -2.0 * f_hat(w[0]);
    }
    // G(w+^2) = dM^2 + 2 mu^2 - dd written through its conjugate so that the
    // gapless p -> 0 zero is exact.
    const double g_plus = -4.0 * mu2 * w2_sq / (dd + 2.0 * mu2 + dm);
    const double g_minus = dm + 2.0 * mu2 + dd;
    return (g_plus * f_hat(w[0]) - g_minus * f_hat(w[1])) / dd;
  };

  const double q_max = 1200.0;
  const auto integrand = [&](double q) {
    return q * q * window_hat(q) * h_of_p(q / R);
  };
  // The window transform oscillates with period ~2 pi over the whole range;
  // integrate one oscillation per panel instead of bisecting globally.
  const int panels = int(std::ceil(q_max / M_PI));
  // First pass: one Gauss-Kronrod rule per panel to measure the magnitude.
  QuadratureConfig coarse;
  coarse.rtol = 1.0;
  coarse.atol = 1e300;
  double scale = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = k * M_PI;
    const double hi = std::min(q_max, (k + 1) * M_PI);
    scale += std::abs(integrate_gk(integrand, lo, hi, coarse).value);
  }
  // Second pass: adaptive refinement against an absolute budget tied to the
  // measured scale. The window transform and the smearing transform are
  // themselves quadratures whose stopping points shift with q; that jitter
  // puts a pointwise noise floor on the integrand that no amount of
  // subdivision can cross, so the budget must stay above it.
  QuadratureConfig cfg = quad;
  if (cfg.rtol > 1e-12) cfg.rtol = 1e-12;
  cfg.atol = std::max(cfg.atol, 1e-14 * std::max(scale, 1.0));
  double integral = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = k * M_PI;
    const double hi = std::min(q_max, (k + 1) * M_PI);
    integral += integrate_gk(integrand, lo, hi, cfg).value;
  }
  return -0.5 * phi * kInvTwoPiSq * integral;
}

// Normalized even bump on [-eps, eps]; fhat(0) = 1 exactly.
class BumpWindow {
 public:
  explicit BumpWindow(double eps) : eps_(eps) {
    QuadratureConfig cfg;
    cfg.rtol = 1e-13;
    cfg.atol = 1e-16;
    half_mass_ = integrate_gk([](double s) { return bump(s); }, 0.0, 1.0, cfg)
                     .value;
  }

  double operator()(double omega) const {
    QuadratureConfig cfg;
    cfg.rtol = 1e-13;
    // The transform decays below 1e-13 once omega * eps is large; the
    // absolute budget must sit above the quadrature round-off floor there.
    cfg.atol = 1e-15;
    const double we = omega * eps_;
    const auto f = [&](double s) { return bump(s) * std::cos(we * s); };
    return integrate_gk(f, 0.0, 1.0, cfg).value / half_mass_;
  }

 private:
  static double bump(double s) {
    const double r = 1.0 - s * s;
    return (r <= 0.0) ? 0.0 : std::exp(-1.0 / r);
  }
  double eps_;
  double half_mass_;
};

}  // namespace

ChargeCommutator charge_commutator(const MassSpectrum& ms, double mu, double R,
                                   double f_support,
                                   const QuadratureConfig& quad) {
  if (!(R > 0.0)) throw InvalidInput("goldstone: R must be positive");
  double eps = f_support;
  if (eps <= 0.0) {
    const double m1 = std::sqrt(std::max(ms.M1_sq, 1e-300));
    eps = 0.1 / m1;
  }
  ChargeCommutator out;
  out.pre_asymptotic = (R < 2.0 * eps);
  // v1 pairs the frequency-odd channel with the even window: identically 0.
  out.v1 = 0.0;
  const BumpWindow f_hat(eps);
  out.v2 = smeared_pairing(ms, mu, ms.phi, R,
                           [&](double w) { return f_hat(w); }, quad);
  return out;
}

SpectralCheckResult goldstone_spectral_check(
    const MassSpectrum& ms, double mu,
    const std::function<double(double)>& f_hat,
    const std::vector<double>& r_values, const QuadratureConfig& quad) {
  if (r_values.empty()) {
    throw InvalidInput("goldstone: need at least one radius");
  }
  SpectralCheckResult out;

  // R -> infinity limit: the window collapses onto p = 0.
  {
    const double mu2 = mu * mu;
    const double dm = ms.dM_sq;
    const double rad = 4.0 * mu2 * (mu2 + ms.M_sq) + dm * dm;
    const double dd = std::sqrt(rad);
    const auto w0 = omega_pm(0.0, ms, mu);
    double h0;
    if (dd == 0.0) {
      h0 = -2.0 * f_hat(w0[0]);
    } else {
      const double g_plus = -4.0 * mu2 * ms.M2_sq / (dd + 2.0 * mu2 + dm);
      const double g_minus = dm + 2.0 * mu2 + dd;
      h0 = (g_plus * f_hat(w0[0]) - g_minus * f_hat(w0[1])) / dd;
    }
    out.target = -0.5 * ms.phi * h0;
  }

  for (double r : r_values) {
    if (!(r > 0.0)) throw InvalidInput("goldstone: radii must be positive");
    out.points.push_back({r, smeared_pairing(ms, mu, ms.phi, r, f_hat, quad)});
  }
  return out;
}

}  // namespace bec
