#include "bec/hadamard.hpp"

#include <cmath>

#include "bec/errors.hpp"

namespace bec {

namespace {

constexpr double kSeriesSwitch = 1e-2;

double sinc(double z) {
  if (std::abs(z) < kSeriesSwitch) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
  }
  return std::sin(z) / z;
}

// (cos z - 1)/z, odd in z.
double cosm1_over(double z) {
  if (std::abs(z) < kSeriesSwitch) {
    const double z2 = z * z;
    return z * (-0.5 + z2 / 24.0 - z2 * z2 / 720.0);
  }
  return (std::cos(z) - 1.0) / z;
}

}  // namespace

Mat2C u_coeff(double x0, double mu) {
  Mat2C u;
  u.cI = std::cos(mu * x0);
  u.c2 = cplx(0.0, -std::sin(mu * x0));
  return u;
}

Mat2C v0_coeff(double x0, const MassSpectrum& ms, double mu) {
  const double z = 2.0 * mu * x0;
  Mat2C inner;
  inner.cI = ms.M_sq + mu * mu;
  inner.c3 = ms.dM_sq * sinc(z);
  inner.c1 = ms.dM_sq * cosm1_over(z);
  Mat2C out = u_coeff(x0, mu) * inner;
  out *= cplx(-0.5);
  return out;
}

Mat2C v1_coinciding(const MassSpectrum& ms, double mu) {
  const double m2 = ms.M_sq + mu * mu;
  Mat2C out;
  out.cI = -0.125 * (m2 * m2 + ms.dM_sq * ms.dM_sq);
  out.c3 = -0.25 * (ms.M_sq + mu * mu / 3.0) * ms.dM_sq;
  return out;
}

Mat2C transport_residual(const std::function<Mat2C(double)>& u_fn, double x0,
                         double mu, double h) {
  if (!(h > 0.0)) throw InvalidInput("hadamard: step h must be positive");
  Mat2C diff = u_fn(x0 + h);
  diff -= u_fn(x0 - h);
  diff *= cplx(x0 / h);  // 2 x0 * (central difference)
  Mat2C drift = Mat2C::sigma2() * u_fn(x0);
  drift *= cplx(0.0, 2.0 * mu * x0);
  diff += drift;
  return diff;
}

double rho2_spectral(double M_sq, double m) {
  if (!(m >= 0.0)) throw InvalidInput("hadamard: m must be nonnegative");
  const double threshold = 4.0 * m * m;
  if (M_sq < threshold) {
    throw InvalidInput("hadamard: M^2 below the two-particle threshold");
  }
  if (M_sq == 0.0) return 0.0;
  constexpr double norm = 1.0 / (16.0 * M_PI * M_PI);
  return norm * std::sqrt(1.0 - threshold / M_sq);
}

SpectralShift delta_phi2_first_order(double p_sq, double dm_sq, double m,
                                     double a, const QuadratureConfig& quad) {
  if (!(m >= 0.0)) throw InvalidInput("hadamard: m must be nonnegative");
  if (!(a >= 0.0)) throw InvalidInput("hadamard: a must be nonnegative");
  if (m == 0.0 && a == 0.0) {
    throw InvalidInput(
        "hadamard: massless spectral integral needs a > 0 (otherwise the "
        "M^2 -> 0 end is not integrable)");
  }
  SpectralShift out;
  if (p_sq == 0.0) return out;  // exact zero, no quadrature noise

  const double th = 4.0 * m * m;
  const double t = p_sq;
  const auto g = [&](double msq) { return rho2_spectral(msq, m) / (msq + a); };

  // Maps [0,1) onto [lo, inf); the 1/(1-v)^2 Jacobian tames the 1/M^4 tail.
  const auto tail_integral = [&](double lo, double scale,
                                 const std::function<double(double)>& f) {
    const auto h = [&](double v) {
      const double om = 1.0 - v;
      if (om <= 0.0) return 0.0;
      const double msq = lo + scale * v / om;
      return f(msq) * scale / (om * om);
    };
    return integrate(h, 0.0, 1.0, quad);
  };

  out.on_cut = (-t >= th);
  if (!out.on_cut) {
    const double scale = std::max({th, a, std::abs(t), 1.0});
    const double j =
        tail_integral(th, scale, [&](double msq) { return g(msq) / (msq + t); });
    out.value = dm_sq * t * j;
    return out;
  }

  // On the cut: pole at M^2 = s, principal value by subtracting g(s) on a
  // finite window plus the closed-form log, then the regular tail.
  const double s = -t;
  const double res = g(s);
  const double b = 2.0 * s - th + std::max(1.0, s);
  const double gs_scale = std::max({s, th, a, 1.0});
  // d g / d M^2 at the pole, used when a node lands on top of it. One-sided
  // when the pole sits within a step of the threshold.
  const double hstep = 1e-5 * gs_scale;
  const double gprime = (s - hstep > th)
                            ? (g(s + hstep) - g(s - hstep)) / (2.0 * hstep)
                            : (g(s + hstep) - res) / hstep;
  const auto window = [&](double msq) {
    const double d = msq - s;
    if (std::abs(d) < 1e-9 * gs_scale) return gprime;
    return (g(msq) - res) / d;
  };
  double j_pv = integrate(window, th, b, quad);
  // At s == th the residue vanishes with rho2 and the log term drops.
  if (s > th) j_pv += res * std::log((b - s) / (s - th));
  j_pv += tail_integral(b, std::max(b, 1.0),
                        [&](double msq) { return g(msq) / (msq - s); });
  out.value = dm_sq * t * cplx(j_pv, -M_PI * res);
  return out;
}

}  // namespace bec
