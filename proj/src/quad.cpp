#include "bec/quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>

#include "bec/errors.hpp"

namespace bec {
namespace {

// QUADPACK dqk15 abscissae/weights (positive half; node 7 is the midpoint).
constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double kWg[4] = {0.12948496616886969327, 0.27970539148927666790,
                           0.38183005050511894495, 0.41795918367346938776};

struct Panel {
  double a, b;
  double value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double kron = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * h;
  // QUADPACK-style sharpened error estimate.
  double resabs = 0.0;
  for (int i = 0; i < 7; ++i)
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
  resabs = (resabs + kWgk[7] * std::abs(fv[7])) * std::abs(h);
  double err = std::abs((kron - gauss) * h);
  if (resabs > 0.0 && err > 0.0)
    err = resabs * std::min(1.0, std::pow(200.0 * err / resabs, 1.5));
  p.error = err;
  return p;
}

}  // namespace

QuadResult integrate_gk(const Integrand& f, double a, double b,
                        const QuadratureConfig& cfg) {
  QuadResult res;
  if (a == b) return res;
  std::priority_queue<Panel> heap;
  Panel root = gk15(f, a, b);
  res.evaluations = 15;
  double total = root.value;
  double toterr = root.error;
  heap.push(root);
  int splits = 0;
  while (toterr > std::max(cfg.atol, cfg.rtol * std::abs(total))) {
    if (splits >= cfg.max_subdivisions) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "quadrature: subdivision cap %d reached (err=%.3e, "
                    "target=%.3e, total=%.3e)",
                    cfg.max_subdivisions, toterr,
                    std::max(cfg.atol, cfg.rtol * std::abs(total)), total);
      throw NonConvergence(buf);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      break;  // interval at machine resolution; accept current estimate
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  res.value = total;
  res.abs_error = toterr;
  return res;
}

double integrate(const Integrand& f, double a, double b,
                 const QuadratureConfig& cfg) {
  return integrate_gk(f, a, b, cfg).value;
}

QuadResult integrate_decaying(const Integrand& f, double a, double rate,
                              const QuadratureConfig& cfg) {
  if (!(rate > 0.0)) throw InvalidInput("integrate_decaying: rate must be > 0");
  double P = std::max(cfg.p_cutoff, a + 40.0 / rate);
  QuadResult res = integrate_gk(f, a, P, cfg);
  // Tail bound for |f| ~ C p^k e^{-rate p}, k <= 2, estimated from f(P).
  const double fP = std::abs(f(P));
  const double gp = rate * P;
  double tail = fP / rate * (1.0 + 2.0 / gp + 2.0 / (gp * gp));
  res.abs_error += tail;
  res.evaluations += 1;
  if (res.abs_error > std::max(cfg.atol, 10.0 * cfg.rtol * std::abs(res.value)) &&
      tail > 0.5 * res.abs_error) {
    // Cutoff was too optimistic; extend once before giving up.
    QuadResult ext = integrate_gk(f, P, 2.0 * P, cfg);
    res.value += ext.value;
    res.abs_error = res.abs_error - tail + ext.abs_error;
    res.evaluations += ext.evaluations;
    const double fP2 = std::abs(f(2.0 * P));
    res.abs_error += fP2 / rate * (1.0 + 1.0 / gp + 0.5 / (gp * gp));
  }
  return res;
}

QuadResult integrate_romberg(const Integrand& f, double a, double b,
                             const QuadratureConfig& cfg) {
  QuadResult res;
  if (a == b) return res;
  constexpr int kMaxLevel = 22;
  std::vector<std::vector<double>> R(1);
  double h = b - a;
  double sum = 0.5 * (f(a) + f(b));
  res.evaluations = 2;
  R[0].push_back(sum * h);
  for (int k = 1; k <= kMaxLevel; ++k) {
    h *= 0.5;
    const long n_new = 1L << (k - 1);
    double add = 0.0;
    for (long i = 0; i < n_new; ++i) add += f(a + (2 * i + 1) * h);
    res.evaluations += static_cast<int>(n_new);
    sum += add;
    R.emplace_back();
    R[k].push_back(sum * h);
    double pow4 = 1.0;
    for (int j = 1; j <= k; ++j) {
      pow4 *= 4.0;
      R[k].push_back(R[k][j - 1] +
                     (R[k][j - 1] - R[k - 1][j - 1]) / (pow4 - 1.0));
    }
    const double err = std::abs(R[k][k] - R[k - 1][k - 1]);
    res.value = R[k][k];
    res.abs_error = err;
    if (k >= 4 && err <= std::max(cfg.atol, cfg.rtol * std::abs(res.value)))
      return res;
  }
  throw NonConvergence("romberg: refinement cap reached");
}

QuadResult integrate_oscillatory_sin(const Integrand& f, double r,
                                     double p_max,
                                     const QuadratureConfig& cfg) {
  QuadResult res;
  if (p_max <= 0.0) return res;
  const double pi = 3.14159265358979323846;
  auto g = [&](double p) { return f(p) * std::sin(p * r); };
  if (r <= 0.0 || pi / r >= p_max) {
    return integrate_gk(r <= 0.0 ? f : static_cast<Integrand>(g), 0.0, p_max,
                        cfg);
  }
  // One fixed GK panel per sine half-period; panels are smooth so the
  // Kronrod estimate is sharp without adaptivity.
  const double width = pi / r;
  double a = 0.0;
  while (a < p_max) {
    const double b = std::min(a + width, p_max);
    Panel panel = gk15(g, a, b);
    res.value += panel.value;
    res.abs_error += panel.error;
    res.evaluations += 15;
    a = b;
  }
  return res;
}

GaussLaguerre gauss_laguerre(int n) {
  if (n < 1 || n > 256) throw InvalidInput("gauss_laguerre: order out of range");
  GaussLaguerre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - gl.nodes[i - 2]);
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (p1 - p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, z)) break;
    }
    // Recompute L_{n-1}(z) at the converged node for the weight.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (p1 - p2) / z;
    gl.nodes[i] = z;
    gl.weights[i] = -1.0 / (pp * n * p2);
  }
  return gl;
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, double rtol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw InvalidInput("brent_root: bracket does not change sign");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * rtol * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m;
      e = m;
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double rr = fb / fc;
        p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = b - a;
      d = e;
    }
  }
  throw NonConvergence("brent_root: iteration cap reached");
}

double richardson_even(const std::vector<double>& samples) {
  if (samples.empty()) throw InvalidInput("richardson_even: no samples");
  std::vector<double> row = samples;
  double pow4 = 1.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    pow4 *= 4.0;
    for (std::size_t i = 0; i + k < samples.size(); ++i)
      row[i] = row[i + 1] + (row[i + 1] - row[i]) / (pow4 - 1.0);
  }
  return row[0];
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw InvalidInput("fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  const double ybar = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace bec
