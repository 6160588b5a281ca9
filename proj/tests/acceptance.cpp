// Release gate: every numbered check prints one [PASS]/[FAIL] line with a
// measured figure of merit, and the process exit status is the number of
// failures. Each criterion is self-contained and uses an independent route
// (closed form, brute force, or finite differences) to judge the library.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "bec/errors.hpp"
#include "bec/goldstone.hpp"
#include "bec/graphs.hpp"
#include "bec/hadamard.hpp"
#include "bec/model.hpp"
#include "bec/pauli.hpp"
#include "bec/propagators.hpp"
#include "bec/thermal.hpp"
#include "oracles.hpp"

using namespace bec;
using oracles::rel_err;

namespace {

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return std::string(buf);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

MassSpectrum spectrum_from_masses(double m1_sq, double m2_sq) {
  MassSpectrum ms;
  ms.M1_sq = m1_sq;
  ms.M2_sq = m2_sq;
  ms.M_sq = 0.5 * (m1_sq + m2_sq);
  ms.dM_sq = 0.5 * (m1_sq - m2_sq);
  return ms;
}

// 1. Both Vieta identities of the quartic dispersion polynomial on random
//    spectra and momenta.
std::string criterion_dispersion() {
  oracles::Rng rng(411);
  double worst = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    const double m1 = rng.uniform(0.1, 3.0);
    const double m2 = rng.uniform(0.0, m1);
    const MassSpectrum ms = spectrum_from_masses(m1 * m1, m2 * m2);
    const double mu = rng.uniform(0.0, 2.0);
    const double p = rng.uniform(0.0, 5.0);

    const auto w = omega_pm(p, ms, mu);
    const double w1_sq = p * p + ms.M1_sq;
    const double w2_sq = p * p + ms.M2_sq;
    const double sum = w[0] * w[0] + w[1] * w[1];
    const double sum_expect = w1_sq + w2_sq + 4.0 * mu * mu;
    const double prod = (w[0] * w[0]) * (w[1] * w[1]);
    const double prod_expect = w1_sq * w2_sq;
    worst = std::max(worst, std::abs(sum - sum_expect) / sum_expect);
    worst = std::max(worst,
                     std::abs(prod - prod_expect) /
                         std::max(prod_expect, 1e-30));
  }
  require(worst < 1e-12, strf("Vieta residual %.3e exceeds 1e-12", worst));
  return strf("max rel residual %.3e over %d draws", worst, n);
}

// 2. On-shell condensate: exact gaplessness and the closed-form sound speed
//    against the small-p finite-difference slope.
std::string criterion_goldstone_branch() {
  double worst = 0.0;
  for (const auto& [m, mu] : std::vector<std::pair<double, double>>{
           {1.0, 1.2}, {0.5, 0.9}, {2.0, 2.6}}) {
    const ModelParams params{m, mu, 1.0, 1.0, 0.0};
    const MassSpectrum ms = mass_spectrum(params);
    require(ms.M2_sq == 0.0,
            strf("M2^2 = %.3e is not exactly zero at m=%g mu=%g", ms.M2_sq, m,
                 mu));
    require(omega_pm(0.0, ms, mu)[1] == 0.0, "omega_minus(0) != 0");

    const double fitted = sound_speed(ms, mu);
    const double closed = sound_speed_closed(params);
    worst = std::max(worst, rel_err(fitted, closed));
  }
  require(worst < 0.01, strf("sound speed off by %.3e rel", worst));
  return strf("gapless exactly; slope vs closed form %.3e rel", worst);
}

// 3. The one-loop gap equation reproduces T^2/12 in the light-mass regime
//    and freezes out across three decades of beta.
std::string criterion_thermal_mass() {
  double worst = 0.0;
  for (const auto& [beta, M] : std::vector<std::pair<double, double>>{
           {1.0, 1e-3}, {0.5, 2e-3}, {4.0, 2.5e-4}}) {
    const double val = massless_thermal_mass(1.0, M, beta);
    const double law = 1.0 / (12.0 * beta * beta);
    worst = std::max(worst, rel_err(val, law));
  }
  require(worst < 5e-3, strf("T^2/12 deviation %.3e", worst));

  const double v1 = massless_thermal_mass(1.0, 0.1, 10.0);
  const double v2 = massless_thermal_mass(1.0, 0.1, 100.0);
  const double v3 = massless_thermal_mass(1.0, 0.1, 1000.0);
  require(v1 > v2 && v2 > v3, "thermal mass not decreasing in beta");
  require(v3 < 1e-30 * v1, strf("no freeze-out: ratio %.3e", v3 / v1));
  return strf("T^2/12 within %.2e; freeze-out ratio %.1e", worst, v3 / v1);
}

// 4. The critical charge density falls strictly with beta on a 50-point
//    grid, and the temperature solver inverts it back.
std::string criterion_criticality() {
  const ModelParams params{1.0, 1.2, 1.0, 1.0, 0.0};
  const MassSpectrum ms = mass_spectrum(params);
  const int n = 50;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double beta = 0.3 * std::pow(4.0 / 0.3, double(i) / (n - 1));
    const double rho = critical_charge_density(ms, params.mu, beta);
    require(rho > 0.0, strf("rho_cr(beta=%.3f) not positive", beta));
    require(i == 0 || rho < prev,
            strf("rho_cr not strictly decreasing at beta=%.3f", beta));
    prev = rho;
  }

  const double rho_star = critical_charge_density(ms, params.mu, 1.0);
  const double t_cr = critical_temperature(ms, params.mu, rho_star);
  const double err = rel_err(t_cr, 1.0);
  require(err < 1e-6, strf("round trip rel err %.3e", err));
  return strf("%d-point grid monotone; inversion rel err %.3e", n, err);
}

// 5. Kinetic/propagator contract: the retarded propagator inverts the
//    kinetic matrix with O(eps) residual, the left-right kinetic product is
//    the quartic dispersion polynomial, and the determinant vanishes on all
//    four shells.
std::string criterion_propagators() {
  const MassSpectrum ms = mass_spectrum({1.0, std::sqrt(2.0), 1.0, 1.0, 0.0});
  const double mu = std::sqrt(2.0);
  const double p = 0.8;
  const auto w = omega_pm(p, ms, mu);
  const double p0 = 0.5 * (w[0] + w[1]);
  const auto inv_residual = [&](double eps) {
    Mat2C lhs = kinetic_matrix(cplx(p0), p, ms, mu, false) *
                propagator_matrix(PropagatorKind::Retarded, p0, p, ms, mu, eps);
    lhs -= Mat2C::identity();
    return lhs.frobenius_norm();
  };
  const double r1 = inv_residual(1e-4);
  const double r2 = inv_residual(5e-5);
  require(r1 < 1e-3, strf("inversion residual %.3e too large", r1));
  require(std::abs(r1 / r2 - 2.0) < 0.4,
          strf("residual not O(eps): ratio %.3f", r1 / r2));

  oracles::Rng rng(4155);
  double worst_quartic = 0.0, worst_det = 0.0;
  for (int t = 0; t < 200; ++t) {
    const double m1 = rng.uniform(0.8, 3.0);
    const double m2 = rng.uniform(0.3, m1);
    const MassSpectrum s = spectrum_from_masses(m1 * m1, m2 * m2);
    const double mu_t = rng.uniform(0.1, 2.0);
    const double p_t = rng.uniform(0.0, 4.0);
    const cplx z(rng.uniform(-6.0, 6.0), rng.uniform(-2.0, 2.0));
    const auto sh = omega_pm(p_t, s, mu_t);

    const Mat2C prod = kinetic_matrix(z, p_t, s, mu_t, false) *
                       kinetic_matrix(z, p_t, s, mu_t, true);
    const cplx expect = (z * z - sh[0] * sh[0]) * (z * z - sh[1] * sh[1]);
    const double scale = std::pow(std::norm(z) + sh[0] * sh[0] + 1.0, 2.0);
    worst_quartic = std::max(
        worst_quartic,
        std::max({std::abs(prod.cI - expect), std::abs(prod.c1),
                  std::abs(prod.c2), std::abs(prod.c3)}) /
            scale);
    for (const double loc : {sh[0], sh[1], -sh[0], -sh[1]}) {
      const cplx det = kinetic_matrix(cplx(loc), p_t, s, mu_t, false).det();
      const double det_scale =
          std::pow(loc * loc + p_t * p_t + s.M1_sq + 1.0, 2.0);
      worst_det = std::max(worst_det, std::abs(det) / det_scale);
    }
  }
  require(worst_quartic < 1e-12,
          strf("quartic factorization residual %.3e", worst_quartic));
  require(worst_det < 1e-12, strf("on-shell determinant %.3e", worst_det));
  return strf("inversion O(eps); factorization %.1e; shell det %.1e",
              worst_quartic, worst_det);
}

// Brute-force count of connected multigraphs without self-lines, all vertex
// degrees <= max_degree, by odometer over the pair multiplicities.
int brute_count(int n, int max_degree) {
  std::vector<std::pair<int, int>> slots;
  for (int s = 0; s < n; ++s) {
    for (int r = s + 1; r < n; ++r) slots.emplace_back(s, r);
  }
  std::vector<int> mult(slots.size(), 0);
  int count = 0;
  while (true) {
    std::vector<int> deg(std::size_t(n), 0);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      deg[std::size_t(slots[i].first)] += mult[i];
      deg[std::size_t(slots[i].second)] += mult[i];
    }
    bool ok = true;
    for (int v = 0; v < n; ++v) ok = ok && deg[std::size_t(v)] <= max_degree;
    if (ok) {
      std::vector<int> parent(std::size_t(n), 0);
      std::iota(parent.begin(), parent.end(), 0);
      const auto find = [&](int v) {
        while (parent[std::size_t(v)] != v) v = parent[std::size_t(v)];
        return v;
      };
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (mult[i] > 0) {
          parent[std::size_t(find(slots[i].first))] = find(slots[i].second);
        }
      }
      int roots = 0;
      for (int v = 0; v < n; ++v) roots += find(v) == v;
      if (roots == 1) ++count;
    }
    std::size_t i = 0;
    for (; i < mult.size(); ++i) {
      if (++mult[i] <= max_degree) break;
      mult[i] = 0;
    }
    if (i == mult.size()) break;
  }
  return count;
}

// 6. The connected-graph sum agrees with the moment/cumulant oracle on
//    random Gaussian toys, and enumeration counts match brute force.
std::string criterion_graphs() {
  for (int n = 1; n <= 4; ++n) {
    const auto graphs = enumerate_connected(n, std::vector<int>(std::size_t(n), 4));
    const int expect = brute_count(n, 4);
    require(int(graphs.size()) == expect,
            strf("n=%d: enumerated %zu, brute force %d", n, graphs.size(),
                 expect));
  }

  oracles::Rng rng(2718);
  double worst = 0.0;
  const int n_toys = 200;
  for (int t = 0; t < n_toys; ++t) {
    const int k = rng.uniform_int(1, 3);
    GaussianToyModel toy;
    toy.k = k;
    toy.cov.assign(std::size_t(k) * std::size_t(k), 0.0);
    // Moderate covariance scale keeps the degree-12 moment sums far from
    // the round-off floor of the 1e-10 gate.
    std::vector<double> g(std::size_t(k) * std::size_t(k));
    for (auto& x : g) x = rng.uniform(-0.6, 0.6);
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
          s += g[std::size_t(l * k + i)] * g[std::size_t(l * k + j)];
        }
        toy.cov[std::size_t(i * k + j)] = s;
        toy.cov[std::size_t(j * k + i)] = s;
      }
    }
    const int n_obs = rng.uniform_int(2, 3);
    for (int o = 0; o < n_obs; ++o) {
      Polynomial poly;
      poly.n_vars = k;
      const int n_terms = rng.uniform_int(1, 2);
      for (int term = 0; term < n_terms; ++term) {
        Monomial mono;
        mono.exp.assign(std::size_t(k), 0);
        int budget = 4;
        for (int v = 0; v < k; ++v) {
          const int e = rng.uniform_int(0, std::min(2, budget));
          mono.exp[std::size_t(v)] = e;
          budget -= e;
        }
        mono.coeff = rng.uniform(-2.0, 2.0);
        poly.terms.push_back(mono);
      }
      toy.observables.push_back(poly);
    }

    const double gs = graphsum_truncated(toy);
    const double cm = cumulant_oracle(toy);
    const double rel =
        std::abs(gs - cm) / std::max({1.0, std::abs(gs), std::abs(cm)});
    require(rel <= 1e-10,
            strf("toy %d: graphsum %.16g vs cumulant %.16g", t, gs, cm));
    worst = std::max(worst, rel);
  }
  return strf("counts match for n<=4; %d toys within %.1e", n_toys, worst);
}

// 7. The gapped imaginary-time kernel decays at least as fast as 90% of the
//    gap over an r-window, with a clean exponential fit, at two time
//    separations.
std::string criterion_cluster_decay() {
  const ModelParams params{1.0, 1.2, 1.0, 1.0, 0.7};
  const MassSpectrum ms = mass_spectrum(params);
  const double gap = std::sqrt(ms.M2_sq);
  const std::vector<double> r_grid{2.0, 2.8, 3.6, 4.4, 5.2, 6.0};
  double worst_rate = 1e300, worst_r2 = 1.0;
  for (const double u : {0.3, 0.5}) {
    const DecayFit fit =
        cluster_decay_fit(ms, params.mu, params.beta, u * params.beta, r_grid);
    worst_rate = std::min(worst_rate, fit.rate);
    worst_r2 = std::min(worst_r2, fit.r_squared);
  }
  require(worst_rate >= 0.9 * gap,
          strf("rate %.4f below 0.9*gap=%.4f", worst_rate, 0.9 * gap));
  require(worst_r2 >= 0.98, strf("fit R^2 %.4f below 0.98", worst_r2));
  return strf("rate >= %.3f (0.9*gap %.3f), R^2 >= %.4f", worst_rate,
              0.9 * gap, worst_r2);
}

// 8. Goldstone theorem numerics: the smeared charge commutator converges to
//    (0, phi) and is R-stable, and the current divergence matches its closed
//    forms on plane-wave configurations.
std::string criterion_goldstone_theorem() {
  const ModelParams params{1.0, 1.2, 1.0, 1.0, 0.0};
  const MassSpectrum ms = mass_spectrum(params);

  const ChargeCommutator c10 = charge_commutator(ms, params.mu, 10.0);
  const ChargeCommutator c14 = charge_commutator(ms, params.mu, 14.0);
  require(c10.v1 == 0.0 && c14.v1 == 0.0, "first moment not exactly zero");
  require(!c10.pre_asymptotic && !c14.pre_asymptotic,
          "radii unexpectedly below the causal threshold");
  const double stability = std::abs(c14.v2 - c10.v2);
  require(stability < 1e-8, strf("R-instability %.3e", stability));
  const double phi_err = rel_err(c14.v2, ms.phi);
  require(phi_err < 1e-5, strf("v2 misses phi by %.3e rel", phi_err));

  std::vector<WavePacket> waves;
  const Momentum3 momenta[3] = {
      {0.4, -0.2, 0.1}, {-0.3, 0.5, 0.25}, {0.15, 0.1, -0.45}};
  const double amps[3] = {0.7, 1.1, 0.4};
  for (int i = 0; i < 3; ++i) {
    WavePacket wp;
    wp.mode = plane_wave_mode(i % 2 == 0 ? +1 : -1, momenta[i], ms, params.mu);
    wp.amplitude = amps[i];
    waves.push_back(wp);
  }
  const DivergenceReport lin =
      divergence_residual(waves, params, ms, DivergenceOrder::Linearized);
  require(lin.max_mismatch <= 1e-10 * lin.scale,
          strf("linearized mismatch %.3e rel", lin.max_mismatch / lin.scale));
  const DivergenceReport full =
      divergence_residual(waves, params, ms, DivergenceOrder::Full);
  require(full.max_mismatch <= 1e-10 * full.scale,
          strf("full mismatch %.3e rel", full.max_mismatch / full.scale));
  require(full.max_divergence <= 1e-10 * full.scale,
          strf("full divergence %.3e rel not zero",
               full.max_divergence / full.scale));
  return strf("v2-phi %.1e rel, R-stable %.1e; divergences <= %.1e rel",
              phi_err, stability,
              std::max(lin.max_mismatch / lin.scale,
                       full.max_divergence / full.scale));
}

// 9. Short-distance coefficients: second-order convergence of the transport
//    residual, the coinciding [V1] against a finite-difference application
//    of the transport operator to V0, and the vanishing linear trend of the
//    first-order coincidence shift.
std::string criterion_hadamard() {
  const double mu = 1.1;
  const auto u_fn = [&](double t) { return u_coeff(t, mu); };
  const double res1 = transport_residual(u_fn, 0.7, mu, 0.02).frobenius_norm();
  const double res2 = transport_residual(u_fn, 0.7, mu, 0.01).frobenius_norm();
  const double order = std::log2(res1 / res2);
  require(order >= 1.9, strf("observed order %.3f < 1.9", order));

  const MassSpectrum ms = mass_spectrum({1.0, 1.2, 1.0, 1.0, 0.3});
  const auto v0_fn = [&](double t) { return v0_coeff(t, ms, mu); };
  const double h = 0.005;
  const Mat2C f0 = v0_coeff(0.0, ms, mu);
  const Mat2C f1 = oracles::fd_deriv1(v0_fn, 0.0, h);
  const Mat2C f2 = oracles::fd_deriv2(v0_fn, 0.0, h);
  Mat2C dv0 = f2;
  dv0 *= cplx(-1.0);
  Mat2C drift = Mat2C::sigma2() * f1;
  drift *= cplx(0.0, -2.0 * mu);
  Mat2C mass_i = f0;
  mass_i *= cplx(-ms.M_sq);
  Mat2C mass_3 = Mat2C::sigma3() * f0;
  mass_3 *= cplx(-ms.dM_sq);
  dv0 += drift;
  dv0 += mass_i;
  dv0 += mass_3;
  Mat2C v1_fd = dv0;
  v1_fd *= cplx(-0.25);

  const Mat2C v1 = v1_coinciding(ms, mu);
  const double err_cI = rel_err(v1.cI, v1_fd.cI);
  const double err_c3 = rel_err(v1.c3, v1_fd.c3);
  require(err_cI < 1e-6, strf("[V1] identity channel off by %.3e", err_cI));
  require(err_c3 < 1e-6, strf("[V1] s3 channel off by %.3e", err_c3));
  require(std::abs(v1.c1) == 0.0 && std::abs(v1.c2) == 0.0,
          "[V1] off-diagonal channels not exactly zero");
  const double fd_floor = 1e-6 * std::abs(v1_fd.cI);
  require(std::abs(v1_fd.c1) < fd_floor && std::abs(v1_fd.c2) < fd_floor,
          "finite-difference [V1] leaks into off-diagonal channels");

  const auto s1 = delta_phi2_first_order(1e-3, 0.013, 0.9, 0.4);
  const auto s2 = delta_phi2_first_order(2e-3, 0.013, 0.9, 0.4);
  const auto s0 = delta_phi2_first_order(0.0, 0.013, 0.9, 0.4);
  require(std::abs(s0.value) == 0.0, "shift at p^2=0 not exactly zero");
  require(std::abs(s1.value.imag()) == 0.0, "spacelike shift not real");
  const double ratio = s2.value.real() / s1.value.real();
  require(std::abs(ratio - 2.0) < 0.4,
          strf("scaling ratio %.3f not linear", ratio));
  require(std::abs(s1.value) < 1e-5,
          strf("shift %.3e too large near p^2=0", std::abs(s1.value)));
  return strf("order %.2f; [V1] channels %.1e; shift ratio %.3f", order,
              std::max(err_cI, err_c3), ratio);
}

struct Criterion {
  int index;
  const char* name;
  std::function<std::string()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dispersion Vieta identities", criterion_dispersion},
      {2, "gapless branch and sound speed", criterion_goldstone_branch},
      {3, "thermal mass T^2/12 law and freeze-out", criterion_thermal_mass},
      {4, "critical density monotonicity and inversion", criterion_criticality},
      {5, "kinetic/propagator contract", criterion_propagators},
      {6, "graph sum against the cumulant oracle", criterion_graphs},
      {7, "imaginary-time kernel cluster decay", criterion_cluster_decay},
      {8, "charge commutator and current divergence",
       criterion_goldstone_theorem},
      {9, "short-distance coefficients", criterion_hadamard},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::printf("[%s] criterion %d: %s (%s) [%.0f ms]\n", ok ? "PASS" : "FAIL",
                c.index, c.name, detail.c_str(), ms);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  }
  return failures;
}
