#include <doctest.h>

#include <array>
#include <cmath>

#include "bec/errors.hpp"
#include "bec/model.hpp"
#include "oracles.hpp"

using namespace bec;
using oracles::rel_err;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModelParams{-1.0, 0.0, 1.0, 1.0, 0.0}.validate()),
                  InvalidInput);
  CHECK_THROWS_AS((ModelParams{1.0, 0.0, 0.0, 1.0, 0.0}.validate()),
                  InvalidInput);
  CHECK_THROWS_AS((ModelParams{1.0, 0.0, 1.0, -2.0, 0.0}.validate()),
                  InvalidInput);
  CHECK_THROWS_AS((ModelParams{1.0, -0.5, 1.0, 1.0, 0.0}.validate()),
                  InvalidInput);
  CHECK_THROWS_AS((ModelParams{1.0, 0.0, 1.0, 1.0, -0.1}.validate()),
                  InvalidInput);
  CHECK_NOTHROW((ModelParams{1.0, 0.3, 0.5, 2.0, 0.2}.validate()));
}

TEST_CASE("condensate amplitude") {
  CHECK(condensate_amplitude({1.0, 1.0, 0.5, 1.0, 0.0}) == 0.0);
  CHECK(condensate_amplitude({1.0, 0.3, 1.0, 1.0, 0.0}) == 0.0);
  CHECK(rel_err(condensate_amplitude({1.0, std::sqrt(2.0), 1.0, 1.0, 0.0}),
                1.0) < 1e-14);
  const double phi = condensate_amplitude({1.0, 2.0, 0.3, 1.0, 0.0});
  CHECK(rel_err(phi * phi, 10.0) < 1e-14);
  // The minimizer does not see the virtual-mass split.
  CHECK(condensate_amplitude({1.0, std::sqrt(2.0), 1.0, 1.0, 0.7}) ==
        condensate_amplitude({1.0, std::sqrt(2.0), 1.0, 1.0, 0.0}));
}

TEST_CASE("fluctuation spectrum around the minimizer") {
  const ModelParams params{1.0, std::sqrt(2.0), 1.0, 1.0, 0.0};
  const MassSpectrum ms = mass_spectrum(params);
  CHECK(rel_err(ms.phi, 1.0) < 1e-14);
  CHECK(rel_err(ms.M1_sq, 2.0) < 1e-14);
  CHECK(ms.M2_sq == 0.0);  // snapped exactly in the gapless phase
  CHECK(ms.M_sq == 0.5 * (ms.M1_sq + ms.M2_sq));
  CHECK(ms.dM_sq == 0.5 * (ms.M1_sq - ms.M2_sq));

  const MassSpectrum off = mass_spectrum({1.7, 2.9, 0.83, 1.0, 0.0});
  CHECK(off.M2_sq == 0.0);
  CHECK(rel_err(off.M1_sq, 2.0 * (2.9 * 2.9 - 1.7 * 1.7)) < 1e-13);
}

TEST_CASE("virtual mass opens a gap without moving the condensate") {
  const ModelParams params{1.0, std::sqrt(2.0), 1.0, 1.0, 0.1};
  const MassSpectrum ms = mass_spectrum(params);
  CHECK(rel_err(ms.phi, 1.0) < 1e-14);
  CHECK(rel_err(ms.M1_sq, 2.01) < 1e-13);
  CHECK(rel_err(ms.M2_sq, 0.01) < 1e-12);
}

TEST_CASE("unstable condensate amplitudes are rejected") {
  CHECK_THROWS_AS(mass_spectrum({1.0, 2.0, 1.0, 1.0, 0.0}, 0.1), InvalidInput);
  CHECK_THROWS_AS(mass_spectrum({1.0, 0.5, 1.0, 1.0, 0.0}, -1.0), InvalidInput);
  // Off-shell but stable amplitudes are fine.
  CHECK_NOTHROW(mass_spectrum({1.0, 2.0, 1.0, 1.0, 0.0}, 2.5));
}

TEST_CASE("dispersion branches satisfy the Vieta relations") {
  oracles::Rng rng(77001);
  for (int trial = 0; trial < 300; ++trial) {
    MassSpectrum ms;
    ms.M1_sq = rng.uniform(0.0, 9.0);
    ms.M2_sq = rng.uniform(0.0, ms.M1_sq);
    ms.M_sq = 0.5 * (ms.M1_sq + ms.M2_sq);
    ms.dM_sq = 0.5 * (ms.M1_sq - ms.M2_sq);
    const double mu = rng.uniform(0.0, 3.0);
    const double p = rng.uniform(0.0, 8.0);

    const auto w = omega_pm(p, ms, mu);
    const double w2 = p * p + ms.M_sq;
    const double sum = w[0] * w[0] + w[1] * w[1];
    const double prod = w[0] * w[0] * w[1] * w[1];
    CHECK(rel_err(sum, 2.0 * (w2 + 2.0 * mu * mu)) < 1e-12);
    CHECK(rel_err(prod, (p * p + ms.M1_sq) * (p * p + ms.M2_sq)) < 1e-12);
    CHECK(w[0] >= w[1]);
  }
}

TEST_CASE("decoupled branches at vanishing mass split") {
  // dM^2 = 0: w_pm = sqrt(w^2 + mu^2) -+ ... reduces to sqrt(w^2+mu^2) +- mu.
  MassSpectrum ms;
  ms.M1_sq = ms.M2_sq = ms.M_sq = 1.44;
  ms.dM_sq = 0.0;
  const double mu = 0.8;
  for (double p : {0.0, 0.3, 1.0, 4.0}) {
    const auto w = omega_pm(p, ms, mu);
    const double e = std::sqrt(p * p + ms.M_sq + mu * mu);
    CHECK(rel_err(w[0], e + mu) < 1e-12);
    CHECK(rel_err(w[1], e - mu) < 1e-12);
  }
}

TEST_CASE("gapless branch reaches zero exactly at p = 0") {
  const MassSpectrum ms = mass_spectrum({1.0, std::sqrt(2.0), 1.0, 1.0, 0.0});
  const double mu = std::sqrt(2.0);
  const auto w0 = omega_pm(0.0, ms, mu);
  CHECK(w0[1] == 0.0);
  CHECK(rel_err(w0[0] * w0[0], ms.M1_sq + 4.0 * mu * mu) < 1e-13);

  // Gapped case keeps a positive minimum, pulled below sqrt(M2_sq) by the
  // chemical-potential mixing of the two branches.
  const MassSpectrum gapped = mass_spectrum({1.0, std::sqrt(2.0), 1.0, 1.0, 0.7});
  const double wg = omega_pm(0.0, gapped, mu)[1];
  CHECK(wg > 0.0);
  CHECK(wg < std::sqrt(gapped.M2_sq));
  const double s = gapped.M1_sq + gapped.M2_sq + 4.0 * mu * mu;
  const double prod = gapped.M1_sq * gapped.M2_sq;
  CHECK(rel_err(wg * wg, 0.5 * (s - std::sqrt(s * s - 4.0 * prod))) < 1e-12);
}

TEST_CASE("branches grow monotonically with momentum") {
  const MassSpectrum ms = mass_spectrum({1.0, 2.0, 0.3, 1.0, 0.0});
  const double mu = 2.0;
  double prev_p = 0.0, prev_m = -1.0;
  for (int i = 0; i <= 60; ++i) {
    const auto w = omega_pm(0.1 * i, ms, mu);
    CHECK(w[0] > prev_p);
    CHECK(w[1] > prev_m);
    prev_p = w[0];
    prev_m = w[1];
  }
}

TEST_CASE("sound speed matches the closed forms") {
  {
    const ModelParams params{1.0, std::sqrt(2.0), 1.0, 1.0, 0.0};
    const MassSpectrum ms = mass_spectrum(params);
    const double c = sound_speed(ms, params.mu);
    CHECK(rel_err(c * c, 0.2) < 1e-10);
    CHECK(rel_err(c, sound_speed_closed(params)) < 1e-10);
    CHECK(rel_err(c, sound_speed_closed(ms, params.mu)) < 1e-10);
  }
  {
    const ModelParams params{1.0, 2.0, 0.3, 1.0, 0.0};
    const MassSpectrum ms = mass_spectrum(params);
    const double c = sound_speed(ms, params.mu);
    CHECK(rel_err(c * c, 3.0 / 11.0) < 1e-10);
    CHECK(rel_err(c, sound_speed_closed(params)) < 1e-10);
  }
  // The two closed forms are one identity apart on shell.
  const ModelParams params{1.3, 1.9, 0.7, 1.0, 0.0};
  const MassSpectrum ms = mass_spectrum(params);
  CHECK(rel_err(sound_speed_closed(params), sound_speed_closed(ms, params.mu)) <
        1e-13);
}

TEST_CASE("sound speed requires a gapless spectrum") {
  const MassSpectrum gapped = mass_spectrum({1.0, std::sqrt(2.0), 1.0, 1.0, 0.5});
  CHECK_THROWS_AS(sound_speed(gapped, std::sqrt(2.0)), InvalidInput);
  CHECK_THROWS_AS(sound_speed_closed({1.0, 0.5, 1.0, 1.0, 0.0}), InvalidInput);
}

TEST_CASE("momenta must be physical") {
  const MassSpectrum ms = mass_spectrum({1.0, std::sqrt(2.0), 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(omega_pm(-0.5, ms, 1.0), InvalidInput);
  const Momentum3 p{0.3, -0.4, 1.2};
  CHECK(rel_err(p.norm_sq(), 0.09 + 0.16 + 1.44) < 1e-15);
  const auto via_vec = omega_pm(p, ms, std::sqrt(2.0));
  const auto via_norm = omega_pm(p.norm(), ms, std::sqrt(2.0));
  CHECK(via_vec[0] == via_norm[0]);
  CHECK(via_vec[1] == via_norm[1]);
}
