#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bec/model.hpp"
#include "bec/pauli.hpp"
#include "bec/quad.hpp"

namespace bec {

// One on-shell plane-wave solution of the linearized fluctuation equations:
// the null vector of D-hat(omega_branch(p), p), normalized to unit length
// with the first nonvanishing component real positive. degenerate marks the
// mu = 0, dM^2 = 0 point where the branches coincide and the vector is fixed
// by the decoupling convention ((1,0) for +, (0,1) for -).
struct PlaneWaveMode {
  int branch = +1;
  Momentum3 p;
  double omega = 0.0;
  std::array<cplx, 2> v{};
  bool degenerate = false;
};

PlaneWaveMode plane_wave_mode(int branch, const Momentum3& p,
                              const MassSpectrum& ms, double mu);

// Real field configuration psi_i = sum_w amp_w Re[v_i e^{i(p.x - omega t)}].
struct WavePacket {
  PlaneWaveMode mode;
  double amplitude = 1.0;
};

// The U(1) current of the shifted theory,
//   J^mu = 2(psi2 d^mu psi1 - psi1 d^mu psi2) - 2 phi d^mu psi2
//          - 4 mu delta^{mu 0} (phi psi1 + (psi1^2 + psi2^2)/2),
// has the purely algebraic divergence
//   d.J = 2 psi1 psi2 (M1^2 - M2^2) - 2 phi M2^2 psi2          (linearized)
//   d.J = 2 psi1 psi2 (M1^2 - M2^2 - 2 lambda phi^2)
//         - 2 phi M2^2 psi2                                    (full)
// once the respective equations of motion are used. max_mismatch compares
// the derivative form against the linearized closed form on plane-wave
// configurations (an exact identity); max_divergence is the closed form of
// the requested order. On the on-shell condensate both full-order terms
// vanish identically.
enum class DivergenceOrder { Linearized, Full };

struct DivergenceReport {
  double max_mismatch = 0.0;
  double max_divergence = 0.0;
  double scale = 0.0;  // largest individual term, for relative comparisons
};

DivergenceReport divergence_residual(const std::vector<WavePacket>& waves,
                                     const ModelParams& params,
                                     const MassSpectrum& ms,
                                     DivergenceOrder order);

// Smeared charge-field commutator (1/2i) <[Q_{f,R}, psi_n(0)]> in the KMS
// state, with Q built from the current above, a normalized even C-infinity
// bump f of half-width f_support in time (default 0.1/M1) and the radial
// plateau window g(|x|/R). Evaluated in momentum space:
//   v2(R) = -(phi/2) (2 pi^2)^-1 Int q^2 ghat(q) H(q/R) dq,
//   H(p) = [G(w+^2) fhat(w+) - G(w-^2) fhat(w-)] / ((w+^2 - w-^2)/2),
//   G(x) = w^2 + dM^2 + 4 mu^2 - x.
// v1 vanishes identically (odd frequency channel against an even window).
// For a gapless spectrum v2 -> phi as R grows; the value is R-independent
// for R beyond the bump support (causality), so pre_asymptotic flags the
// window R < 2 f_support where the plateau has not yet formed.
struct ChargeCommutator {
  double v1 = 0.0;
  double v2 = 0.0;
  bool pre_asymptotic = false;
};

ChargeCommutator charge_commutator(const MassSpectrum& ms, double mu, double R,
                                   double f_support = 0.0,
                                   const QuadratureConfig& quad = {});

// The same pairing against a caller-supplied even frequency window fhat
// (not necessarily of compact support in time), evaluated on a grid of
// radii. target is the R -> infinity limit -(phi/2) H(0).
struct SpectralCheckPoint {
  double R = 0.0;
  double value = 0.0;
};

struct SpectralCheckResult {
  std::vector<SpectralCheckPoint> points;
  double target = 0.0;
};

SpectralCheckResult goldstone_spectral_check(
    const MassSpectrum& ms, double mu,
    const std::function<double(double)>& f_hat,
    const std::vector<double>& r_values, const QuadratureConfig& quad = {});

}  // namespace bec
