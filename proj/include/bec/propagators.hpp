#pragma once

#include <array>
#include <vector>

#include "bec/model.hpp"
#include "bec/pauli.hpp"

namespace bec {

// Momentum-space kinetic operator of the quadratic fluctuation theory in the
// e^{ipx}, p.x = -p0 x0 + p.x convention:
//   Dbar(p0,p) = -(w^2 - p0^2) 1 + dM^2 s3 + 2 mu p0 s2      (conjugate=true)
//   D(p0,p)    = -(w^2 - p0^2) 1 - dM^2 s3 - 2 mu p0 s2      (conjugate=false)
// so D * Dbar = (p0^2 - w_+^2)(p0^2 - w_-^2) 1 (quartic factorization).
// p0 may be complex (analyticity checks); the spatial argument enters only
// through |p|.
Mat2C kinetic_matrix(cplx p0, double p, const MassSpectrum& ms, double mu,
                     bool conjugate);

enum class PropagatorKind { Retarded, Advanced, Feynman };

// Default regulator: 1e-6 times the characteristic energy w_+(p).
double default_epsilon(double p, const MassSpectrum& ms, double mu);

// Pole-resolved propagators:
//   Retarded:  Dbar(p)/(w+^2-w-^2) [1/((p0+ie)^2-w+^2) - 1/((p0+ie)^2-w-^2)]
//   Advanced:  e -> -e
//   Feynman:   i Dbar(p)/(w+^2-w-^2) [1/(p0^2+ie-w+^2) - 1/(p0^2+ie-w-^2)]
// Evaluation closer than epsilon/2 to a shell is rejected: the value there is
// regulator-dominated and never what a caller wants.
Mat2C propagator_matrix(PropagatorKind kind, double p0, double p,
                        const MassSpectrum& ms, double mu,
                        double epsilon = 0.0);

// The commutator function is a genuine distribution; it is represented by
// its four delta shells rather than sampled:
//   Delta(p0,p) = sum_k weight_k delta(p0 - location_k),
// locations (+w+, -w+, +w-, -w-). Weights follow from retarded minus
// advanced via Sokhotski-Plemelj:
//   weight(s, branch) = -2 pi i s (branch) Dbar(s w_b, p) / ((w+^2-w-^2) 2 w_b).
struct DeltaShell {
  double location = 0.0;  // p0 of the shell
  int sign = +1;          // s = sgn(p0)
  int branch = +1;        // +1: w_+ shell, -1: w_- shell
  Mat2C weight;
};

std::array<DeltaShell, 4> commutator_shells(double p, const MassSpectrum& ms,
                                            double mu);

// Thermal (KMS) two-point weights: the distributional kernel
//   omega-hat(p0,p) = sum_k w_k delta(p0 - location_k)
// entering W(x,y) = (2pi)^-3 Int d3p e^{ip.(x-y)} sum_k w_k e^{-i loc_k (x0-y0)}.
// Scalar factors are lambda_{s,branch} = s * branch / ((w+^2-w-^2) 2 w_b)
// times the Bose weight 1/(1 - e^{-beta s w_b}); the matrix factor is
// +Dbar(s w_b, p), fixed by positivity of the diagonal weights and by the
// equal-time commutator normalization.
struct SpectralShell {
  double location = 0.0;
  int sign = +1;
  int branch = +1;
  double omega = 0.0;   // w_branch(p)
  double bose = 0.0;    // 1/(1 - e^{-beta*location})
  double scalar = 0.0;  // lambda including the Bose factor
  Mat2C weight;         // scalar * Dbar(location, p)
};

struct SpectralWeights {
  std::array<SpectralShell, 4> shells;
  // Coinciding-point matrix sum, Int-ready: sum_k weight_k.
  Mat2C coincidence_sum() const;
};

// Requires a strictly positive w_-(p): either M2^2 > 0 or |p| > 0.
SpectralWeights spectral_weights(double p, const MassSpectrum& ms, double mu,
                                 double beta);

}  // namespace bec
