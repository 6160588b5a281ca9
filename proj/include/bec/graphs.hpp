#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bec/model.hpp"
#include "bec/quad.hpp"

namespace bec {

// Connected labeled multigraphs without self-lines: the index objects of the
// cluster expansion. Vertices are 0..n-1; an Edge holds the multiplicity of
// the lines joining s < r.
struct Edge {
  int s = 0;
  int r = 0;
  int mult = 1;
};

struct LabeledMultigraph {
  int n_vertices = 0;
  std::vector<Edge> edges;  // sorted by (s, r), mult >= 1

  bool is_connected() const;
  int degree(int v) const;
  int n_lines() const;
  double symmetry_factor() const;  // prod over vertex pairs of mult!
  std::string adjacency_json() const;
};

// All connected multigraphs with degree(v) <= max_degree[v]. Deterministic
// lexicographic order. Throws when the count would exceed the guard.
std::vector<LabeledMultigraph> enumerate_connected(
    int n_vertices, const std::vector<int>& max_degree,
    std::size_t guard = 2000000);

// Toy Gaussian models for cross-checking the expansion: k modes with
// covariance K, observables polynomial in the modes and Wick ordered
// with respect to K.
struct Monomial {
  std::vector<int> exp;  // one exponent per mode
  double coeff = 0.0;
};

struct Polynomial {
  int n_vars = 0;
  std::vector<Monomial> terms;

  int degree() const;
  // Coefficient of the zero-exponent monomial.
  double constant_term() const;
};

struct GaussianToyModel {
  int k = 0;
  std::vector<double> cov;  // row-major k x k, symmetric
  std::vector<Polynomial> observables;

  double cov_at(int a, int b) const { return cov[std::size_t(a) * k + b]; }
};

// Truncated (= joint connected) correlation function of the observables,
// summed over connected tadpole-free multigraphs: each line carries one
// contraction sum_ab K_ab d_a x d_b between its endpoints, each graph is
// divided by its symmetry factor, and the vertex factors are the derivatives
// of the observables at zero. A single observable reduces to its Gaussian
// mean, i.e. the constant term.
double graphsum_truncated(const GaussianToyModel& toy,
                          std::size_t guard = 2000000);

// The same cumulant through moments: un-Wick-order each observable, take
// Gaussian moments of products by pair enumeration, then combine moments
// into the joint cumulant by Moebius inversion over set partitions.
// Independent of the graph path; total degree after expansion is capped
// at 16.
double cumulant_oracle(const GaussianToyModel& toy);

// Cyclic KMS rotation of an ordered imaginary-time configuration
// 0 <= u_1 <= ... <= u_n < beta with spatial labels x_i: vertex m becomes
// the new origin, the old origin re-enters at beta - u_m with label -x_m.
struct ReorderedConfiguration {
  std::vector<double> v;
  std::vector<std::array<double, 3>> y;
};

ReorderedConfiguration kms_reorder(const std::vector<double>& u,
                                   const std::vector<std::array<double, 3>>& x,
                                   int m, double beta);

// Exponential-decay fit of the imaginary-time kernel magnitude over an
// r-window (the quantity controlling convergence of the cluster expansion).
// rate is the decay constant of max-entry |K(u, r)|; the fit must look
// exponential (monotone, R^2 >= 0.98) or NonConvergence is thrown.
struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  double intercept = 0.0;
  std::vector<double> log_norms;
};

DecayFit cluster_decay_fit(const MassSpectrum& ms, double mu, double beta,
                           double u, const std::vector<double>& r_grid,
                           const QuadratureConfig& quad = {});

}  // namespace bec
