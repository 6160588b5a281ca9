#include "bec/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "bec/errors.hpp"
#include "bec/thermal.hpp"

namespace bec {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

bool LabeledMultigraph::is_connected() const {
  if (n_vertices <= 0) return false;
  if (n_vertices == 1) return true;
  std::vector<int> comp(n_vertices);
  std::iota(comp.begin(), comp.end(), 0);
  const auto root = [&](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  for (const Edge& e : edges) comp[root(e.s)] = root(e.r);
  const int r0 = root(0);
  for (int v = 1; v < n_vertices; ++v) {
    if (root(v) != r0) return false;
  }
  return true;
}

int LabeledMultigraph::degree(int v) const {
  int d = 0;
  for (const Edge& e : edges) {
    if (e.s == v || e.r == v) d += e.mult;
  }
  return d;
}

int LabeledMultigraph::n_lines() const {
  int d = 0;
  for (const Edge& e : edges) d += e.mult;
  return d;
}

double LabeledMultigraph::symmetry_factor() const {
  double f = 1.0;
  for (const Edge& e : edges) f *= factorial(e.mult);
  return f;
}

std::string LabeledMultigraph::adjacency_json() const {
  std::ostringstream os;
  os << "{\"n_vertices\":" << n_vertices << ",\"edges\":[";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) os << ",";
    os << "{\"s\":" << edges[i].s << ",\"r\":" << edges[i].r
       << ",\"mult\":" << edges[i].mult << "}";
  }
  os << "],\"symmetry_factor\":" << symmetry_factor() << "}";
  return os.str();
}

std::vector<LabeledMultigraph> enumerate_connected(
    int n_vertices, const std::vector<int>& max_degree, std::size_t guard) {
  if (n_vertices <= 0) {
    throw InvalidInput("graphs: need at least one vertex");
  }
  if (int(max_degree.size()) != n_vertices) {
    throw InvalidInput("graphs: one degree bound per vertex required");
  }
  for (int b : max_degree) {
    if (b < 0) throw InvalidInput("graphs: degree bounds must be nonnegative");
  }

  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < n_vertices; ++s) {
    for (int r = s + 1; r < n_vertices; ++r) pairs.emplace_back(s, r);
  }

  std::vector<LabeledMultigraph> out;
  std::vector<int> mult(pairs.size(), 0);
  std::vector<int> used(n_vertices, 0);

  const auto emit = [&]() {
    LabeledMultigraph g;
    g.n_vertices = n_vertices;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mult[i] > 0) {
        g.edges.push_back({pairs[i].first, pairs[i].second, mult[i]});
      }
    }
    if (g.is_connected()) {
      if (out.size() >= guard) {
        throw InvalidInput(
            "graphs: enumeration exceeded the guard; tighten the degree "
            "bounds or raise the guard explicitly");
      }
      out.push_back(std::move(g));
    }
  };

  const auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == pairs.size()) {
      emit();
      return;
    }
    const auto [s, r] = pairs[idx];
    const int cap =
        std::min(max_degree[s] - used[s], max_degree[r] - used[r]);
    for (int m = 0; m <= std::max(cap, 0); ++m) {
      mult[idx] = m;
      used[s] += m;
      used[r] += m;
      self(self, idx + 1);
      used[s] -= m;
      used[r] -= m;
    }
    mult[idx] = 0;
  };
  rec(rec, 0);
  return out;
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& m : terms) {
    d = std::max(d, std::accumulate(m.exp.begin(), m.exp.end(), 0));
  }
  return d;
}

double Polynomial::constant_term() const {
  double c = 0.0;
  for (const Monomial& m : terms) {
    if (std::all_of(m.exp.begin(), m.exp.end(), [](int e) { return e == 0; }))
      c += m.coeff;
  }
  return c;
}

namespace {

void validate_toy(const GaussianToyModel& toy) {
  if (toy.k <= 0) throw InvalidInput("graphs: toy model needs k >= 1 modes");
  if (toy.cov.size() != std::size_t(toy.k) * toy.k) {
    throw InvalidInput("graphs: covariance must be k x k");
  }
  for (int a = 0; a < toy.k; ++a) {
    for (int b = 0; b < a; ++b) {
      if (toy.cov_at(a, b) != toy.cov_at(b, a)) {
        throw InvalidInput("graphs: covariance must be symmetric");
      }
    }
  }
  if (toy.observables.empty()) {
    throw InvalidInput("graphs: need at least one observable");
  }
  for (const Polynomial& p : toy.observables) {
    if (p.n_vars != toy.k) {
      throw InvalidInput("graphs: observable arity must match k");
    }
    for (const Monomial& m : p.terms) {
      if (int(m.exp.size()) != toy.k) {
        throw InvalidInput("graphs: monomial arity must match k");
      }
      for (int e : m.exp) {
        if (e < 0) throw InvalidInput("graphs: exponents must be nonnegative");
      }
    }
  }
}

// Sum over assignments of one (a, b) index pair per line, each vertex
// consuming its remaining exponent budget exactly; the value is
// sum prod K_{a_l b_l} over complete assignments.
double line_assignment_sum(const GaussianToyModel& toy,
                           const std::vector<std::pair<int, int>>& lines,
                           std::vector<std::vector<int>>& rem,
                           std::size_t idx, std::size_t& work,
                           std::size_t guard) {
  if (++work > guard) {
    throw InvalidInput("graphs: contraction sum exceeded the work guard");
  }
  if (idx == lines.size()) {
    for (const auto& r : rem) {
      for (int e : r) {
        if (e != 0) return 0.0;
      }
    }
    return 1.0;
  }
  const auto [i, j] = lines[idx];
  double total = 0.0;
  for (int a = 0; a < toy.k; ++a) {
    if (rem[i][a] == 0) continue;
    for (int b = 0; b < toy.k; ++b) {
      if (rem[j][b] == 0) continue;
      const double kab = toy.cov_at(a, b);
      if (kab == 0.0) continue;
      --rem[i][a];
      --rem[j][b];
      total += kab * line_assignment_sum(toy, lines, rem, idx + 1, work, guard);
      ++rem[i][a];
      ++rem[j][b];
    }
  }
  return total;
}

double graph_value(const GaussianToyModel& toy, const LabeledMultigraph& g,
                   std::size_t& work, std::size_t guard) {
  std::vector<std::pair<int, int>> lines;
  for (const Edge& e : g.edges) {
    for (int l = 0; l < e.mult; ++l) lines.emplace_back(e.s, e.r);
  }
  const int n = int(toy.observables.size());

  // One monomial per vertex; its exponent vector must match the graph
  // degree exactly or the derivative at zero vanishes.
  double total = 0.0;
  std::vector<const Monomial*> choice(n, nullptr);
  const auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      double coeff = 1.0;
      std::vector<std::vector<int>> rem(n);
      for (int i = 0; i < n; ++i) {
        coeff *= choice[i]->coeff;
        rem[i] = choice[i]->exp;
        for (int e : choice[i]->exp) coeff *= factorial(e);
      }
      total += coeff * line_assignment_sum(toy, lines, rem, 0, work, guard);
      return;
    }
    const int want = g.degree(v);
    for (const Monomial& m : toy.observables[v].terms) {
      if (std::accumulate(m.exp.begin(), m.exp.end(), 0) != want) continue;
      choice[v] = &m;
      self(self, v + 1);
    }
  };
  rec(rec, 0);
  return total / g.symmetry_factor();
}

}  // namespace

double graphsum_truncated(const GaussianToyModel& toy, std::size_t guard) {
  validate_toy(toy);
  const int n = int(toy.observables.size());
  if (n == 1) return toy.observables[0].constant_term();

  std::vector<int> bounds;
  bounds.reserve(n);
  for (const Polynomial& p : toy.observables) bounds.push_back(p.degree());
  const auto graphs = enumerate_connected(n, bounds, guard);

  std::size_t work = 0;
  double total = 0.0;
  for (const LabeledMultigraph& g : graphs) {
    total += graph_value(toy, g, work, guard);
  }
  return total;
}

namespace {

using SparsePoly = std::map<std::vector<int>, double>;

SparsePoly to_sparse(const Polynomial& p) {
  SparsePoly out;
  for (const Monomial& m : p.terms) {
    if (m.coeff != 0.0) out[m.exp] += m.coeff;
  }
  return out;
}

SparsePoly sparse_product(const SparsePoly& a, const SparsePoly& b, int k) {
  SparsePoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(k);
      for (int v = 0; v < k; ++v) e[v] = ea[v] + eb[v];
      out[e] += ca * cb;
    }
  }
  return out;
}

// L P = sum_ab K_ab d_a d_b P.
SparsePoly contraction_operator(const SparsePoly& p,
                                const GaussianToyModel& toy) {
  SparsePoly out;
  for (const auto& [e, c] : p) {
    for (int a = 0; a < toy.k; ++a) {
      if (e[a] == 0) continue;
      for (int b = 0; b < toy.k; ++b) {
        std::vector<int> e2 = e;
        --e2[a];
        if (e2[b] == 0) continue;
        const double kab = toy.cov_at(a, b);
        if (kab == 0.0) continue;
        const double factor = double(e[a]) * double(e2[b]);
        --e2[b];
        out[e2] += c * kab * factor;
        ++e2[b];
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = (it->second == 0.0) ? out.erase(it) : std::next(it);
  }
  return out;
}

// exp(-L/2) P: inverse of Wick ordering with respect to the covariance.
SparsePoly unorder(const SparsePoly& p, const GaussianToyModel& toy) {
  SparsePoly out = p;
  SparsePoly term = p;
  for (int j = 1; !term.empty(); ++j) {
    term = contraction_operator(term, toy);
    const double scale = -0.5 / j;
    for (auto& [e, c] : term) {
      c *= scale;
      out[e] += c;
    }
  }
  return out;
}

// Gaussian moment of a monomial by recursive pairing, memoized.
double gaussian_moment(const std::vector<int>& exp, const GaussianToyModel& toy,
                       std::map<std::vector<int>, double>& memo) {
  const int total = std::accumulate(exp.begin(), exp.end(), 0);
  if (total == 0) return 1.0;
  if (total % 2 != 0) return 0.0;
  const auto it = memo.find(exp);
  if (it != memo.end()) return it->second;

  int v = 0;
  while (exp[v] == 0) ++v;
  std::vector<int> rest = exp;
  --rest[v];
  double total_val = 0.0;
  for (int u = 0; u < toy.k; ++u) {
    if (rest[u] == 0) continue;
    const double kvu = toy.cov_at(v, u);
    if (kvu == 0.0) continue;
    std::vector<int> next = rest;
    --next[u];
    total_val += kvu * double(rest[u]) * gaussian_moment(next, toy, memo);
  }
  memo[exp] = total_val;
  return total_val;
}

double gaussian_mean(const SparsePoly& p, const GaussianToyModel& toy,
                     std::map<std::vector<int>, double>& memo) {
  double total = 0.0;
  for (const auto& [e, c] : p) total += c * gaussian_moment(e, toy, memo);
  return total;
}

// All partitions of {0..n-1} as lists of blocks.
void partitions_rec(int n, int i, std::vector<std::vector<int>>& blocks,
                    std::vector<std::vector<std::vector<int>>>& out) {
  if (i == n) {
    out.push_back(blocks);
    return;
  }
  // Index loop: the recursive call grows and shrinks `blocks`, so any
  // reference into it would dangle across the call.
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].push_back(i);
    partitions_rec(n, i + 1, blocks, out);
    blocks[b].pop_back();
  }
  blocks.push_back({i});
  partitions_rec(n, i + 1, blocks, out);
  blocks.pop_back();
}

}  // namespace

double cumulant_oracle(const GaussianToyModel& toy) {
  validate_toy(toy);
  const int n = int(toy.observables.size());
  if (n > 6) {
    throw InvalidInput("graphs: cumulant oracle supports up to 6 observables");
  }
  int total_degree = 0;
  for (const Polynomial& p : toy.observables) total_degree += p.degree();
  if (total_degree > 16) {
    throw InvalidInput(
        "graphs: total degree above 16; the moment enumeration would "
        "explode");
  }

  std::vector<SparsePoly> plain;
  plain.reserve(n);
  for (const Polynomial& p : toy.observables) {
    plain.push_back(unorder(to_sparse(p), toy));
  }

  std::map<std::vector<int>, double> memo;
  const auto block_moment = [&](const std::vector<int>& block) {
    SparsePoly prod = plain[block[0]];
    for (std::size_t i = 1; i < block.size(); ++i) {
      prod = sparse_product(prod, plain[block[i]], toy.k);
    }
    return gaussian_mean(prod, toy, memo);
  };

  std::vector<std::vector<std::vector<int>>> parts;
  std::vector<std::vector<int>> blocks;
  partitions_rec(n, 0, blocks, parts);

  double cumulant = 0.0;
  for (const auto& part : parts) {
    double prod = 1.0;
    for (const auto& block : part) prod *= block_moment(block);
    const int nb = int(part.size());
    const double sign = (nb % 2 == 1) ? 1.0 : -1.0;
    cumulant += sign * factorial(nb - 1) * prod;
  }
  return cumulant;
}

ReorderedConfiguration kms_reorder(const std::vector<double>& u,
                                   const std::vector<std::array<double, 3>>& x,
                                   int m, double beta) {
  const int n = int(u.size());
  if (n == 0 || x.size() != u.size()) {
    throw InvalidInput("graphs: reorder needs matching nonempty u and x");
  }
  if (!(beta > 0.0)) throw InvalidInput("graphs: beta must be positive");
  if (m < 1 || m > n) throw InvalidInput("graphs: pivot m must be in [1, n]");
  for (int i = 0; i < n; ++i) {
    if (!(u[i] >= 0.0 && u[i] < beta)) {
      throw InvalidInput("graphs: u values must lie in [0, beta)");
    }
    if (i > 0 && u[i] < u[i - 1]) {
      throw InvalidInput("graphs: u values must be ordered");
    }
  }

  const int pivot = m - 1;
  ReorderedConfiguration out;
  out.v.reserve(n);
  out.y.reserve(n);
  const auto push = [&](double t, const std::array<double, 3>& pos) {
    out.v.push_back(t);
    out.y.push_back({pos[0] - x[pivot][0], pos[1] - x[pivot][1],
                     pos[2] - x[pivot][2]});
  };
  for (int i = pivot + 1; i < n; ++i) push(u[i] - u[pivot], x[i]);
  push(beta - u[pivot], {0.0, 0.0, 0.0});  // the old origin re-enters here
  for (int i = 0; i < pivot; ++i) push(beta - u[pivot] + u[i], x[i]);
  return out;
}

DecayFit cluster_decay_fit(const MassSpectrum& ms, double mu, double beta,
                           double u, const std::vector<double>& r_grid,
                           const QuadratureConfig& quad) {
  if (r_grid.size() < 3) {
    throw InvalidInput("graphs: decay fit needs at least three radii");
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && r_grid[i] <= r_grid[i - 1])) {
      throw InvalidInput("graphs: radii must be positive and increasing");
    }
  }

  DecayFit fit;
  fit.log_norms.reserve(r_grid.size());
  for (double r : r_grid) {
    const Mat2C k = kms_kernel_imag_time(u, r, ms, mu, beta, quad);
    const double norm = k.max_abs_entry();
    if (!(norm > 0.0)) {
      throw NonConvergence("graphs: kernel magnitude underflowed the window");
    }
    fit.log_norms.push_back(std::log(norm));
  }
  for (std::size_t i = 1; i < fit.log_norms.size(); ++i) {
    if (fit.log_norms[i] >= fit.log_norms[i - 1]) {
      throw NonConvergence(
          "graphs: kernel magnitude is not monotonically decaying over the "
          "requested window");
    }
  }
  const LinearFit line = fit_line(r_grid, fit.log_norms);
  fit.rate = -line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  if (fit.r_squared < 0.98) {
    throw NonConvergence(
        "graphs: kernel decay is not exponential over the window (R^2 < "
        "0.98); move the window outward");
  }
  return fit;
}

}  // namespace bec
