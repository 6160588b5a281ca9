#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bec/model.hpp"
#include "bec/quad.hpp"

namespace bec {

// Inclusive linear grid.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  std::vector<double> points() const;
};

// Everything a run needs, parsed from one JSON document. Blocks that a
// command does not use are simply ignored by it; unknown keys anywhere are
// rejected with a nearest-known-key suggestion.
struct RunConfig {
  ModelParams model;
  QuadratureConfig quad;

  GridSpec dispersion_p{0.0, 5.0, 51};
  GridSpec scan_beta{0.5, 5.0, 19};
  double tc_rho_target = 0.0;  // required by tc-solve
  GridSpec goldstone_r{5.0, 40.0, 4};
  double goldstone_support = 0.0;  // 0: default bump half-width 0.1/M1
  int graphs_vertices = 3;
  int graphs_max_degree = 4;
  GridSpec hadamard_x0{0.01, 0.2, 8};
  double decay_u_fraction = 0.5;  // u = fraction * beta
  GridSpec decay_r{2.0, 6.0, 8};
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical reserialization with every field materialized in fixed order;
// the hash is over this form, so formatting of the input does not matter.
std::string canonical_json(const RunConfig& cfg);
std::uint64_t fnv1a64(std::string_view s);
std::string config_hash(const RunConfig& cfg);

// Shortest-edit-distance suggestion helper for unknown keys.
std::string nearest_key(const std::string& unknown,
                        const std::vector<std::string>& known);

// Locale-independent float formatting at 17 significant digits.
std::string format_double(double v);

// '#'-metadata lines, one header row, then data rows. Bodies are
// byte-reproducible for identical configs.
class CsvWriter {
 public:
  void metadata(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  const std::string& text() const { return buf_; }
  void save(const std::string& path) const;

 private:
  std::string buf_;
  std::size_t n_cols_ = 0;
  bool header_written_ = false;
};

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a half-written artifact. Throws IoError on failure.
void write_text_atomic(const std::string& path, const std::string& content);

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& command, std::uint64_t seed,
                    int threads,
                    const std::map<std::string, double>& timings_ms);

// Index-parallel map with deterministic slot assignment; the first exception
// wins and is rethrown on the caller thread.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        if (failed.load()) return;
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bec
