#include "bec/runio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bec/errors.hpp"

namespace bec {

namespace {

using ordered_json = nlohmann::ordered_json;

int levenshtein(const std::string& a, const std::string& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<int> prev(nb + 1), cur(nb + 1);
  for (std::size_t j = 0; j <= nb; ++j) prev[j] = int(j);
  for (std::size_t i = 1; i <= na; ++i) {
    cur[0] = int(i);
    for (std::size_t j = 1; j <= nb; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[nb];
}

void check_keys(const ordered_json& obj, const std::vector<std::string>& known,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) != known.end()) continue;
    std::string msg = "config: unknown key \"" + key + "\" in " + where;
    const std::string hint = nearest_key(key, known);
    if (!hint.empty()) msg += "; did you mean \"" + hint + "\"?";
    throw InvalidInput(msg);
  }
}

double get_num(const ordered_json& obj, const std::string& key, double fallback,
               const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw InvalidInput("config: " + where + "." + key + " must be a number");
  }
  return v.get<double>();
}

int get_int(const ordered_json& obj, const std::string& key, int fallback,
            const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw InvalidInput("config: " + where + "." + key + " must be an integer");
  }
  return v.get<int>();
}

GridSpec get_grid(const ordered_json& obj, const GridSpec& fallback,
                  const std::string& where) {
  check_keys(obj, {"lo", "hi", "n"}, where);
  GridSpec g;
  g.lo = get_num(obj, "lo", fallback.lo, where);
  g.hi = get_num(obj, "hi", fallback.hi, where);
  g.n = get_int(obj, "n", fallback.n, where);
  if (g.n < 1) throw InvalidInput("config: " + where + ".n must be >= 1");
  if (g.n > 1 && !(g.hi > g.lo)) {
    throw InvalidInput("config: " + where + " needs hi > lo");
  }
  return g;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> out;
  out.reserve(std::size_t(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  }
  return out;
}

std::string nearest_key(const std::string& unknown,
                        const std::vector<std::string>& known) {
  std::string best;
  int best_dist = 0;
  bool best_prefix = false;
  for (const std::string& k : known) {
    const int d = levenshtein(unknown, k);
    const bool prefix =
        unknown.rfind(k, 0) == 0 || k.rfind(unknown, 0) == 0;
    if (best.empty() || d < best_dist ||
        (d == best_dist && prefix && !best_prefix) ||
        (d == best_dist && prefix == best_prefix && k < best)) {
      best = k;
      best_dist = d;
      best_prefix = prefix;
    }
  }
  const int cutoff = std::max<int>(2, int(unknown.size()) / 2);
  return (best_dist <= cutoff) ? best : std::string();
}

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  check_keys(j,
             {"model", "quadrature", "dispersion", "thermal_scan", "tc_solve",
              "goldstone", "graphs", "hadamard", "decay_fit"},
             "the top level");

  RunConfig cfg;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    check_keys(m, {"m", "mu", "lambda", "beta", "m_v"}, "model");
    cfg.model.m = get_num(m, "m", cfg.model.m, "model");
    cfg.model.mu = get_num(m, "mu", cfg.model.mu, "model");
    cfg.model.lambda = get_num(m, "lambda", cfg.model.lambda, "model");
    cfg.model.beta = get_num(m, "beta", cfg.model.beta, "model");
    cfg.model.m_v = get_num(m, "m_v", cfg.model.m_v, "model");
  }
  cfg.model.validate();

  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    check_keys(q, {"rtol", "atol", "p_cutoff", "max_subdivisions"},
               "quadrature");
    cfg.quad.rtol = get_num(q, "rtol", cfg.quad.rtol, "quadrature");
    cfg.quad.atol = get_num(q, "atol", cfg.quad.atol, "quadrature");
    cfg.quad.p_cutoff = get_num(q, "p_cutoff", cfg.quad.p_cutoff, "quadrature");
    cfg.quad.max_subdivisions = get_int(q, "max_subdivisions",
                                        cfg.quad.max_subdivisions, "quadrature");
    if (!(cfg.quad.rtol > 0.0) || !(cfg.quad.atol >= 0.0)) {
      throw InvalidInput("config: quadrature tolerances must be positive");
    }
    if (cfg.quad.max_subdivisions < 8) {
      throw InvalidInput("config: quadrature.max_subdivisions must be >= 8");
    }
  }

  if (j.contains("dispersion")) {
    cfg.dispersion_p = get_grid(j.at("dispersion"), cfg.dispersion_p,
                                "dispersion");
    if (cfg.dispersion_p.lo < 0.0) {
      throw InvalidInput("config: dispersion momenta must be nonnegative");
    }
  }
  if (j.contains("thermal_scan")) {
    cfg.scan_beta = get_grid(j.at("thermal_scan"), cfg.scan_beta,
                             "thermal_scan");
    if (!(cfg.scan_beta.lo > 0.0)) {
      throw InvalidInput("config: thermal_scan beta values must be positive");
    }
  }
  if (j.contains("tc_solve")) {
    const auto& t = j.at("tc_solve");
    check_keys(t, {"rho_target"}, "tc_solve");
    cfg.tc_rho_target = get_num(t, "rho_target", cfg.tc_rho_target,
                                "tc_solve");
  }
  if (j.contains("goldstone")) {
    const auto& g = j.at("goldstone");
    check_keys(g, {"r", "f_support"}, "goldstone");
    if (g.contains("r")) {
      cfg.goldstone_r = get_grid(g.at("r"), cfg.goldstone_r, "goldstone.r");
    }
    cfg.goldstone_support = get_num(g, "f_support", cfg.goldstone_support,
                                    "goldstone");
    if (!(cfg.goldstone_r.lo > 0.0)) {
      throw InvalidInput("config: goldstone radii must be positive");
    }
  }
  if (j.contains("graphs")) {
    const auto& g = j.at("graphs");
    check_keys(g, {"n_vertices", "max_degree"}, "graphs");
    cfg.graphs_vertices = get_int(g, "n_vertices", cfg.graphs_vertices,
                                  "graphs");
    cfg.graphs_max_degree = get_int(g, "max_degree", cfg.graphs_max_degree,
                                    "graphs");
    if (cfg.graphs_vertices < 1 || cfg.graphs_vertices > 6) {
      throw InvalidInput("config: graphs.n_vertices must be in [1, 6]");
    }
    if (cfg.graphs_max_degree < 0 || cfg.graphs_max_degree > 8) {
      throw InvalidInput("config: graphs.max_degree must be in [0, 8]");
    }
  }
  if (j.contains("hadamard")) {
    cfg.hadamard_x0 = get_grid(j.at("hadamard"), cfg.hadamard_x0, "hadamard");
  }
  if (j.contains("decay_fit")) {
    const auto& d = j.at("decay_fit");
    check_keys(d, {"u_fraction", "r"}, "decay_fit");
    cfg.decay_u_fraction = get_num(d, "u_fraction", cfg.decay_u_fraction,
                                   "decay_fit");
    if (d.contains("r")) {
      cfg.decay_r = get_grid(d.at("r"), cfg.decay_r, "decay_fit.r");
    }
    if (!(cfg.decay_u_fraction > 0.0 && cfg.decay_u_fraction < 1.0)) {
      throw InvalidInput("config: decay_fit.u_fraction must lie in (0, 1)");
    }
    if (!(cfg.decay_r.lo > 0.0)) {
      throw InvalidInput("config: decay_fit radii must be positive");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const RunConfig& cfg) {
  ordered_json j;
  j["model"] = {{"m", cfg.model.m},
                {"mu", cfg.model.mu},
                {"lambda", cfg.model.lambda},
                {"beta", cfg.model.beta},
                {"m_v", cfg.model.m_v}};
  j["quadrature"] = {{"rtol", cfg.quad.rtol},
                     {"atol", cfg.quad.atol},
                     {"p_cutoff", cfg.quad.p_cutoff},
                     {"max_subdivisions", cfg.quad.max_subdivisions}};
  const auto grid = [](const GridSpec& g) {
    return ordered_json{{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}};
  };
  j["dispersion"] = grid(cfg.dispersion_p);
  j["thermal_scan"] = grid(cfg.scan_beta);
  j["tc_solve"] = {{"rho_target", cfg.tc_rho_target}};
  j["goldstone"] = {{"r", grid(cfg.goldstone_r)},
                    {"f_support", cfg.goldstone_support}};
  j["graphs"] = {{"n_vertices", cfg.graphs_vertices},
                 {"max_degree", cfg.graphs_max_degree}};
  j["hadamard"] = grid(cfg.hadamard_x0);
  j["decay_fit"] = {{"u_fraction", cfg.decay_u_fraction},
                    {"r", grid(cfg.decay_r)}};
  return j.dump();
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(cfg))));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  if (header_written_) {
    throw InvalidInput("csv: metadata must precede the header");
  }
  buf_ += "# " + key + ": " + value + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (header_written_) throw InvalidInput("csv: header already written");
  if (columns.empty()) throw InvalidInput("csv: need at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += columns[i];
  }
  buf_ += '\n';
  n_cols_ = columns.size();
  header_written_ = true;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (!header_written_) throw InvalidInput("csv: header must precede rows");
  if (values.size() != n_cols_) {
    throw InvalidInput("csv: row width does not match the header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_double(values[i]);
  }
  buf_ += '\n';
}

void CsvWriter::save(const std::string& path) const {
  write_text_atomic(path, buf_);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw IoError("io: cannot create " + target.parent_path().string() +
                    ": " + ec.message());
    }
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io: cannot open " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw IoError("io: short write to " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    throw IoError("io: cannot move " + tmp.string() + " into place: " +
                  ec.message());
  }
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& command, std::uint64_t seed,
                    int threads,
                    const std::map<std::string, double>& timings_ms) {
  ordered_json j;
  j["tool"] = "bectool";
  j["version"] = "0.1.0";
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = seed;
  j["threads"] = threads;
  j["dependencies"] = {
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  ordered_json t;
  for (const auto& [key, ms] : timings_ms) t[key] = ms;
  j["timings_ms"] = t;
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace bec
