#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bec/errors.hpp"
#include "bec/goldstone.hpp"
#include "bec/graphs.hpp"
#include "bec/hadamard.hpp"
#include "bec/model.hpp"
#include "bec/runio.hpp"
#include "bec/thermal.hpp"

namespace {

using namespace bec;

struct CliState {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  bool plot = false;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string out_path(const CliState& cli, const std::string& name) {
  return (std::filesystem::path(cli.out_dir) / name).string();
}

void stamp(CsvWriter& csv, const RunConfig& cfg, const CliState& cli,
           const std::string& command) {
  csv.metadata("tool", "bectool 0.1.0");
  csv.metadata("command", command);
  csv.metadata("config_hash", config_hash(cfg));
  csv.metadata("seed", std::to_string(cli.seed));
  csv.metadata("model",
               "m=" + format_double(cfg.model.m) +
                   " mu=" + format_double(cfg.model.mu) +
                   " lambda=" + format_double(cfg.model.lambda) +
                   " beta=" + format_double(cfg.model.beta) +
                   " m_v=" + format_double(cfg.model.m_v));
}

void write_plot_script(const CliState& cli, const std::string& csv_name,
                       const std::string& title) {
  std::string py =
      "import matplotlib\n"
      "matplotlib.use(\"Agg\")\n"
      "import matplotlib.pyplot as plt\n"
      "import numpy as np\n\n"
      "data = np.genfromtxt(\"" + csv_name +
      "\", delimiter=\",\", names=True, comments=\"#\")\n"
      "cols = data.dtype.names\n"
      "fig, ax = plt.subplots()\n"
      "for c in cols[1:]:\n"
      "    ax.plot(data[cols[0]], data[c], label=c)\n"
      "ax.set_xlabel(cols[0])\n"
      "ax.set_title(\"" + title + "\")\n"
      "ax.legend()\n"
      "fig.savefig(\"" + csv_name + ".png\", dpi=150)\n";
  write_text_atomic(out_path(cli, "plot.py"), py);
}

int run_dispersion(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const auto grid = cfg.dispersion_p.points();
  std::vector<std::array<double, 2>> omega(grid.size());
  parallel_for(int(grid.size()), cli.threads, [&](int i) {
    omega[std::size_t(i)] = omega_pm(grid[std::size_t(i)], ms, cfg.model.mu);
  });

  CsvWriter csv;
  stamp(csv, cfg, cli, "dispersion");
  csv.metadata("M1_sq", format_double(ms.M1_sq));
  csv.metadata("M2_sq", format_double(ms.M2_sq));
  csv.header({"p", "omega_plus", "omega_minus"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({grid[i], omega[i][0], omega[i][1]});
  }
  csv.save(out_path(cli, "dispersion.csv"));
  if (cli.plot) write_plot_script(cli, "dispersion.csv", "dispersion branches");
  write_manifest(out_path(cli, "manifest.json"), cfg, "dispersion", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_thermal_scan(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const auto grid = cfg.scan_beta.points();
  std::vector<ThermalObservables> obs(grid.size());
  parallel_for(int(grid.size()), cli.threads, [&](int i) {
    ModelParams p = cfg.model;
    p.beta = grid[std::size_t(i)];
    obs[std::size_t(i)] = thermal_expectations(p, ms, cfg.quad);
  });

  CsvWriter csv;
  stamp(csv, cfg, cli, "thermal-scan");
  csv.header({"beta", "psi_sq", "j_tilde", "rho_cr", "m_b1_sq", "m_b2_sq",
              "condensate_charge"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({grid[i], obs[i].psi_sq, obs[i].j_tilde, obs[i].rho_cr,
             obs[i].m_b1_sq, obs[i].m_b2_sq, obs[i].condensate_charge});
  }
  csv.save(out_path(cli, "thermal_scan.csv"));
  if (cli.plot) write_plot_script(cli, "thermal_scan.csv", "thermal scan");
  write_manifest(out_path(cli, "manifest.json"), cfg, "thermal-scan", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_tc_solve(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  if (!(cfg.tc_rho_target > 0.0)) {
    throw InvalidInput("config: tc_solve.rho_target must be positive");
  }
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const double t_cr =
      critical_temperature(ms, cfg.model.mu, cfg.tc_rho_target, cfg.quad);
  const double rho_back =
      critical_charge_density(ms, cfg.model.mu, 1.0 / t_cr, cfg.quad);

  CsvWriter csv;
  stamp(csv, cfg, cli, "tc-solve");
  csv.header({"rho_target", "t_critical", "beta_critical", "rho_roundtrip"});
  csv.row({cfg.tc_rho_target, t_cr, 1.0 / t_cr, rho_back});
  csv.save(out_path(cli, "tc_solve.csv"));
  write_manifest(out_path(cli, "manifest.json"), cfg, "tc-solve", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_goldstone(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const auto grid = cfg.goldstone_r.points();
  std::vector<ChargeCommutator> vals(grid.size());
  parallel_for(int(grid.size()), cli.threads, [&](int i) {
    vals[std::size_t(i)] =
        charge_commutator(ms, cfg.model.mu, grid[std::size_t(i)],
                          cfg.goldstone_support, cfg.quad);
  });

  CsvWriter csv;
  stamp(csv, cfg, cli, "goldstone");
  csv.metadata("phi", format_double(ms.phi));
  csv.header({"r", "v1", "v2", "pre_asymptotic"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({grid[i], vals[i].v1, vals[i].v2,
             vals[i].pre_asymptotic ? 1.0 : 0.0});
  }
  csv.save(out_path(cli, "goldstone.csv"));
  if (cli.plot) write_plot_script(cli, "goldstone.csv", "smeared commutator");
  write_manifest(out_path(cli, "manifest.json"), cfg, "goldstone", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_graphs(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const std::vector<int> bounds(std::size_t(cfg.graphs_vertices),
                                cfg.graphs_max_degree);
  const auto graphs = enumerate_connected(cfg.graphs_vertices, bounds);

  CsvWriter csv;
  stamp(csv, cfg, cli, "graphs");
  csv.metadata("n_vertices", std::to_string(cfg.graphs_vertices));
  csv.metadata("max_degree", std::to_string(cfg.graphs_max_degree));
  csv.header({"index", "n_edges", "n_lines", "symmetry_factor"});
  std::string json = "[\n";
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    csv.row({double(i), double(graphs[i].edges.size()),
             double(graphs[i].n_lines()), graphs[i].symmetry_factor()});
    json += "  " + graphs[i].adjacency_json();
    json += (i + 1 < graphs.size()) ? ",\n" : "\n";
  }
  json += "]\n";
  csv.save(out_path(cli, "graphs.csv"));
  write_text_atomic(out_path(cli, "graphs.json"), json);
  write_manifest(out_path(cli, "manifest.json"), cfg, "graphs", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_hadamard_check(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const auto grid = cfg.hadamard_x0.points();
  const Mat2C v1 = v1_coinciding(ms, cfg.model.mu);

  CsvWriter csv;
  stamp(csv, cfg, cli, "hadamard-check");
  csv.metadata("v1_cI", format_double(v1.cI.real()));
  csv.metadata("v1_c3", format_double(v1.c3.real()));
  csv.header({"x0", "transport_res_h", "transport_res_h2", "v0_cI_re",
              "v0_cI_im", "v0_c3_re", "v0_c3_im", "v0_c1_re", "v0_c1_im"});
  const auto u_fn = [&](double t) { return u_coeff(t, cfg.model.mu); };
  for (double x0 : grid) {
    const double h = std::max(std::abs(x0), 1e-2) * 1e-4;
    const double res_h =
        transport_residual(u_fn, x0, cfg.model.mu, h).frobenius_norm();
    const double res_h2 =
        transport_residual(u_fn, x0, cfg.model.mu, 0.5 * h).frobenius_norm();
    const Mat2C v0 = v0_coeff(x0, ms, cfg.model.mu);
    csv.row({x0, res_h, res_h2, v0.cI.real(), v0.cI.imag(), v0.c3.real(),
             v0.c3.imag(), v0.c1.real(), v0.c1.imag()});
  }
  csv.save(out_path(cli, "hadamard_check.csv"));
  write_manifest(out_path(cli, "manifest.json"), cfg, "hadamard-check",
                 cli.seed, cli.threads, {{"total", ms_since(start)}});
  return 0;
}

int run_decay_fit(const CliState& cli, const RunConfig& cfg) {
  const auto start = Clock::now();
  const MassSpectrum ms = mass_spectrum(cfg.model);
  const double u = cfg.decay_u_fraction * cfg.model.beta;
  const auto r_grid = cfg.decay_r.points();
  const DecayFit fit = cluster_decay_fit(ms, cfg.model.mu, cfg.model.beta, u,
                                         r_grid, cfg.quad);

  CsvWriter csv;
  stamp(csv, cfg, cli, "decay-fit");
  csv.metadata("u", format_double(u));
  csv.metadata("rate", format_double(fit.rate));
  csv.metadata("r_squared", format_double(fit.r_squared));
  csv.metadata("intercept", format_double(fit.intercept));
  csv.metadata("gap", format_double(std::sqrt(ms.M2_sq)));
  csv.header({"r", "log_max_entry"});
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    csv.row({r_grid[i], fit.log_norms[i]});
  }
  csv.save(out_path(cli, "decay_fit.csv"));
  if (cli.plot) write_plot_script(cli, "decay_fit.csv", "kernel decay");
  write_manifest(out_path(cli, "manifest.json"), cfg, "decay-fit", cli.seed,
                 cli.threads, {{"total", ms_since(start)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bectool: dispersion, thermal and short-distance studies of a "
      "condensed relativistic Bose gas"};
  app.require_subcommand(1);

  CliState cli;
  app.add_option("--config", cli.config_path, "JSON run configuration")
      ->required();
  app.add_option("--out", cli.out_dir, "output directory (default: out)");
  app.add_option("--seed", cli.seed, "seed recorded in run metadata");
  app.add_option("--threads", cli.threads, "worker threads for grid commands")
      ->check(CLI::Range(1, 256));
  app.add_flag("--plot", cli.plot, "write a matplotlib script next to the CSV");

  for (auto* sub :
       {app.add_subcommand("dispersion",
                           "tabulate the two quasi-particle branches"),
        app.add_subcommand(
            "thermal-scan",
            "thermal masses and charge densities over a beta grid"),
        app.add_subcommand(
            "tc-solve",
            "invert the critical charge density for the temperature"),
        app.add_subcommand(
            "goldstone", "smeared charge-field commutator over a radius grid"),
        app.add_subcommand("graphs", "enumerate connected multigraphs"),
        app.add_subcommand(
            "hadamard-check",
            "short-distance coefficients and transport residuals"),
        app.add_subcommand(
            "decay-fit", "exponential decay of the imaginary-time kernel")}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const bec::RunConfig cfg = bec::load_config(cli.config_path);
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "dispersion") return run_dispersion(cli, cfg);
    if (command == "thermal-scan") return run_thermal_scan(cli, cfg);
    if (command == "tc-solve") return run_tc_solve(cli, cfg);
    if (command == "goldstone") return run_goldstone(cli, cfg);
    if (command == "graphs") return run_graphs(cli, cfg);
    if (command == "hadamard-check") return run_hadamard_check(cli, cfg);
    if (command == "decay-fit") return run_decay_fit(cli, cfg);
    std::cerr << "error: unhandled command " << command << "\n";
    return 2;
  } catch (const bec::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bec::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
