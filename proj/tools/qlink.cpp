// qlink: link budgets, sweeps, antenna design and Monte Carlo verification
// for a thermal microwave waveguide link read out by a loop antenna.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlink/design.hpp"
#include "qlink/error.hpp"
#include "qlink/io/config.hpp"
#include "qlink/io/records.hpp"
#include "qlink/langevin_mc.hpp"

namespace {

using namespace qlink;
using io::Json;

enum Exit : int {
  kOk = 0,
  kConfigError = 2,
  kPhysicsError = 3,
  kInfeasible = 4,
  kStatisticalFailure = 5,
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
    case ErrorCode::StabilityViolation:
      return kConfigError;
    case ErrorCode::EvanescentMode:
    case ErrorCode::NonphysicalAttenuation:
    case ErrorCode::UndefinedSnr:
    case ErrorCode::EtaOutOfRange:
      return kPhysicsError;
    case ErrorCode::Infeasible:
      return kInfeasible;
  }
  return kConfigError;
}

struct CommonArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string format;
  std::string output;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", args.config, "JSON scenario config")
                  ->check(CLI::ExistingFile);
  if (config_required) opt->required();
  cmd->add_option("--set", args.sets, "Override a config field: dotted.key=value")
      ->allow_extra_args(false);
  cmd->add_option("-f,--format", args.format, "Output format (overrides output.format)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", args.output, "Output path (overrides output.path)");
}

io::ScenarioConfig load(const CommonArgs& args, std::vector<std::string> extra) {
  std::vector<std::string> overrides = args.sets;
  if (!args.format.empty()) overrides.push_back("output.format=\"" + args.format + "\"");
  if (!args.output.empty()) overrides.push_back("output.path=" + Json(args.output).dump());
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  return io::load_config(args.config, overrides);
}

// Writes to output.path, or standard output when no path is set. Returns true
// when the data went to a file.
bool emit(const io::ScenarioConfig& cfg, const std::string& content) {
  if (cfg.output.path.empty()) {
    std::cout << content << std::flush;
    return false;
  }
  std::ofstream out(cfg.output.path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + cfg.output.path + "'");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::InvalidConfig, "failed writing '" + cfg.output.path + "'");
  return true;
}

io::Provenance provenance_of(const design::Scenario& s) {
  return {s.attenuation_model, s.waveguide.wall, std::nullopt};
}

int run_link_budget(const CommonArgs& args) {
  const auto cfg = load(args, {});
  const auto scenario = cfg.scenario();
  const auto budget = design::evaluate_link_budget(scenario);

  std::ostringstream out;
  if (cfg.output.format == io::OutputFormat::Json) {
    out << io::dump_json(io::result_record("link-budget", cfg, io::link_budget_json(budget),
                                           provenance_of(scenario)));
  } else {
    io::write_link_budget_csv(out, budget);
  }
  if (emit(cfg, out.str())) {
    const auto& t = budget.transport;
    std::cout << "Ms = " << io::format_double(t.Ms) << ", Mn = " << io::format_double(t.Mn)
              << ", SNR = " << io::format_double(t.snr_db) << " dB";
    if (budget.detection)
      std::cout << ", eta = " << io::format_double(budget.detection->eta)
                << ", Ns = " << io::format_double(budget.detection->Ns)
                << ", Nn = " << io::format_double(budget.detection->Nn);
    else if (budget.zero_length)
      std::cout << ", Nn = 0 (zero length)";
    std::cout << "\n";
  }
  if (budget.detection && budget.detection->eta_warning())
    std::cerr << "qlink: warning: eta = " << budget.detection->eta << " exceeds "
              << kEtaWarningThreshold << "; the antenna may load the mode\n";
  return kOk;
}

int run_sweep(const CommonArgs& args) {
  const auto cfg = load(args, {});
  const auto spec = cfg.sweep_spec();
  const auto rows = design::run_sweep(spec);

  std::ostringstream out;
  if (cfg.output.format == io::OutputFormat::Json) {
    Json outputs{{"variable", design::to_string(spec.variable)},
                 {"spacing", design::to_string(spec.spacing)},
                 {"rows", io::sweep_rows_json(rows)}};
    out << io::dump_json(
        io::result_record("sweep", cfg, std::move(outputs), provenance_of(spec.fixed)));
  } else {
    io::write_sweep_csv(out, rows);
  }
  if (emit(cfg, out.str())) {
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status != "ok" && r.status != "zero_length";
    std::cout << rows.size() << " rows written to " << cfg.output.path;
    if (failed) std::cout << " (" << failed << " with error status)";
    std::cout << "\n";
  }
  return kOk;
}

int run_design(const CommonArgs& args, const std::optional<double>& cooling) {
  std::vector<std::string> extra;
  if (cooling) extra.push_back("design.cooling_temperature=" + io::format_double(*cooling));
  const auto cfg = load(args, extra);
  const auto scenario = cfg.scenario_with_antenna();
  const auto opts = cfg.design_options();
  opts.constraint.validate();

  Json outputs = Json::object();
  std::vector<std::string> header{"status"};
  std::vector<std::string> values;
  int code = kOk;
  std::string message;
  const std::vector<std::string> antenna_cols{"width", "height", "eta", "Ns", "Nn",
                                              "required_input_photons", "geometry_limited"};
  const std::vector<std::string> cooling_cols{"temperature", "conductivity", "max_length",
                                              "length_capped"};
  header.insert(header.end(), antenna_cols.begin(), antenna_cols.end());
  if (opts.cooling_temperature) header.insert(header.end(), cooling_cols.begin(), cooling_cols.end());

  auto antenna_values = [](const design::AntennaDesign& d) {
    return std::vector<std::string>{io::format_double(d.width),
                                    io::format_double(d.height),
                                    io::format_double(d.eta),
                                    io::format_double(d.Ns),
                                    io::format_double(d.Nn),
                                    io::format_double(d.required_input_photons),
                                    d.geometry_limited ? "1" : "0"};
  };

  try {
    if (opts.cooling_temperature) {
      const auto c = design::max_length_under_cooling(scenario, opts.constraint,
                                                      *opts.cooling_temperature, opts.height_ratio);
      outputs["status"] = "ok";
      outputs["cooling"] = io::cooling_design_json(c, scenario.waveguide.wall);
      values.push_back("ok");
      const auto a = antenna_values(c.antenna);
      values.insert(values.end(), a.begin(), a.end());
      values.insert(values.end(), {io::format_double(c.temperature), io::format_double(c.conductivity),
                                   io::format_double(c.max_length), c.length_capped ? "1" : "0"});
      message = "max length " + io::format_double(c.max_length) + " m at " +
                io::format_double(c.temperature) + " K; assumes " +
                io::conductivity_assumption(scenario.waveguide.wall, c.temperature);
    } else {
      const auto d = design::solve_antenna_width(opts.constraint, scenario, opts.height_ratio);
      outputs["status"] = "ok";
      outputs["antenna"] = io::antenna_design_json(d);
      values.push_back("ok");
      const auto a = antenna_values(d);
      values.insert(values.end(), a.begin(), a.end());
      message = "W_r = " + io::format_double(d.width) + " m, eta = " + io::format_double(d.eta) +
                ", Ns = " + io::format_double(d.Ns) + ", Nn = " + io::format_double(d.Nn);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Infeasible) throw;
    code = kInfeasible;
    outputs = Json{{"status", "infeasible"}, {"message", e.what()}};
    values.assign(header.size(), "");
    values.front() = "infeasible";
    message = std::string("infeasible: ") + e.what();
  }

  std::ostringstream out;
  if (cfg.output.format == io::OutputFormat::Json) {
    out << io::dump_json(
        io::result_record("design-antenna", cfg, std::move(outputs), provenance_of(scenario)));
  } else {
    io::write_csv_row(out, header);
    io::write_csv_row(out, values);
  }
  const bool to_file = emit(cfg, out.str());
  if (code != kOk)
    std::cerr << "qlink: " << message << "\n";
  else if (to_file)
    std::cout << message << "\n";
  return code;
}

struct McArgs {
  std::string convergence_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_trajectories;
  std::optional<std::size_t> n_steps;
};

int run_mc_verify(const CommonArgs& args, const McArgs& mc_args) {
  std::vector<std::string> extra;
  if (mc_args.seed) extra.push_back("mc.seed=" + std::to_string(*mc_args.seed));
  if (mc_args.n_trajectories)
    extra.push_back("mc.n_trajectories=" + std::to_string(*mc_args.n_trajectories));
  if (mc_args.n_steps) extra.push_back("mc.n_steps=" + std::to_string(*mc_args.n_steps));
  auto cfg = load(args, extra);
  if (!cfg.mc) cfg.mc = io::McOptions{};
  const auto opts = cfg.mc_options();

  const auto report = mc::verify_grid(opts.grid);

  std::vector<mc::ConvergenceRow> convergence;
  if (!mc_args.convergence_path.empty()) {
    const auto& c = opts.convergence;
    const auto point = mc::grid_config(opts.grid, c.gamma_t, c.n_th, c.initial_photons, c.integrator);
    convergence = mc::convergence_report(point, c.schedule);
    std::ofstream conv(mc_args.convergence_path, std::ios::binary | std::ios::trunc);
    if (!conv) throw Error(ErrorCode::InvalidConfig, "cannot write '" + mc_args.convergence_path + "'");
    io::write_convergence_csv(conv, convergence);
  }

  std::ostringstream out;
  if (cfg.output.format == io::OutputFormat::Json) {
    Json outputs = io::mc_report_json(report);
    if (!convergence.empty()) outputs["convergence"] = io::convergence_json(convergence);
    out << io::dump_json(io::result_record("mc-verify", cfg, std::move(outputs),
                                           {AttenuationModel::Textbook, std::nullopt, opts.grid.seed}));
  } else {
    io::write_mc_grid_csv(out, report);
  }
  emit(cfg, out.str());

  double max_z = 0.0;
  for (const auto& r : report.rows)
    if (r.stats.std_error > 0.0) max_z = std::max(max_z, r.abs_error / r.stats.std_error);
  std::cerr << "mc-verify: " << (report.passed() ? "PASS" : "FAIL") << " " << report.rows.size()
            << " rows, worst |mc - analytic|/tolerance = " << io::format_double(report.worst_ratio)
            << ", worst |mc - analytic|/std_error over rows with spread = " << io::format_double(max_z)
            << " (bound "
            << io::format_double(opts.grid.sigma_bound) << ")\n";
  return report.passed() ? kOk : kStatisticalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal-noise budget and design tools for a microwave waveguide link"};
  app.require_subcommand(1);

  CommonArgs link_args, sweep_args, design_args, mc_args_common;
  McArgs mc_args;
  std::optional<double> cooling;

  auto* link = app.add_subcommand("link-budget", "Forward chain for one scenario");
  add_common(link, link_args, true);

  auto* sweep = app.add_subcommand("sweep", "Forward chain over a swept variable");
  add_common(sweep, sweep_args, true);

  auto* design_cmd = app.add_subcommand("design-antenna", "Largest antenna meeting a noise budget");
  add_common(design_cmd, design_args, true);
  design_cmd->add_option("--cooling-temperature", cooling,
                         "Waveguide temperature in K; reports the longest feasible guide");

  auto* mc_cmd = app.add_subcommand("mc-verify", "Monte Carlo ensemble against the closed form");
  add_common(mc_cmd, mc_args_common, false);
  mc_cmd->add_option("--convergence", mc_args.convergence_path, "Write a convergence table (CSV)");
  mc_cmd->add_option("--seed", mc_args.seed, "RNG seed (overrides mc.seed)");
  mc_cmd->add_option("--n-trajectories", mc_args.n_trajectories, "Trajectories per grid point");
  mc_cmd->add_option("--n-steps", mc_args.n_steps, "Fixed step count (0: automatic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*link) return run_link_budget(link_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*design_cmd) return run_design(design_args, cooling);
    if (*mc_cmd) return run_mc_verify(mc_args_common, mc_args);
  } catch (const Error& e) {
    std::cerr << "qlink: error [" << reason_code(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "qlink: error: " << e.what() << "\n";
    return 1;
  }
  return kConfigError;
}
