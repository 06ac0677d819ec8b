#include "qlink/io/records.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlink/constants.hpp"

namespace qlink::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string format_double(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const design::SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    const std::array<std::string, 8> fields{
        format_double(r.value), format_double(r.Ms),  format_double(r.Mn),
        format_double(r.snr_db), format_double(r.eta), format_double(r.Ns),
        format_double(r.Nn),     r.status};
    write_csv_row(out, fields);
  }
}

Json sweep_rows_json(std::span<const design::SweepRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back(Json{{"var", number(r.value)},
                       {"Ms", number(r.Ms)},
                       {"Mn", number(r.Mn)},
                       {"snr_db", number(r.snr_db)},
                       {"eta", number(r.eta)},
                       {"Ns", number(r.Ns)},
                       {"Nn", number(r.Nn)},
                       {"status", r.status}});
  return out;
}

namespace {

struct BudgetField {
  const char* name;
  std::optional<double> value;
};

std::vector<BudgetField> budget_fields(const design::LinkBudget& b) {
  const auto& t = b.transport;
  const auto& m = b.mode;
  std::optional<double> eta, ns, L;
  if (b.detection) {
    eta = b.detection->eta;
    ns = b.detection->Ns;
    L = b.detection->inductance;
  }
  return {{"Ms", t.Ms},
          {"Mn", t.Mn},
          {"snr_db", t.snr_db},
          {"eta", eta},
          {"Ns", ns},
          {"Nn", b.induced_noise()},
          {"Gamma", m.Gamma},
          {"t", t.propagation_time},
          {"Gamma_t", t.Gamma_t},
          {"n_th", t.n_th},
          {"alpha", m.alpha},
          {"v_g", m.v_g},
          {"cutoff_frequency", m.omega_c / (2.0 * constants::kPi)},
          {"eps_eff", m.eps_eff},
          {"Z_F", m.Z_F},
          {"R_s", m.R_s},
          {"inductance", L}};
}

std::string budget_status(const design::LinkBudget& b) {
  return b.zero_length ? "zero_length" : "ok";
}

}  // namespace

Json link_budget_json(const design::LinkBudget& budget) {
  Json out = Json::object();
  for (const auto& f : budget_fields(budget)) out[f.name] = number(f.value);
  out["eta_warning"] = budget.detection && budget.detection->eta_warning();
  out["status"] = budget_status(budget);
  return out;
}

void write_link_budget_csv(std::ostream& out, const design::LinkBudget& budget) {
  std::vector<std::string> header, values;
  for (const auto& f : budget_fields(budget)) {
    header.emplace_back(f.name);
    values.push_back(format_double(f.value));
  }
  header.emplace_back("status");
  values.push_back(budget_status(budget));
  write_csv_row(out, header);
  write_csv_row(out, values);
}

Json antenna_design_json(const design::AntennaDesign& d) {
  return Json{{"width", number(d.width)},
              {"height", number(d.height)},
              {"eta", number(d.eta)},
              {"Ns", number(d.Ns)},
              {"Nn", number(d.Nn)},
              {"required_input_photons", number(d.required_input_photons)},
              {"geometry_limited", d.geometry_limited},
              {"iterations", d.iterations}};
}

std::string conductivity_assumption(const ConductorModel& wall, double temperature) {
  std::ostringstream s;
  s << wall.name << " walls: sigma(T) = " << format_double(wall.conductivity_ref) << " S/m at T >= "
    << format_double(wall.reference_temperature) << " K, x" << format_double(wall.cryo_factor)
    << " at T <= " << format_double(wall.knee_temperature)
    << " K, resistivity linear in T between; sigma(" << format_double(temperature)
    << " K) = " << format_double(wall.conductivity(temperature)) << " S/m";
  return s.str();
}

Json cooling_design_json(const design::CoolingDesign& d, const ConductorModel& wall) {
  return Json{{"temperature", number(d.temperature)},
              {"conductivity", number(d.conductivity)},
              {"conductivity_assumption", conductivity_assumption(wall, d.temperature)},
              {"max_length", number(d.max_length)},
              {"length_capped", d.length_capped},
              {"antenna", antenna_design_json(d.antenna)}};
}

double z_score(double abs_error, double std_error) {
  if (std_error > 0.0) return abs_error / std_error;
  return abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

void write_mc_grid_csv(std::ostream& out, const mc::VerificationReport& report) {
  out << "gamma_t,n_th,initial_photons,integrator,n_trajectories,n_steps,mean,analytic,"
         "abs_error,std_error,z,floor,tolerance,pass\n";
  for (const auto& r : report.rows) {
    const std::array<std::string, 14> fields{format_double(r.gamma_t),
                                             format_double(r.n_th),
                                             format_double(r.initial_photons),
                                             std::string(mc::to_string(r.integrator)),
                                             std::to_string(r.n_trajectories),
                                             std::to_string(r.n_steps),
                                             format_double(r.stats.mean_photons),
                                             format_double(r.analytic),
                                             format_double(r.abs_error),
                                             format_double(r.stats.std_error),
                                             format_double(z_score(r.abs_error, r.stats.std_error)),
                                             format_double(r.floor),
                                             format_double(r.tolerance),
                                             r.pass ? "1" : "0"};
    write_csv_row(out, fields);
  }
}

Json mc_report_json(const mc::VerificationReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back(Json{{"gamma_t", number(r.gamma_t)},
                        {"n_th", number(r.n_th)},
                        {"initial_photons", number(r.initial_photons)},
                        {"integrator", mc::to_string(r.integrator)},
                        {"n_trajectories", r.n_trajectories},
                        {"n_steps", r.n_steps},
                        {"mean", number(r.stats.mean_photons)},
                        {"variance", number(r.stats.variance)},
                        {"analytic", number(r.analytic)},
                        {"abs_error", number(r.abs_error)},
                        {"std_error", number(r.stats.std_error)},
                        {"z", number(z_score(r.abs_error, r.stats.std_error))},
                        {"floor", number(r.floor)},
                        {"tolerance", number(r.tolerance)},
                        {"pass", r.pass}});
  Json agreement = Json::array();
  for (const auto& a : report.agreement)
    agreement.push_back(Json{{"gamma_t", number(a.gamma_t)},
                             {"n_th", number(a.n_th)},
                             {"initial_photons", number(a.initial_photons)},
                             {"difference", number(a.difference)},
                             {"tolerance", number(a.tolerance)},
                             {"pass", a.pass}});
  return Json{{"rows", rows},
              {"agreement", agreement},
              {"worst_ratio", number(report.worst_ratio)},
              {"passed", report.passed()}};
}

void write_convergence_csv(std::ostream& out, std::span<const mc::ConvergenceRow> rows) {
  out << "n_trajectories,abs_error,std_error\n";
  for (const auto& r : rows) {
    const std::array<std::string, 3> fields{std::to_string(r.n_trajectories),
                                            format_double(r.abs_error),
                                            format_double(r.std_error)};
    write_csv_row(out, fields);
  }
}

Json convergence_json(std::span<const mc::ConvergenceRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back(Json{{"n_trajectories", r.n_trajectories},
                       {"abs_error", number(r.abs_error)},
                       {"std_error", number(r.std_error)}});
  return out;
}

Json result_record(std::string_view command, const ScenarioConfig& inputs, Json outputs,
                   const Provenance& provenance) {
  Json prov = Json::object();
  prov["attenuation_model"] = to_string(provenance.attenuation_model);
  if (provenance.conductor) {
    const auto& w = *provenance.conductor;
    prov["conductivity_model"] = Json{{"name", w.name},
                                      {"conductivity_ref", w.conductivity_ref},
                                      {"reference_temperature", w.reference_temperature},
                                      {"knee_temperature", w.knee_temperature},
                                      {"cryo_factor", w.cryo_factor}};
  } else {
    prov["conductivity_model"] = nullptr;
  }
  prov["seed"] = provenance.seed ? Json(*provenance.seed) : Json(nullptr);

  Json record = Json::object();
  record["schema_version"] = kSchemaVersion;
  record["command"] = command;
  record["inputs"] = config_to_json(inputs, false);
  record["outputs"] = std::move(outputs);
  record["provenance"] = std::move(prov);
  return record;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace qlink::io
