#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlink/design.hpp"
#include "qlink/io/config.hpp"
#include "qlink/langevin_mc.hpp"

namespace qlink::io {

inline constexpr std::string_view kSchemaVersion = "1";

/// Shortest decimal that round-trips to the same double; "inf", "-inf",
/// "nan" for non-finite values and an empty field for a missing one.
std::string format_double(double x);
std::string format_double(const std::optional<double>& x);

/// Comma-separated line terminated by LF.
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

inline constexpr std::string_view kSweepCsvHeader = "var,Ms,Mn,snr_db,eta,Ns,Nn,status";

void write_sweep_csv(std::ostream& out, std::span<const design::SweepRow> rows);
Json sweep_rows_json(std::span<const design::SweepRow> rows);

Json link_budget_json(const design::LinkBudget& budget);
void write_link_budget_csv(std::ostream& out, const design::LinkBudget& budget);

Json antenna_design_json(const design::AntennaDesign& d);
Json cooling_design_json(const design::CoolingDesign& d, const ConductorModel& wall);

/// One-line statement of the wall conductivity model behind a cooling result.
std::string conductivity_assumption(const ConductorModel& wall, double temperature);

void write_mc_grid_csv(std::ostream& out, const mc::VerificationReport& report);
Json mc_report_json(const mc::VerificationReport& report);
void write_convergence_csv(std::ostream& out, std::span<const mc::ConvergenceRow> rows);
Json convergence_json(std::span<const mc::ConvergenceRow> rows);

/// z-score |mc − analytic| / std_error; +inf for a nonzero error with zero
/// spread, 0 when both vanish.
double z_score(double abs_error, double std_error);

struct Provenance {
  AttenuationModel attenuation_model = AttenuationModel::Textbook;
  std::optional<ConductorModel> conductor;
  std::optional<std::uint64_t> seed;
};

/// {schema_version, command, inputs, outputs, provenance}.
Json result_record(std::string_view command, const ScenarioConfig& inputs, Json outputs,
                   const Provenance& provenance);

/// Pretty-printed with two-space indent and a trailing LF.
std::string dump_json(const Json& doc);

}  // namespace qlink::io
