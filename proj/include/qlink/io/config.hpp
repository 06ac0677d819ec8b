#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qlink/design.hpp"
#include "qlink/langevin_mc.hpp"

namespace qlink::io {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f);

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: standard output

  bool operator==(const OutputSpec&) const = default;
};

struct DesignOptions {
  design::DesignConstraint constraint;
  double height_ratio = 0.5;
  std::optional<double> cooling_temperature;  // K; enables the max-length search

  bool operator==(const DesignOptions&) const = default;
};

/// Single grid point re-run at growing trajectory counts.
struct ConvergenceOptions {
  double gamma_t = 2.0;
  double n_th = 610.3;
  double initial_photons = 1e4;
  mc::Integrator integrator = mc::Integrator::ExactPropagator;
  std::vector<std::size_t> schedule{100, 1000, 10000, 100000};

  bool operator==(const ConvergenceOptions&) const = default;
};

struct McOptions {
  mc::VerificationGrid grid;
  ConvergenceOptions convergence;

  bool operator==(const McOptions&) const = default;
};

/// Everything a config file can hold. Sections are optional at parse time;
/// each subcommand asks for the ones it needs.
struct ScenarioConfig {
  std::optional<WaveguideSpec> waveguide;
  std::optional<SignalSpec> signal;
  std::optional<AntennaSpec> antenna;
  AttenuationModel attenuation_model = AttenuationModel::Textbook;
  OutputSpec output;
  std::optional<design::SweepSpec> sweep;  // sweep.fixed is left default-initialized
  std::optional<DesignOptions> design;
  std::optional<McOptions> mc;

  bool operator==(const ScenarioConfig&) const = default;

  /// InvalidConfig naming the missing section.
  [[nodiscard]] design::Scenario scenario() const;
  [[nodiscard]] design::Scenario scenario_with_antenna() const;
  [[nodiscard]] design::SweepSpec sweep_spec() const;
  [[nodiscard]] DesignOptions design_options() const;
  [[nodiscard]] McOptions mc_options() const;
};

/// Parses JSON text. Syntax errors become InvalidConfig with source:line:column.
Json parse_json_text(std::string_view text, std::string_view source_name);

/// Applies `dotted.key=value`. The value is read as JSON when it parses as
/// JSON and as a plain string otherwise; missing objects along the path are
/// created.
void apply_override(Json& doc, std::string_view assignment);

/// Strict schema check and conversion. Unknown keys, wrong types and out of
/// range values raise InvalidConfig with the dotted field path and, when
/// source_text is given, the line of the offending key.
ScenarioConfig config_from_json(const Json& doc, std::string_view source_name = "<config>",
                                std::string_view source_text = {});

/// Full echo with every default spelled out; config_from_json() of the result
/// reproduces cfg exactly (up to output.path when that is left out).
Json config_to_json(const ScenarioConfig& cfg, bool include_output_path = true);

/// File (or empty path for an empty document) plus overrides.
ScenarioConfig load_config(const std::filesystem::path& path,
                           std::span<const std::string> overrides);

/// Non-finite values are written as the strings "inf", "-inf" and "nan".
Json number(double x);
Json number(const std::optional<double>& x);

}  // namespace qlink::io
