#include "qlink/io/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qlink/error.hpp"

namespace qlink::io {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Line of the last key along a dotted path, found by scanning for each quoted
// key after the previous one. Keys that only came from --set are not found.
std::optional<std::size_t> locate_key(std::string_view text, const std::vector<std::string>& path) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  for (const auto& key : path) {
    const std::string quoted = "\"" + key + "\"";
    const std::size_t hit = text.find(quoted, pos);
    if (hit == std::string_view::npos) return std::nullopt;
    pos = hit + quoted.size();
  }
  return line_column(text, pos).first;
}

enum class Domain { Any, Positive, NonNegative, PositiveOrInf, NonNegativeOrInf, AtLeastOne };

class Section {
 public:
  Section(const Json& obj, std::vector<std::string> path, std::string_view source,
          std::string_view text)
      : obj_(obj), path_(std::move(path)), source_(source), text_(text) {
    if (!obj_.is_object()) fail({}, "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    auto full = path_;
    if (!key.empty()) full.push_back(key);
    std::string dotted;
    for (const auto& k : full) dotted += (dotted.empty() ? "" : ".") + k;
    std::ostringstream msg;
    msg << source_;
    if (auto line = locate_key(text_, full)) msg << ":" << *line;
    msg << ": " << (dotted.empty() ? "<root>" : dotted) << ": " << what;
    config_error(msg.str());
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  double number(const std::string& key, Domain domain) {
    if (!has(key)) fail(key, "required field is missing");
    return to_number(key, obj_.at(key), domain);
  }

  double number_or(const std::string& key, double fallback, Domain domain) {
    return has(key) ? to_number(key, obj_.at(key), domain) : fallback;
  }

  std::optional<double> optional_number(const std::string& key, Domain domain) {
    if (!has(key)) return std::nullopt;
    return to_number(key, obj_.at(key), domain);
  }

  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback, std::uint64_t min) {
    if (!has(key)) return fallback;
    return to_integer(key, obj_.at(key), min);
  }

  std::string string_or(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback,
                                 Domain domain) {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& item : v) out.push_back(to_number(key, item, domain));
    return out;
  }

  std::vector<std::size_t> integers_or(const std::string& key, std::vector<std::size_t> fallback,
                                       std::uint64_t min) {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
    std::vector<std::size_t> out;
    for (const auto& item : v) out.push_back(to_integer(key, item, min));
    return out;
  }

  /// Converts a section-level domain error into a located config error.
  template <class Fn>
  void check(const std::string& key, Fn&& fn) const {
    try {
      fn();
    } catch (const Error& e) {
      fail(key, e.what());
    }
  }

  std::optional<Section> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    auto path = path_;
    path.push_back(key);
    return Section(obj_.at(key), std::move(path), source_, text_);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.contains(key)) fail(key, "unknown key");
  }

 private:
  double to_number(const std::string& key, const Json& v, Domain domain) const {
    double x = 0.0;
    if (v.is_number()) {
      x = v.get<double>();
    } else if (v.is_string() && (v == "inf" || v == "+inf" || v == "infinity")) {
      x = std::numeric_limits<double>::infinity();
    } else {
      fail(key, "expected a number");
    }
    const bool inf_ok = domain == Domain::PositiveOrInf || domain == Domain::NonNegativeOrInf;
    if (!std::isfinite(x) && !(inf_ok && x > 0)) fail(key, "must be finite");
    switch (domain) {
      case Domain::Any: break;
      case Domain::Positive:
      case Domain::PositiveOrInf:
        if (!(x > 0.0)) fail(key, "must be > 0");
        break;
      case Domain::NonNegative:
      case Domain::NonNegativeOrInf:
        if (!(x >= 0.0)) fail(key, "must be >= 0");
        break;
      case Domain::AtLeastOne:
        if (!(x >= 1.0)) fail(key, "must be >= 1");
        break;
    }
    return x;
  }

  std::uint64_t to_integer(const std::string& key, const Json& v, std::uint64_t min) const {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0))
      fail(key, "expected a non-negative integer");
    const auto n = v.get<std::uint64_t>();
    if (n < min) fail(key, "must be >= " + std::to_string(min));
    return n;
  }

  const Json& obj_;
  std::vector<std::string> path_;
  std::string_view source_;
  std::string_view text_;
  std::set<std::string> seen_;
};

template <class Enum, class Parse>
Enum parse_enum(Section& s, const std::string& key, Enum fallback, Parse&& parse,
                std::string_view fallback_text) {
  const std::string text = s.string_or(key, std::string(fallback_text));
  Enum out = fallback;
  s.check(key, [&] { out = parse(text); });
  return out;
}

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  config_error("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

mc::Integrator integrator_from_string(std::string_view text) {
  if (text == "euler_maruyama") return mc::Integrator::EulerMaruyama;
  if (text == "exact") return mc::Integrator::ExactPropagator;
  config_error("unknown integrator '" + std::string(text) + "' (expected euler_maruyama or exact)");
}

ConductorModel read_wall(Section& s) {
  ConductorModel w;
  w.name = s.string_or("name", w.name);
  w.conductivity_ref = s.number_or("conductivity_ref", w.conductivity_ref, Domain::Positive);
  w.reference_temperature =
      s.number_or("reference_temperature", w.reference_temperature, Domain::Positive);
  w.knee_temperature = s.number_or("knee_temperature", w.knee_temperature, Domain::Positive);
  w.cryo_factor = s.number_or("cryo_factor", w.cryo_factor, Domain::AtLeastOne);
  s.finish();
  s.check({}, [&] { w.validate(); });
  return w;
}

WaveguideSpec read_waveguide(Section& s) {
  WaveguideSpec wg;
  wg.width = s.number("width", Domain::Positive);
  wg.height = s.number("height", Domain::Positive);
  wg.length = s.number("length", Domain::NonNegative);
  wg.temperature = s.number("temperature", Domain::Positive);
  wg.rel_permittivity = s.number_or("rel_permittivity", 1.0, Domain::AtLeastOne);
  wg.rel_permeability = s.number_or("rel_permeability", 1.0, Domain::Positive);
  if (auto wall = s.child("wall")) wg.wall = read_wall(*wall);
  s.finish();
  s.check({}, [&] { wg.validate(); });
  return wg;
}

SignalSpec read_signal(Section& s) {
  SignalSpec sig;
  sig.frequency = s.number("frequency", Domain::Positive);
  sig.input_photons = s.number("input_photons", Domain::NonNegative);
  s.finish();
  return sig;
}

AntennaSpec read_antenna(Section& s) {
  AntennaSpec a;
  a.width = s.number("width", Domain::NonNegative);
  a.height = s.number("height", Domain::NonNegative);
  a.capacitance = s.number("capacitance", Domain::Positive);
  a.rel_permeability = s.number_or("rel_permeability", 1.0, Domain::Positive);
  s.finish();
  return a;
}

design::SweepSpec read_sweep(Section& s) {
  design::SweepSpec sw;
  sw.variable = parse_enum(s, "variable", sw.variable, design::sweep_variable_from_string,
                           design::to_string(sw.variable));
  sw.start = s.number("start", Domain::Any);
  sw.stop = s.number("stop", Domain::Any);
  sw.n_points = s.integer_or("n_points", sw.n_points, 2);
  sw.spacing = parse_enum(s, "spacing", sw.spacing, design::spacing_from_string,
                          design::to_string(sw.spacing));
  sw.height_ratio = s.number_or("height_ratio", sw.height_ratio, Domain::Positive);
  s.finish();
  s.check({}, [&] {
    design::SweepSpec probe = sw;
    probe.variable = design::SweepVariable::Length;  // antenna presence is checked per command
    probe.validate();
  });
  return sw;
}

DesignOptions read_design(Section& s) {
  DesignOptions d;
  auto& c = d.constraint;
  c.max_noise_photons = s.number_or("max_noise_photons", c.max_noise_photons, Domain::PositiveOrInf);
  c.min_signal_photons = s.number_or("min_signal_photons", c.min_signal_photons, Domain::Positive);
  c.max_input_photons = s.number_or("max_input_photons", c.max_input_photons, Domain::PositiveOrInf);
  d.height_ratio = s.number_or("height_ratio", d.height_ratio, Domain::Positive);
  d.cooling_temperature = s.optional_number("cooling_temperature", Domain::Positive);
  s.finish();
  return d;
}

McOptions read_mc(Section& s) {
  McOptions m;
  auto& g = m.grid;
  g.gamma_t = s.numbers_or("gamma_t", g.gamma_t, Domain::NonNegative);
  g.n_th = s.numbers_or("n_th", g.n_th, Domain::NonNegative);
  g.initial_photons = s.numbers_or("initial_photons", g.initial_photons, Domain::NonNegative);
  g.n_trajectories = s.integer_or("n_trajectories", g.n_trajectories, 2);
  g.seed = s.integer_or("seed", g.seed, 0);
  g.n_steps = s.integer_or("n_steps", g.n_steps, 0);
  g.euler_step_decay = s.number_or("euler_step_decay", g.euler_step_decay, Domain::Positive);
  g.euler_bias_fraction =
      s.number_or("euler_bias_fraction", g.euler_bias_fraction, Domain::Positive);
  g.exact_step_decay = s.number_or("exact_step_decay", g.exact_step_decay, Domain::Positive);
  g.sigma_bound = s.number_or("sigma_bound", g.sigma_bound, Domain::Positive);
  if (auto conv = s.child("convergence")) {
    auto& c = m.convergence;
    c.gamma_t = conv->number_or("gamma_t", c.gamma_t, Domain::NonNegative);
    c.n_th = conv->number_or("n_th", c.n_th, Domain::NonNegative);
    c.initial_photons = conv->number_or("initial_photons", c.initial_photons, Domain::NonNegative);
    c.integrator = parse_enum(*conv, "integrator", c.integrator, integrator_from_string,
                              mc::to_string(c.integrator));
    c.schedule = conv->integers_or("schedule", c.schedule, 2);
    for (std::size_t i = 1; i < c.schedule.size(); ++i)
      if (c.schedule[i] <= c.schedule[i - 1])
        conv->fail("schedule", "trajectory counts must be strictly increasing");
    conv->finish();
  }
  s.finish();
  return m;
}

Json wall_to_json(const ConductorModel& w) {
  return Json{{"name", w.name},
              {"conductivity_ref", w.conductivity_ref},
              {"reference_temperature", w.reference_temperature},
              {"knee_temperature", w.knee_temperature},
              {"cryo_factor", w.cryo_factor}};
}

}  // namespace

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

design::Scenario ScenarioConfig::scenario() const {
  if (!waveguide) config_error("config is missing the 'waveguide' section");
  if (!signal) config_error("config is missing the 'signal' section");
  design::Scenario s;
  s.waveguide = *waveguide;
  s.signal = *signal;
  s.antenna = antenna;
  s.attenuation_model = attenuation_model;
  try {
    s.validate();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidSpec) throw;
    config_error(std::string("scenario: ") + e.what());
  }
  return s;
}

design::Scenario ScenarioConfig::scenario_with_antenna() const {
  if (!antenna) config_error("config is missing the 'antenna' section");
  return scenario();
}

design::SweepSpec ScenarioConfig::sweep_spec() const {
  if (!sweep) config_error("config is missing the 'sweep' section");
  design::SweepSpec s = *sweep;
  s.fixed = scenario();
  s.validate();
  return s;
}

DesignOptions ScenarioConfig::design_options() const { return design.value_or(DesignOptions{}); }

McOptions ScenarioConfig::mc_options() const { return mc.value_or(McOptions{}); }

Json parse_json_text(std::string_view text, std::string_view source_name) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (const auto col = what.find("column "); col != std::string::npos)
      if (const auto colon = what.find(": ", col); colon != std::string::npos)
        what = what.substr(colon + 2);
    std::ostringstream msg;
    msg << source_name << ":" << line << ":" << column << ": " << what;
    config_error(msg.str());
  }
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    config_error("--set expects key=value, got '" + std::string(assignment) + "'");
  const std::string_view key = assignment.substr(0, eq);
  const std::string value(assignment.substr(eq + 1));

  Json parsed = Json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part(key.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (part.empty()) config_error("--set key '" + std::string(key) + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null())
        config_error("--set key '" + std::string(key) + "' descends into a non-object");
      *node = Json::object();
    }
    node = &(*node)[part];
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  *node = std::move(parsed);
}

ScenarioConfig config_from_json(const Json& doc, std::string_view source_name,
                                std::string_view source_text) {
  ScenarioConfig cfg;
  Section root(doc, {}, source_name, source_text);
  if (auto s = root.child("waveguide")) cfg.waveguide = read_waveguide(*s);
  if (auto s = root.child("signal")) cfg.signal = read_signal(*s);
  if (auto s = root.child("antenna")) cfg.antenna = read_antenna(*s);
  cfg.attenuation_model = parse_enum(root, "attenuation_model", cfg.attenuation_model,
                                     attenuation_model_from_string, "textbook");
  if (auto s = root.child("output")) {
    cfg.output.format = parse_enum(*s, "format", cfg.output.format, output_format_from_string, "csv");
    cfg.output.path = s->string_or("path", "");
    s->finish();
  }
  if (auto s = root.child("sweep")) cfg.sweep = read_sweep(*s);
  if (auto s = root.child("design")) cfg.design = read_design(*s);
  if (auto s = root.child("mc")) cfg.mc = read_mc(*s);
  root.finish();

  if (cfg.waveguide && cfg.antenna)
    root.check("antenna", [&] { cfg.antenna->validate(*cfg.waveguide); });
  return cfg;
}

Json config_to_json(const ScenarioConfig& cfg, bool include_output_path) {
  Json doc = Json::object();
  if (cfg.waveguide) {
    const auto& w = *cfg.waveguide;
    doc["waveguide"] = Json{{"width", w.width},
                            {"height", w.height},
                            {"length", w.length},
                            {"temperature", w.temperature},
                            {"rel_permittivity", w.rel_permittivity},
                            {"rel_permeability", w.rel_permeability},
                            {"wall", wall_to_json(w.wall)}};
  }
  if (cfg.signal)
    doc["signal"] = Json{{"frequency", cfg.signal->frequency},
                         {"input_photons", cfg.signal->input_photons}};
  if (cfg.antenna)
    doc["antenna"] = Json{{"width", cfg.antenna->width},
                          {"height", cfg.antenna->height},
                          {"capacitance", cfg.antenna->capacitance},
                          {"rel_permeability", cfg.antenna->rel_permeability}};
  doc["attenuation_model"] = to_string(cfg.attenuation_model);
  doc["output"] = Json{{"format", to_string(cfg.output.format)}};
  if (include_output_path) doc["output"]["path"] = cfg.output.path;
  if (cfg.sweep) {
    const auto& s = *cfg.sweep;
    doc["sweep"] = Json{{"variable", design::to_string(s.variable)},
                        {"start", s.start},
                        {"stop", s.stop},
                        {"n_points", s.n_points},
                        {"spacing", design::to_string(s.spacing)},
                        {"height_ratio", s.height_ratio}};
  }
  if (cfg.design) {
    const auto& d = *cfg.design;
    doc["design"] = Json{{"max_noise_photons", number(d.constraint.max_noise_photons)},
                         {"min_signal_photons", number(d.constraint.min_signal_photons)},
                         {"max_input_photons", number(d.constraint.max_input_photons)},
                         {"height_ratio", d.height_ratio},
                         {"cooling_temperature", number(d.cooling_temperature)}};
  }
  if (cfg.mc) {
    const auto& g = cfg.mc->grid;
    const auto& c = cfg.mc->convergence;
    doc["mc"] = Json{{"gamma_t", g.gamma_t},
                     {"n_th", g.n_th},
                     {"initial_photons", g.initial_photons},
                     {"n_trajectories", g.n_trajectories},
                     {"seed", g.seed},
                     {"n_steps", g.n_steps},
                     {"euler_step_decay", g.euler_step_decay},
                     {"euler_bias_fraction", g.euler_bias_fraction},
                     {"exact_step_decay", g.exact_step_decay},
                     {"sigma_bound", g.sigma_bound},
                     {"convergence", Json{{"gamma_t", c.gamma_t},
                                          {"n_th", c.n_th},
                                          {"initial_photons", c.initial_photons},
                                          {"integrator", mc::to_string(c.integrator)},
                                          {"schedule", c.schedule}}}};
  }
  return doc;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           std::span<const std::string> overrides) {
  std::string text;
  Json doc = Json::object();
  std::string source = "<overrides>";
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    source = path.string();
    doc = parse_json_text(text, source);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc, source, text);
}

}  // namespace qlink::io
