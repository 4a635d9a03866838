#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpa/errors.hpp"

namespace mpa::cli {
namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"c", "1"},
      {"m", "1"},
      {"q", "0.7"},
      {"R", "0.2"},
      {"T", "0.5"},
      {"r", "2"},
      {"beta", "0.1"},
      {"P", "5"},
      {"C", "1"},
      {"discount", "0"},
      {"E_min", "3"},
      {"E_max", "10"},
      {"step", ""},
      {"x1_0", ""},
      {"x2_0", ""},
      {"x_init", ""},
      {"years", "3"},
      {"policy", "composite"},
      {"effort", ""},
      {"switch_time", ""},
      {"first_effort", ""},
      {"second_effort", ""},
      {"plane", "E-vs-R"},
      {"fixed", ""},
      {"abscissa_min", ""},
      {"abscissa_max", ""},
      {"abscissa_count", "50"},
      {"ordinate_min", ""},
      {"ordinate_max", ""},
      {"ordinate_count", "200"},
      {"sweep", ""},
      {"sweep_effort", ""},
      {"reference_constant", ""},
      {"reference_bang_bang", ""},
      {"reference_composite", ""},
  };
  return table;
}

bool known(const std::string& key) {
  for (const auto& [k, v] : defaults()) {
    if (k == key) return true;
  }
  return false;
}

double parse_double(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key, "value required");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (errno != 0 || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key, "not a finite number: '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key, "value required");
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size()) {
    throw ConfigError(key, "not an integer: '" + text + "'");
  }
  return v;
}

std::optional<double> parse_optional(const Layer& cfg, const std::string& key) {
  const std::string& text = cfg.at(key);
  if (text.empty()) return std::nullopt;
  return parse_double(key, text);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

struct PlaneDefaults {
  double fixed;
  Axis abscissa;
  Axis ordinate;
};

PlaneDefaults plane_defaults(Plane plane, const HabitatParams& habitat) {
  switch (plane) {
    case Plane::EffortVsReserve:
      return {habitat.season_length(), {0.0, 0.99, 50}, {0.0, 30.0, 200}};
    case Plane::SeasonVsReserve:
      return {0.0, {0.0, 0.99, 50}, {0.0, 1.0, 200}};
    case Plane::SeasonVsEffort:
      return {habitat.reserve_fraction(), {0.0, 20.0, 50}, {0.0, 1.0, 200}};
  }
  return {};
}

Axis read_axis(const Layer& cfg, const std::string& prefix, Axis axis) {
  if (auto lo = parse_optional(cfg, prefix + "_min")) axis.lo = *lo;
  if (auto hi = parse_optional(cfg, prefix + "_max")) axis.hi = *hi;
  const long count = parse_long(prefix + "_count", cfg.at(prefix + "_count"));
  if (count < 2 || count > 100000) {
    throw ConfigError(prefix + "_count", "grid needs between 2 and 100000 points");
  }
  axis.count = static_cast<int>(count);
  return axis;
}

bool is_numeric_param(const std::string& key) {
  static const std::vector<std::string> names = {"c", "m", "q", "R", "T", "r", "beta",
                                                 "P", "C", "discount", "E_min", "E_max"};
  for (const auto& n : names) {
    if (n == key) return true;
  }
  return false;
}

std::vector<SweepAxis> parse_sweep(const std::string& text) {
  std::vector<SweepAxis> axes;
  if (text.empty()) return axes;
  for (const std::string& item : split(text, ';')) {
    const auto parts = split(item, ':');
    if (parts.size() != 4) throw ConfigError("sweep", "expected name:lo:hi:count, got '" + item + "'");
    if (!is_numeric_param(parts[0])) throw ConfigError("sweep", "cannot sweep '" + parts[0] + "'");
    SweepAxis a;
    a.key = parts[0];
    a.axis.lo = parse_double("sweep", parts[1]);
    a.axis.hi = parse_double("sweep", parts[2]);
    const long count = parse_long("sweep", parts[3]);
    if (count < 1 || count > 100000) throw ConfigError("sweep", "count must be in [1, 100000]");
    if (a.axis.hi < a.axis.lo) throw ConfigError("sweep", "range must satisfy lo <= hi");
    if (count == 1 && a.axis.hi != a.axis.lo) {
      throw ConfigError("sweep", "a single-point axis needs lo == hi");
    }
    a.axis.count = static_cast<int>(count);
    for (const auto& other : axes) {
      if (other.key == a.key) throw ConfigError("sweep", "'" + a.key + "' swept twice");
    }
    axes.push_back(a);
  }
  if (axes.size() > 2) throw ConfigError("sweep", "at most two swept parameters");
  return axes;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : defaults()) out.push_back(k);
    return out;
  }();
  return keys;
}

Layer default_layer() {
  Layer layer;
  for (const auto& [k, v] : defaults()) layer[k] = v;
  return layer;
}

Layer preset_layer(const std::string& name) {
  if (name == "fig1-topleft") {
    return {{"plane", "R-vs-T"}, {"fixed", "0"}};
  }
  if (name == "fig1-topright") {
    return {{"plane", "E-vs-R"}, {"fixed", "0.25,0.5,0.75"}};
  }
  if (name == "fig1-bottomleft") {
    return {{"plane", "R-vs-T"}, {"fixed", "2,20"}};
  }
  if (name == "fig1-bottomright") {
    return {{"plane", "E-vs-T"}, {"fixed", "0,0.2,0.5"}};
  }
  if (name == "fig2") {
    return {{"r", "5"},
            {"reference_constant", "13.83"},
            {"reference_bang_bang", "18.72"},
            {"reference_composite", "18.45"}};
  }
  if (name == "fig3") {
    return {{"r", "5"}, {"policy", "composite"}, {"years", "3"}};
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

Layer file_layer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  Layer layer;
  for (const auto& [key, value] : doc.items()) {
    if (!known(key)) throw ConfigError(key, "unknown key");
    if (value.is_string()) {
      layer[key] = value.get<std::string>();
    } else if (value.is_number()) {
      layer[key] = value.dump();
    } else if (value.is_null()) {
      layer[key] = "";
    } else {
      throw ConfigError(key, "expected a number or a string");
    }
  }
  return layer;
}

Layer flag_layer(const std::vector<std::string>& args) {
  Layer layer;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
      throw ConfigError(arg, "expected --key value");
    }
    std::string key = arg.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError(key, "missing value");
      value = args[++i];
    }
    if (!known(key)) throw ConfigError(key, "unknown key");
    layer[key] = value;
  }
  return layer;
}

void apply_numeric(HabitatSpec& habitat, EconSpec& econ, const std::string& key, double value) {
  if (key == "c") habitat.death_rate = value;
  else if (key == "m") habitat.dispersal = value;
  else if (key == "q") habitat.catchability = value;
  else if (key == "R") habitat.reserve_fraction = value;
  else if (key == "T") habitat.season_length = value;
  else if (key == "r") habitat.growth_rate = value;
  else if (key == "beta") habitat.density_coeff = value;
  else if (key == "P") econ.price = value;
  else if (key == "C") econ.cost = value;
  else if (key == "discount") econ.discount = value;
  else if (key == "E_min") econ.effort_min = value;
  else if (key == "E_max") econ.effort_max = value;
  else throw ConfigError(key, "not a model parameter");
}

RunConfig resolve(const std::string& command, const std::vector<Layer>& layers) {
  Layer cfg;
  for (const auto& layer : layers) {
    for (const auto& [k, v] : layer) cfg[k] = v;
  }
  RunConfig out;
  out.command = command;
  out.resolved = cfg;

  HabitatSpec habitat;
  EconSpec econ;
  for (const char* key : {"c", "m", "q", "R", "T", "r", "beta", "P", "C", "discount", "E_min",
                          "E_max"}) {
    apply_numeric(habitat, econ, key, parse_double(key, cfg.at(key)));
  }
  out.habitat = HabitatParams(habitat);
  out.econ = EconParams(econ);

  out.step = parse_optional(cfg, "step").value_or(default_step(out.habitat));
  if (!(out.step > 0.0)) throw ConfigError("step", "must be > 0");

  const auto x1 = parse_optional(cfg, "x1_0");
  const auto x2 = parse_optional(cfg, "x2_0");
  if (x1.has_value() != x2.has_value()) {
    throw ConfigError(x1 ? "x2_0" : "x1_0", "x1_0 and x2_0 must be given together");
  }
  if (x1) {
    if (!(*x1 > 0.0) || !(*x2 > 0.0)) throw InvalidParameter("x0", "initial state must be positive");
    out.x0 = PatchState{*x1, *x2};
  }
  out.x_init = parse_optional(cfg, "x_init");
  if (out.x_init && !(*out.x_init > 0.0)) throw InvalidParameter("x_init", "must be > 0");

  out.years = parse_long("years", cfg.at("years"));
  if (out.years < 1 || out.years > 1000000) throw ConfigError("years", "must be in [1, 1000000]");

  out.policy = cfg.at("policy");
  if (out.policy != "constant" && out.policy != "bang-bang" && out.policy != "composite") {
    throw ConfigError("policy", "expected constant, bang-bang or composite");
  }
  out.effort = parse_optional(cfg, "effort");
  out.switch_time = parse_optional(cfg, "switch_time");
  out.first_effort = parse_optional(cfg, "first_effort").value_or(out.econ.effort_max());
  out.second_effort = parse_optional(cfg, "second_effort").value_or(out.econ.effort_min());

  const auto plane = parse_plane(cfg.at("plane"));
  if (!plane) throw ConfigError("plane", "expected E-vs-R, R-vs-T or E-vs-T");
  out.plane = *plane;
  const PlaneDefaults pd = plane_defaults(out.plane, out.habitat);
  if (cfg.at("fixed").empty()) {
    out.fixed = {pd.fixed};
  } else {
    for (const auto& part : split(cfg.at("fixed"), ',')) out.fixed.push_back(parse_double("fixed", part));
  }
  out.abscissa = read_axis(cfg, "abscissa", pd.abscissa);
  out.ordinate = read_axis(cfg, "ordinate", pd.ordinate);

  out.sweep = parse_sweep(cfg.at("sweep"));
  if (command == "sweep" && out.sweep.empty()) {
    throw ConfigError("sweep", "name one or two parameters as name:lo:hi:count[;...]");
  }
  out.sweep_effort = parse_optional(cfg, "sweep_effort").value_or(out.econ.effort_min());
  if (out.sweep_effort < 0.0) throw InvalidParameter("sweep_effort", "must be >= 0");

  out.references.constant = parse_optional(cfg, "reference_constant");
  out.references.bang_bang = parse_optional(cfg, "reference_bang_bang");
  out.references.composite = parse_optional(cfg, "reference_composite");

  if (command == "simulate-years") (void)make_policy(out, out.econ, out.habitat);
  if (command == "bifurcation") {
    for (double f : out.fixed) {
      validate(PlaneSpec{out.plane, f, out.habitat, out.abscissa, out.ordinate});
    }
  }
  return out;
}

EffortPolicy make_policy(const RunConfig& config, const EconParams& econ,
                         const HabitatParams& params) {
  if (config.policy == "constant") {
    if (!config.effort) throw ConfigError("effort", "constant policy needs an effort");
    return EffortPolicy::constant(*config.effort, econ, params);
  }
  if (config.policy == "bang-bang") {
    if (!config.switch_time) throw ConfigError("switch_time", "bang-bang policy needs a switch time");
    return EffortPolicy::bang_bang(config.first_effort, config.second_effort, *config.switch_time,
                                   econ, params);
  }
  return EffortPolicy::composite(econ, params);
}

}  // namespace mpa::cli
