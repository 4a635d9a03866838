#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpa/control.hpp"
#include "mpa/params.hpp"
#include "mpa/persistence.hpp"
#include "mpa/strategy.hpp"

namespace mpa::cli {

/// A configuration source named an unknown key or carried a malformed value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Format { Csv, Json };

/// Flat key/value layer. Values are kept as text so that every layer parses
/// the same way and the resolved set can be echoed verbatim.
using Layer = std::map<std::string, std::string>;

/// Known keys in output order.
const std::vector<std::string>& config_keys();

Layer default_layer();
Layer preset_layer(const std::string& name);
Layer file_layer(const std::string& path);

/// Parses "--key value" pairs left over after the fixed options.
Layer flag_layer(const std::vector<std::string>& args);

struct SweepAxis {
  std::string key;
  Axis axis;
};

struct RunConfig {
  std::string command;
  Layer resolved;  // every key after layering, echoed into output headers

  HabitatParams habitat{HabitatSpec{}};
  EconParams econ{EconSpec{}};
  double step = 0.0;
  std::optional<PatchState> x0;
  std::optional<double> x_init;
  long years = 3;

  std::string policy;
  std::optional<double> effort;
  std::optional<double> switch_time;
  double first_effort = 0.0;
  double second_effort = 0.0;

  Plane plane = Plane::EffortVsReserve;
  std::vector<double> fixed;
  Axis abscissa;
  Axis ordinate;

  std::vector<SweepAxis> sweep;
  double sweep_effort = 0.0;

  ReferenceRevenues references;
};

/// Merges layers (later wins) and validates every field the command uses.
/// Throws ConfigError for malformed values and InvalidParameter for values
/// outside a parameter domain.
RunConfig resolve(const std::string& command, const std::vector<Layer>& layers);

/// Builds an EffortPolicy from the policy block of a resolved config.
EffortPolicy make_policy(const RunConfig& config, const EconParams& econ,
                         const HabitatParams& params);

/// Sets the habitat or economics field named by a config key.
void apply_numeric(HabitatSpec& habitat, EconSpec& econ, const std::string& key, double value);

}  // namespace mpa::cli
