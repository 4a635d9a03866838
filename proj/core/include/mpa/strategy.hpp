#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpa/control.hpp"
#include "mpa/params.hpp"

namespace mpa {

/// Searches stop once the bracket is at most this wide.
inline constexpr double kSearchTolerance = 1e-6;

/// Points in the bracketing scan that precedes golden-section refinement.
inline constexpr int kCoarseScanPoints = 65;

struct SearchResult {
  double argmax = 0.0;
  double value = 0.0;
};

/// Maximises `fn` on [lo, hi]: a uniform scan locates the best cell, then
/// golden-section narrows it to `tolerance`. Endpoints are always compared.
SearchResult golden_maximize(const std::function<double(double)>& fn, double lo, double hi,
                             double tolerance = kSearchTolerance);

/// Best value of `fn` on an evenly spaced grid of `points` nodes.
SearchResult grid_maximize(const std::function<double(double)>& fn, double lo, double hi,
                           int points);

/// Season revenue under a constant effort.
double constant_revenue(double effort, const PatchState& x0, const EconParams& econ,
                        const HabitatParams& params, double step);

struct ConstantOptimum {
  double effort = 0.0;
  double revenue = 0.0;
  double upper = 0.0;  // top of the searched interval
};

/// Revenue-maximising constant effort on [E_min, E_max], or with
/// `sustainability_cap` on [E_min, min(E_max, E*)] where E* is the effort
/// boundary. Throws NumericalError(InfeasibleBounds) when the capped
/// interval is empty.
ConstantOptimum best_constant_effort(const PatchState& x0, const EconParams& econ,
                                     const HabitatParams& params, bool sustainability_cap,
                                     double step);

enum class SwitchOrder { HighToLow, LowToHigh };

std::string_view to_string(SwitchOrder order) noexcept;

/// Season revenue of a single-switch policy.
double bang_bang_revenue(double switch_time, SwitchOrder order, const PatchState& x0,
                         const EconParams& econ, const HabitatParams& params, double step);

struct BangBangOptimum {
  double switch_time = 0.0;
  SwitchOrder order = SwitchOrder::HighToLow;
  double revenue = 0.0;
};

/// Best switch time in [0, T] over both orders of E_max and E_min.
BangBangOptimum best_bang_bang(const PatchState& x0, const EconParams& econ,
                               const HabitatParams& params, double step);

EffortPolicy bang_bang_policy(const BangBangOptimum& opt, const EconParams& econ,
                              const HabitatParams& params);

/// Published revenues to compare against; a computed revenue more than 5%
/// away from its reference is flagged.
struct ReferenceRevenues {
  std::optional<double> constant;
  std::optional<double> bang_bang;
  std::optional<double> composite;
};

inline constexpr double kReferenceBand = 0.05;

struct StrategyRecord {
  std::string name;                   // "constant", "bang-bang" or "composite"
  std::optional<EffortPolicy> policy;
  std::optional<double> revenue;      // empty when the policy failed
  std::optional<PatchState> terminal;
  std::optional<double> season_alpha; // r * total(T) / total(0)
  bool persistent = false;            // season_alpha > 1
  std::optional<double> reference;
  std::vector<std::string> flags;
  std::optional<Trajectory> trajectory;
  std::optional<AdjointSweep> adjoint;
};

struct StrategyReport {
  PatchState initial;
  double step = 0.0;
  std::vector<StrategyRecord> records;  // fixed order: constant, bang-bang, composite
  std::vector<std::size_t> ranking;     // indices into records by revenue, best first

  const StrategyRecord& record(std::string_view name) const;
};

/// Runs the best sustainable constant effort, the best single-switch
/// bang-bang and the composite feedback on a shared step, attaches adjoint
/// diagnostics and ranks by revenue. Per-policy failures become flags.
StrategyReport compare_strategies(const PatchState& x0, const EconParams& econ,
                                  const HabitatParams& params, double step,
                                  const ReferenceRevenues& references = {});

/// ((1 - R) J, R J) with J the recruitment from the non-harvested
/// equilibrium; falls back to J = 1 when that equilibrium does not exist.
PatchState default_initial_state(const HabitatParams& params);

}  // namespace mpa
