#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mpa/params.hpp"

namespace mpa {

/// alpha must exceed 1 by this margin to count as persistent, so inputs built
/// to sit exactly on the transcritical point are not decided by rounding.
inline constexpr double kPersistenceMargin = 1e-12;

/// Effort probes for the "no finite cap" decision stop here; beyond it the
/// closed-form large-effort limit decides.
inline constexpr double kEffortProbeCap = 1e6;

inline constexpr double kScalarRootTolerance = 1e-10;
inline constexpr double kCurveRootTolerance = 1e-8;

/// Annual multiplier alpha = F r of the discrete map.
double alpha(const HabitatParams& params, double effort);

bool is_persistent(const HabitatParams& params, double effort);

/// r > exp(cT): persistence without harvesting. Agrees exactly with
/// is_persistent(params, 0).
bool nonharvested_persistence(const HabitatParams& params);

/// (exp(-cT) r - 1) / beta when the unharvested population persists.
std::optional<double> nonharvested_equilibrium(const HabitatParams& params);

/// Survival multiplier r R exp(-T [c + m (1 - R)]) approached as effort -> inf.
double large_effort_alpha(const HabitatParams& params);

enum class BoundaryStatus { Found, NeverPersistent, NoFiniteCap };

std::string_view to_string(BoundaryStatus status) noexcept;

struct EffortBoundary {
  BoundaryStatus status = BoundaryStatus::NeverPersistent;
  std::optional<double> effort;  // E* with alpha(E*) = 1 when status == Found
};

/// Largest sustainable constant effort. Throws NumericalError
/// (NonMonotoneBracket) if alpha - 1 changes sign more than once on the probe.
EffortBoundary effort_boundary(const HabitatParams& params);

/// Reserve fraction above which no finite effort drives alpha below 1: the
/// root in R of r R exp(-T [c + m (1 - R)]) = 1. Requires T > 0, m > 0.
double asymptote_R_threshold(const HabitatParams& params);

/// Quadratic approximation (-r + sqrt(r^2 + 4 r T m e^{T(c+m)})) / (2 r T m)
/// of the same threshold, obtained by linearising exp(T m R).
double asymptote_R_closed_form(const HabitatParams& params);

enum class Plane {
  EffortVsReserve,  // "E-vs-R": ordinate E, abscissa R, fixed T
  SeasonVsReserve,  // "R-vs-T": ordinate T, abscissa R, fixed E
  SeasonVsEffort,   // "E-vs-T": ordinate T, abscissa E, fixed R
};

std::string_view to_string(Plane plane) noexcept;
std::optional<Plane> parse_plane(std::string_view name) noexcept;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;

  double at(int i) const noexcept;
};

struct PlaneSpec {
  Plane plane = Plane::SeasonVsReserve;
  double fixed = 0.0;
  HabitatParams params;
  Axis abscissa;
  Axis ordinate;  // search range and probe resolution per column
};

/// Throws InvalidParameter if a grid leaves the parameter domain or has
/// fewer than two points.
void validate(const PlaneSpec& spec);

enum class ColumnStatus { Boundary, AllPersistent, NonePersistent, NonMonotone };

std::string_view to_string(ColumnStatus status) noexcept;

struct BoundaryPoint {
  double abscissa = 0.0;
  std::optional<double> ordinate;
  double alpha_check = 0.0;  // alpha at the ordinate (or at the range top when absent)
  ColumnStatus status = ColumnStatus::NonePersistent;
};

struct BoundaryCurve {
  PlaneSpec spec;
  std::vector<BoundaryPoint> points;
  std::optional<double> asymptote;  // R threshold, E-vs-R plane only
};

BoundaryCurve trace_boundary(const PlaneSpec& spec);

/// alpha at a plane coordinate (abscissa, ordinate).
double plane_alpha(const PlaneSpec& spec, double abscissa, double ordinate);

}  // namespace mpa
