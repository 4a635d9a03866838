#include "mpa/persistence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mpa/errors.hpp"
#include "mpa/model.hpp"

namespace mpa {
namespace {

constexpr int kMaxBisections = 300;

// Bisection on a bracket [lo, hi] where g(lo) > 0 >= g(hi) (or the reverse),
// stopping once |g| <= tol.
template <class Fn>
double bisect(Fn&& g, double lo, double hi, double tol) {
  double glo = g(lo);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisections; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) <= tol || mid == lo || mid == hi) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return mid;
}

std::vector<double> effort_probe_grid() {
  // 0, then 1e-4 .. kEffortProbeCap with 8 points per decade
  std::vector<double> grid{0.0};
  for (int j = 0; j <= 80; ++j) grid.push_back(1e-4 * std::pow(10.0, j / 8.0));
  grid.back() = kEffortProbeCap;
  return grid;
}

}  // namespace

double alpha(const HabitatParams& params, double effort) {
  return survival_factor(params, effort) * params.growth_rate();
}

bool is_persistent(const HabitatParams& params, double effort) {
  return alpha(params, effort) > 1.0 + kPersistenceMargin;
}

bool nonharvested_persistence(const HabitatParams& params) {
  // same expression alpha(params, 0) evaluates
  const double a = std::exp(-params.death_rate() * params.season_length()) * params.growth_rate();
  return a > 1.0 + kPersistenceMargin;
}

std::optional<double> nonharvested_equilibrium(const HabitatParams& params) {
  if (!nonharvested_persistence(params)) return std::nullopt;
  const double a = std::exp(-params.death_rate() * params.season_length()) * params.growth_rate();
  return (a - 1.0) / params.density_coeff();
}

double large_effort_alpha(const HabitatParams& params) {
  const double R = params.reserve_fraction();
  const double T = params.season_length();
  return params.growth_rate() * R *
         std::exp(-T * (params.death_rate() + params.dispersal() * (1.0 - R)));
}

std::string_view to_string(BoundaryStatus status) noexcept {
  switch (status) {
    case BoundaryStatus::Found: return "found";
    case BoundaryStatus::NeverPersistent: return "never-persistent";
    case BoundaryStatus::NoFiniteCap: return "no-finite-cap";
  }
  return "unknown";
}

EffortBoundary effort_boundary(const HabitatParams& params) {
  if (!is_persistent(params, 0.0)) return {BoundaryStatus::NeverPersistent, std::nullopt};
  if (params.season_length() == 0.0) return {BoundaryStatus::NoFiniteCap, std::nullopt};

  auto excess = [&](double e) { return alpha(params, e) - 1.0; };

  std::vector<double> grid = effort_probe_grid();
  int changes = 0;
  std::optional<std::size_t> bracket;
  double prev = excess(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = excess(grid[i]);
    if ((cur > 0.0) != (prev > 0.0)) {
      ++changes;
      if (!bracket) bracket = i - 1;
    }
    prev = cur;
  }
  if (changes > 1) {
    throw NumericalError(ErrorCode::NonMonotoneBracket,
                         "alpha - 1 changes sign " + std::to_string(changes) +
                             " times on the effort probe grid");
  }

  double lo = 0.0;
  double hi = 0.0;
  if (bracket) {
    lo = grid[*bracket];
    hi = grid[*bracket + 1];
  } else {
    // Still persistent at the probe cap: the large-effort limit decides.
    if (large_effort_alpha(params) > 1.0) return {BoundaryStatus::NoFiniteCap, std::nullopt};
    lo = kEffortProbeCap;
    hi = kEffortProbeCap;
    while (excess(hi) > 0.0) {
      lo = hi;
      hi *= 10.0;
      if (hi > 1e15) return {BoundaryStatus::NoFiniteCap, std::nullopt};
    }
  }
  return {BoundaryStatus::Found, bisect(excess, lo, hi, kScalarRootTolerance)};
}

double asymptote_R_threshold(const HabitatParams& params) {
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double T = params.season_length();
  const double r = params.growth_rate();
  // g(R) = r R exp(-T (c + m (1 - R))) - 1 is increasing in R with g(0) = -1.
  auto g = [&](double R) { return r * R * std::exp(-T * (c + m * (1.0 - R))) - 1.0; };
  double hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  return bisect(g, 0.0, hi, 1e-14);
}

double asymptote_R_closed_form(const HabitatParams& params) {
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double T = params.season_length();
  const double r = params.growth_rate();
  return (-r + std::sqrt(r * r + 4.0 * r * T * m * std::exp(T * (c + m)))) / (2.0 * r * T * m);
}

std::string_view to_string(Plane plane) noexcept {
  switch (plane) {
    case Plane::EffortVsReserve: return "E-vs-R";
    case Plane::SeasonVsReserve: return "R-vs-T";
    case Plane::SeasonVsEffort: return "E-vs-T";
  }
  return "unknown";
}

std::optional<Plane> parse_plane(std::string_view name) noexcept {
  if (name == "E-vs-R") return Plane::EffortVsReserve;
  if (name == "R-vs-T") return Plane::SeasonVsReserve;
  if (name == "E-vs-T") return Plane::SeasonVsEffort;
  return std::nullopt;
}

double Axis::at(int i) const noexcept {
  if (i == count - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::string_view to_string(ColumnStatus status) noexcept {
  switch (status) {
    case ColumnStatus::Boundary: return "boundary";
    case ColumnStatus::AllPersistent: return "all-persistent";
    case ColumnStatus::NonePersistent: return "none-persistent";
    case ColumnStatus::NonMonotone: return "non-monotone";
  }
  return "unknown";
}

namespace {

constexpr double kMaxReserve = 1.0 - 1e-9;

void check_axis(const Axis& axis, const char* field, double lo, double hi) {
  if (axis.count < 2) throw InvalidParameter(field, "grid needs at least 2 points");
  if (!(axis.lo <= axis.hi)) throw InvalidParameter(field, "range must satisfy lo <= hi");
  if (axis.lo < lo || axis.hi > hi) {
    throw InvalidParameter(field, "range leaves the parameter domain [" + std::to_string(lo) +
                                      ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

void validate(const PlaneSpec& spec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (spec.plane) {
    case Plane::EffortVsReserve:
      check_axis(spec.abscissa, "abscissa", 0.0, kMaxReserve);
      check_axis(spec.ordinate, "ordinate", 0.0, inf);
      if (spec.fixed < 0.0 || spec.fixed > 1.0) throw InvalidParameter("fixed", "T must lie in [0, 1]");
      break;
    case Plane::SeasonVsReserve:
      check_axis(spec.abscissa, "abscissa", 0.0, kMaxReserve);
      check_axis(spec.ordinate, "ordinate", 0.0, 1.0);
      if (spec.fixed < 0.0) throw InvalidParameter("fixed", "E must be >= 0");
      break;
    case Plane::SeasonVsEffort:
      check_axis(spec.abscissa, "abscissa", 0.0, inf);
      check_axis(spec.ordinate, "ordinate", 0.0, 1.0);
      if (spec.fixed < 0.0 || spec.fixed > kMaxReserve) {
        throw InvalidParameter("fixed", "R must lie in [0, 1)");
      }
      break;
  }
}

double plane_alpha(const PlaneSpec& spec, double abscissa, double ordinate) {
  switch (spec.plane) {
    case Plane::EffortVsReserve:
      return alpha(spec.params.with_reserve_fraction(abscissa).with_season_length(spec.fixed),
                   ordinate);
    case Plane::SeasonVsReserve:
      return alpha(spec.params.with_reserve_fraction(abscissa).with_season_length(ordinate),
                   spec.fixed);
    case Plane::SeasonVsEffort:
      return alpha(spec.params.with_reserve_fraction(spec.fixed).with_season_length(ordinate),
                   abscissa);
  }
  return 0.0;
}

BoundaryCurve trace_boundary(const PlaneSpec& spec) {
  validate(spec);
  BoundaryCurve curve{spec, {}, std::nullopt};
  if (spec.plane == Plane::EffortVsReserve && spec.fixed > 0.0 && spec.params.dispersal() > 0.0) {
    curve.asymptote = asymptote_R_threshold(spec.params.with_season_length(spec.fixed));
  }

  curve.points.reserve(static_cast<std::size_t>(spec.abscissa.count));
  for (int i = 0; i < spec.abscissa.count; ++i) {
    const double x = spec.abscissa.at(i);
    auto excess = [&](double y) { return plane_alpha(spec, x, y) - 1.0; };

    BoundaryPoint point;
    point.abscissa = x;

    int changes = 0;
    int bracket = -1;
    double prev = excess(spec.ordinate.at(0));
    const bool first_persistent = prev > 0.0;
    for (int j = 1; j < spec.ordinate.count; ++j) {
      const double cur = excess(spec.ordinate.at(j));
      if ((cur > 0.0) != (prev > 0.0)) {
        ++changes;
        if (bracket < 0) bracket = j - 1;
      }
      prev = cur;
    }

    if (changes > 1) {
      point.status = ColumnStatus::NonMonotone;
      point.alpha_check = prev + 1.0;
    } else if (changes == 0) {
      point.status = first_persistent ? ColumnStatus::AllPersistent : ColumnStatus::NonePersistent;
      point.alpha_check = prev + 1.0;
    } else {
      const double y = bisect(excess, spec.ordinate.at(bracket), spec.ordinate.at(bracket + 1),
                              kCurveRootTolerance);
      point.status = ColumnStatus::Boundary;
      point.ordinate = y;
      point.alpha_check = excess(y) + 1.0;
    }
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace mpa
