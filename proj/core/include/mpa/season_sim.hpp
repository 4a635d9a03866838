#pragma once

#include <optional>
#include <vector>

#include "mpa/control.hpp"
#include "mpa/params.hpp"

namespace mpa {

/// Total biomass below which a population counts as extinct.
inline constexpr double kExtinctionThreshold = 1e-9;

struct YearlyRecord {
  long year = 0;
  PatchState start;     // ((1 - R) J, R J)
  PatchState end;
  double recruits = 0.0;
  double revenue = 0.0;
  double discounted_revenue = 0.0;  // (1 - discount)^year * revenue
  bool extinct = false;
};

struct HorizonResult {
  std::vector<YearlyRecord> records;
  double total_discounted = 0.0;
  bool persistent = false;
  std::vector<double> start_total_diffs;  // |x(k) - x(k-1)| of season-start totals
  std::optional<long> extinction_year;
  std::vector<Trajectory> seasons;        // empty for extinct years
};

/// Alternates Beverton-Holt recruitment from the previous season-end total
/// with a harvested season under `policy`. `x_init` is the total biomass
/// entering the first recruitment; years are numbered from `first_year` for
/// discounting.
HorizonResult run_years(double x_init, long years, const EffortPolicy& policy,
                        const EconParams& econ, const HabitatParams& params, double step,
                        long first_year = 1);

/// Season-end total x with x = F r x / (1 + beta x). Constant policies use
/// the closed form (alpha - 1) / beta; other policies are iterated until
/// successive totals agree to 1e-8 (nullopt after 10^4 years or on
/// extinction).
std::optional<double> seasonal_fixed_point(const EffortPolicy& policy, const EconParams& econ,
                                           const HabitatParams& params, double step);

}  // namespace mpa
