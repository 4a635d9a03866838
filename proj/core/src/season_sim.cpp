#include "mpa/season_sim.hpp"

#include <cmath>

#include "mpa/errors.hpp"
#include "mpa/model.hpp"
#include "mpa/persistence.hpp"

namespace mpa {

namespace {

constexpr long kFixedPointYears = 10000;
constexpr double kFixedPointTolerance = 1e-8;

}  // namespace

HorizonResult run_years(double x_init, long years, const EffortPolicy& policy,
                        const EconParams& econ, const HabitatParams& params, double step,
                        long first_year) {
  if (!(x_init > 0.0) || !std::isfinite(x_init)) {
    throw InvalidParameter("x_init", "initial total biomass must be > 0");
  }
  if (years < 1) throw InvalidParameter("years", "at least one year is required");

  HorizonResult out;
  out.records.reserve(static_cast<std::size_t>(years));
  const double keep = 1.0 - econ.discount();
  double total = x_init;
  for (long i = 0; i < years; ++i) {
    YearlyRecord rec;
    rec.year = first_year + i;
    if (!out.extinction_year) {
      rec.recruits = beverton_holt(total, params);
      rec.start = split_recruits(rec.recruits, params);
      Trajectory traj = integrate_season(rec.start, policy, econ, params, step);
      rec.end = traj.terminal();
      rec.revenue = traj.final_revenue();
      rec.discounted_revenue = std::pow(keep, static_cast<double>(rec.year)) * rec.revenue;
      out.seasons.push_back(std::move(traj));
      total = rec.end.total();
      if (total < kExtinctionThreshold) {
        rec.extinct = true;
        out.extinction_year = rec.year;
      }
    } else {
      rec.extinct = true;
    }
    out.total_discounted += rec.discounted_revenue;
    if (!out.records.empty()) {
      out.start_total_diffs.push_back(
          std::abs(rec.start.total() - out.records.back().start.total()));
    }
    out.records.push_back(rec);
  }

  const YearlyRecord& last = out.records.back();
  out.persistent = !out.extinction_year && last.start.total() > 0.0 &&
                   params.growth_rate() * last.end.total() / last.start.total() >
                       1.0 + kPersistenceMargin;
  return out;
}

std::optional<double> seasonal_fixed_point(const EffortPolicy& policy, const EconParams& econ,
                                           const HabitatParams& params, double step) {
  if (const auto* c = std::get_if<ConstantEffort>(&policy.kind())) {
    return equilibria(alpha(params, c->effort), params.density_coeff()).interior;
  }
  const auto eq = nonharvested_equilibrium(params);
  double total = eq ? *eq : 1.0;
  for (long k = 0; k < kFixedPointYears; ++k) {
    const HorizonResult year = run_years(total, 1, policy, econ, params, step, k + 1);
    if (year.extinction_year) return std::nullopt;
    const double next = year.records.front().end.total();
    if (std::abs(next - total) <= kFixedPointTolerance) return next;
    total = next;
  }
  return std::nullopt;
}

}  // namespace mpa
