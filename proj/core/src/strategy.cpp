#include "mpa/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpa/errors.hpp"
#include "mpa/model.hpp"
#include "mpa/persistence.hpp"

namespace mpa {
namespace {

constexpr double kInvGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Stay strictly inside the sustainable region: alpha(E* - 1e-8) > 1.
constexpr double kBoundaryBackoff = 1e-8;

SearchResult golden_section(const std::function<double(double)>& fn, double a, double b,
                            double tolerance) {
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  while (b - a > tolerance) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = fn(x2);
    }
  }
  return f1 >= f2 ? SearchResult{x1, f1} : SearchResult{x2, f2};
}

}  // namespace

SearchResult golden_maximize(const std::function<double(double)>& fn, double lo, double hi,
                             double tolerance) {
  if (!(hi > lo)) return {lo, fn(lo)};
  const int n = kCoarseScanPoints;
  std::vector<double> xs(n);
  std::vector<double> fs(n);
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    fs[i] = fn(xs[i]);
    if (fs[i] > fs[best]) best = static_cast<std::size_t>(i);
  }
  SearchResult out{xs[best], fs[best]};
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min<std::size_t>(best + 1, n - 1)];
  const SearchResult refined = golden_section(fn, a, b, tolerance);
  if (refined.value > out.value) out = refined;
  return out;
}

SearchResult grid_maximize(const std::function<double(double)>& fn, double lo, double hi,
                           int points) {
  if (points < 2 || !(hi > lo)) return {lo, fn(lo)};
  SearchResult out{lo, fn(lo)};
  for (int i = 1; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    const double f = fn(x);
    if (f > out.value) out = {x, f};
  }
  return out;
}

double constant_revenue(double effort, const PatchState& x0, const EconParams& econ,
                        const HabitatParams& params, double step) {
  const auto policy = EffortPolicy::constant(effort, econ, params);
  return integrate_season(x0, policy, econ, params, step).final_revenue();
}

ConstantOptimum best_constant_effort(const PatchState& x0, const EconParams& econ,
                                     const HabitatParams& params, bool sustainability_cap,
                                     double step) {
  if (!(x0.fishery > 0.0) || !(x0.reserve >= 0.0)) {
    throw InvalidParameter("x0", "initial state must be positive");
  }
  double upper = econ.effort_max();
  if (sustainability_cap) {
    const EffortBoundary boundary = effort_boundary(params);
    if (boundary.status == BoundaryStatus::NeverPersistent) {
      throw NumericalError(ErrorCode::InfeasibleBounds,
                           "no positive effort keeps alpha above 1");
    }
    if (boundary.status == BoundaryStatus::Found) {
      const double cap = *boundary.effort;
      if (cap < econ.effort_min()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "effort boundary " << cap << " lies below E_min " << econ.effort_min();
        throw NumericalError(ErrorCode::InfeasibleBounds, msg.str());
      }
      upper = std::min(upper, std::max(econ.effort_min(), cap - kBoundaryBackoff));
    }
  }
  auto revenue = [&](double E) { return constant_revenue(E, x0, econ, params, step); };
  const SearchResult best = golden_maximize(revenue, econ.effort_min(), upper);
  return {best.argmax, best.value, upper};
}

std::string_view to_string(SwitchOrder order) noexcept {
  return order == SwitchOrder::HighToLow ? "high-to-low" : "low-to-high";
}

namespace {

EffortPolicy make_bang_bang(double switch_time, SwitchOrder order, const EconParams& econ,
                            const HabitatParams& params) {
  const double hi = econ.effort_max();
  const double lo = econ.effort_min();
  return order == SwitchOrder::HighToLow
             ? EffortPolicy::bang_bang(hi, lo, switch_time, econ, params)
             : EffortPolicy::bang_bang(lo, hi, switch_time, econ, params);
}

}  // namespace

double bang_bang_revenue(double switch_time, SwitchOrder order, const PatchState& x0,
                         const EconParams& econ, const HabitatParams& params, double step) {
  const auto policy = make_bang_bang(switch_time, order, econ, params);
  return integrate_season(x0, policy, econ, params, step).final_revenue();
}

BangBangOptimum best_bang_bang(const PatchState& x0, const EconParams& econ,
                               const HabitatParams& params, double step) {
  if (!(x0.fishery > 0.0) || !(x0.reserve >= 0.0)) {
    throw InvalidParameter("x0", "initial state must be positive");
  }
  BangBangOptimum out;
  bool first = true;
  for (SwitchOrder order : {SwitchOrder::HighToLow, SwitchOrder::LowToHigh}) {
    auto revenue = [&](double t) { return bang_bang_revenue(t, order, x0, econ, params, step); };
    const SearchResult r = golden_maximize(revenue, 0.0, params.season_length());
    if (first || r.value > out.revenue) out = {r.argmax, order, r.value};
    first = false;
  }
  return out;
}

EffortPolicy bang_bang_policy(const BangBangOptimum& opt, const EconParams& econ,
                              const HabitatParams& params) {
  return make_bang_bang(opt.switch_time, opt.order, econ, params);
}

const StrategyRecord& StrategyReport::record(std::string_view name) const {
  for (const auto& r : records) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no strategy named " + std::string(name));
}

namespace {

std::string error_flag(const std::exception& e) {
  if (const auto* n = dynamic_cast<const NumericalError*>(&e)) {
    return "error:" + std::string(to_string(n->code()));
  }
  if (const auto* p = dynamic_cast<const InvalidParameter*>(&e)) {
    return "invalid:" + p->field();
  }
  return "error:unknown";
}

void run_policy(StrategyRecord& rec, const PatchState& x0, const EconParams& econ,
                const HabitatParams& params, double step) {
  Trajectory traj = integrate_season(x0, *rec.policy, econ, params, step);
  rec.revenue = traj.final_revenue();
  rec.terminal = traj.terminal();
  if (x0.total() > 0.0) {
    rec.season_alpha = params.growth_rate() * traj.terminal().total() / x0.total();
    rec.persistent = *rec.season_alpha > 1.0 + kPersistenceMargin;
  }
  if (traj.clipped) rec.flags.emplace_back("clipped");
  if (!(traj.terminal().fishery > 0.0) || !(traj.terminal().reserve > 0.0)) {
    rec.flags.emplace_back("terminal_not_positive");
  }
  try {
    AdjointSweep sweep = adjoint_sweep(traj, econ, params);
    if (!rec.policy->is_feedback()) {
      const int violations = bang_sign_violations(traj, sweep, econ);
      if (violations > 0 && rec.name == "bang-bang") {
        rec.flags.push_back("switching_sign_violations=" + std::to_string(violations));
      }
    }
    rec.adjoint = std::move(sweep);
  } catch (const NumericalError& e) {
    rec.flags.push_back("adjoint_" + error_flag(e));
  }
  rec.trajectory = std::move(traj);
}

}  // namespace

StrategyReport compare_strategies(const PatchState& x0, const EconParams& econ,
                                  const HabitatParams& params, double step,
                                  const ReferenceRevenues& references) {
  if (!(x0.fishery > 0.0) || !(x0.reserve > 0.0)) {
    throw InvalidParameter("x0", "initial state must be positive");
  }
  StrategyReport report;
  report.initial = x0;
  report.step = step;

  StrategyRecord constant;
  constant.name = "constant";
  constant.reference = references.constant;
  try {
    ConstantOptimum opt;
    try {
      opt = best_constant_effort(x0, econ, params, true, step);
    } catch (const NumericalError& e) {
      if (e.code() != ErrorCode::InfeasibleBounds) throw;
      constant.flags.emplace_back("sustainable_interval_empty");
      opt = best_constant_effort(x0, econ, params, false, step);
    }
    constant.policy = EffortPolicy::constant(opt.effort, econ, params);
    run_policy(constant, x0, econ, params, step);
  } catch (const std::exception& e) {
    constant.flags.push_back(error_flag(e));
  }
  report.records.push_back(std::move(constant));

  StrategyRecord bang;
  bang.name = "bang-bang";
  bang.reference = references.bang_bang;
  try {
    const BangBangOptimum opt = best_bang_bang(x0, econ, params, step);
    bang.policy = bang_bang_policy(opt, econ, params);
    run_policy(bang, x0, econ, params, step);
  } catch (const std::exception& e) {
    bang.flags.push_back(error_flag(e));
  }
  report.records.push_back(std::move(bang));

  StrategyRecord composite;
  composite.name = "composite";
  composite.reference = references.composite;
  try {
    composite.policy = EffortPolicy::composite(econ, params);
    run_policy(composite, x0, econ, params, step);
  } catch (const std::exception& e) {
    composite.flags.push_back(error_flag(e));
  }
  report.records.push_back(std::move(composite));

  for (auto& rec : report.records) {
    if (rec.reference && rec.revenue &&
        std::abs(*rec.revenue - *rec.reference) > kReferenceBand * std::abs(*rec.reference)) {
      rec.flags.emplace_back("reference_deviation");
    }
  }

  for (std::size_t i = 0; i < report.records.size(); ++i) {
    if (report.records[i].revenue) report.ranking.push_back(i);
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    return *report.records[a].revenue > *report.records[b].revenue;
  });
  return report;
}

PatchState default_initial_state(const HabitatParams& params) {
  const auto eq = nonharvested_equilibrium(params);
  const double recruits = eq ? beverton_holt(*eq, params) : 1.0;
  return split_recruits(recruits, params);
}

}  // namespace mpa
