#include <algorithm>
#include <array>
#include <cmath>

#include "mpa/control.hpp"
#include "mpa/errors.hpp"

namespace mpa {
namespace {

constexpr double kProbeTolerance = 1e-6;
constexpr double kClipTolerance = 1e-12;

// Augmented state: fishery, reserve, cumulative revenue.
using State = std::array<double, 3>;

State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

struct Rhs {
  const EffortPolicy& policy;
  const EconParams& econ;
  const HabitatParams& params;
  double scheduled = 0.0;  // effort of the current segment for time-based policies

  double effort(const State& y) const {
    if (!policy.is_feedback()) return scheduled;
    return policy.feedback_effort({y[0], y[1]}, econ, params);
  }

  State operator()(const State& y, double E) const {
    const double c = params.death_rate();
    const double m = params.dispersal();
    const double q = params.catchability();
    const double R = params.reserve_fraction();
    const double x1 = y[0];
    const double x2 = y[1];
    return {-c * x1 - q * E * x1 + m * ((1.0 - R) * x2 - R * x1),
            -c * x2 + m * (R * x1 - (1.0 - R) * x2),
            (econ.price() * q * x1 - econ.cost()) * E};
  }
};

struct StepResult {
  State y;
  StepEfforts efforts;
};

StepResult rk4_step(const Rhs& rhs, const State& y, double h) {
  const double e1 = rhs.effort(y);
  const State k1 = rhs(y, e1);
  const State y2 = axpy(y, 0.5 * h, k1);
  const double e2 = rhs.effort(y2);
  const State k2 = rhs(y2, e2);
  const State y3 = axpy(y, 0.5 * h, k2);
  const double e3 = rhs.effort(y3);
  const State k3 = rhs(y3, e3);
  const State y4 = axpy(y, h, k3);
  const double e4 = rhs.effort(y4);
  const State k4 = rhs(y4, e4);
  State out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return {out, {e1, 0.5 * (e2 + e3), e4}};
}

void probe_first_step(const Rhs& rhs, const State& y, double h) {
  const State full = rk4_step(rhs, y, h).y;
  const State half = rk4_step(rhs, rk4_step(rhs, y, 0.5 * h).y, 0.5 * h).y;
  double err = 0.0;
  double scale = 1.0;
  for (int i = 0; i < 3; ++i) {
    err = std::max(err, std::abs(full[i] - half[i]) / 15.0);
    scale = std::max(scale, 1.0 + std::abs(y[i]));
  }
  if (err > kProbeTolerance * scale) {
    throw NumericalError(ErrorCode::StepTooLarge,
                         "step-doubling probe estimates a local error above 1e-6");
  }
}

}  // namespace

double default_step(const HabitatParams& params) noexcept {
  return params.season_length() / 2000.0;
}

double Trajectory::mean_effort() const {
  if (times.size() < 2) return efforts.empty() ? 0.0 : efforts.front();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    sum += h / 6.0 * (steps[i].start + 4.0 * steps[i].mid + steps[i].end);
  }
  return sum / (times.back() - times.front());
}

Trajectory integrate_season(const PatchState& start, const EffortPolicy& policy,
                            const EconParams& econ, const HabitatParams& params, double step) {
  if (!(start.fishery >= 0.0) || !(start.reserve >= 0.0)) {
    throw InvalidParameter("x0", "initial biomass must be nonnegative");
  }
  const double T = params.season_length();
  Rhs rhs{policy, econ, params};

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(start);
  traj.revenue.push_back(0.0);

  if (T == 0.0) {
    traj.efforts.push_back(policy.is_feedback() ? policy.feedback_effort(start, econ, params)
                                                : policy.scheduled_effort(0.0));
    return traj;
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("step", "step must be > 0");
  if (step > T / 10.0 * (1.0 + 1e-12)) throw InvalidParameter("step", "step must be <= T/10");

  std::vector<double> bounds{0.0};
  for (double b : policy.breakpoints(T)) bounds.push_back(b);
  bounds.push_back(T);

  State y{start.fishery, start.reserve, 0.0};
  bool probed = false;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s];
    const double b = bounds[s + 1];
    const auto n = static_cast<long>(std::max(1.0, std::ceil((b - a) / step - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    rhs.scheduled = policy.scheduled_effort(0.5 * (a + b));

    if (!probed) {
      probe_first_step(rhs, y, h);
      probed = true;
    }
    for (long k = 0; k < n; ++k) {
      StepResult r = rk4_step(rhs, y, h);
      for (int i = 0; i < 2; ++i) {
        if (r.y[i] < 0.0) {
          if (r.y[i] < -kClipTolerance * (1.0 + std::abs(y[i]))) {
            throw NumericalError(ErrorCode::StepTooLarge, "state undershoots zero by more than 1e-12");
          }
          r.y[i] = 0.0;
          traj.clipped = true;
        }
      }
      traj.efforts.push_back(r.efforts.start);
      traj.steps.push_back(r.efforts);
      y = r.y;
      traj.times.push_back(k + 1 == n ? b : a + static_cast<double>(k + 1) * h);
      traj.states.push_back({y[0], y[1]});
      traj.revenue.push_back(y[2]);
    }
  }
  traj.efforts.push_back(policy.is_feedback()
                             ? policy.feedback_effort(traj.states.back(), econ, params)
                             : traj.steps.back().end);
  return traj;
}

namespace {

using Co = std::array<double, 2>;

Co costate_rhs(const Co& p, double E, const EconParams& econ, const HabitatParams& params) {
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double q = params.catchability();
  const double R = params.reserve_fraction();
  return {-(econ.price() * q * E + p[0] * (-c - q * E - m * R) + p[1] * m * R),
          -(p[0] * m * (1.0 - R) + p[1] * (-c - m * (1.0 - R)))};
}

// One backward RK4 step of length h from the right end of an interval.
Co backward_step(const Co& p, double h, const StepEfforts& e, const EconParams& econ,
                 const HabitatParams& params) {
  auto sub = [](const Co& a, double s, const Co& k) { return Co{a[0] - s * k[0], a[1] - s * k[1]}; };
  const Co k1 = costate_rhs(p, e.end, econ, params);
  const Co k2 = costate_rhs(sub(p, 0.5 * h, k1), e.mid, econ, params);
  const Co k3 = costate_rhs(sub(p, 0.5 * h, k2), e.mid, econ, params);
  const Co k4 = costate_rhs(sub(p, h, k3), e.start, econ, params);
  return {p[0] - h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          p[1] - h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

}  // namespace

AdjointSweep adjoint_sweep(const Trajectory& traj, const EconParams& econ,
                           const HabitatParams& params, double tolerance) {
  const std::size_t n = traj.times.size();
  AdjointSweep sweep;
  sweep.costates.assign(n, Costate{});
  if (n >= 2 && traj.steps.size() + 1 != n) {
    throw NumericalError(ErrorCode::StepMismatch, "trajectory carries no stage efforts");
  }
  if (n == 2) {
    throw NumericalError(ErrorCode::StepMismatch,
                         "a single step leaves no room for a step-halving estimate");
  }

  Co p{0.0, 0.0};
  for (std::size_t i = n - 1; i > 0; --i) {
    p = backward_step(p, traj.times[i] - traj.times[i - 1], traj.steps[i - 1], econ, params);
    sweep.costates[i - 1] = {p[0], p[1]};
  }

  if (n > 2) {
    // Same sweep on doubled steps wherever two neighbours share a length.
    Co coarse{0.0, 0.0};
    std::size_t i = n - 1;
    while (i > 0) {
      const double h1 = traj.times[i] - traj.times[i - 1];
      if (i >= 2) {
        const double h0 = traj.times[i - 1] - traj.times[i - 2];
        if (std::abs(h1 - h0) <= 1e-12 * std::max(h0, h1)) {
          const StepEfforts& late = traj.steps[i - 1];
          const StepEfforts& early = traj.steps[i - 2];
          const StepEfforts merged{early.start, 0.5 * (early.end + late.start), late.end};
          coarse = backward_step(coarse, h0 + h1, merged, econ, params);
          i -= 2;
          continue;
        }
      }
      coarse = backward_step(coarse, h1, traj.steps[i - 1], econ, params);
      i -= 1;
    }
    const Costate& fine = sweep.costates.front();
    sweep.error_estimate =
        std::max(std::abs(fine.fishery - coarse[0]), std::abs(fine.reserve - coarse[1])) / 15.0;
    const double scale = 1.0 + std::max(std::abs(fine.fishery), std::abs(fine.reserve));
    if (sweep.error_estimate > tolerance * scale) {
      throw NumericalError(ErrorCode::StepMismatch,
                           "trajectory sampling too coarse for the costate tolerance");
    }
  }

  sweep.switching.reserve(n);
  sweep.hamiltonian.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    sweep.switching.push_back(switching_function(traj.states[k], sweep.costates[k], econ, params));
    sweep.hamiltonian.push_back(
        hamiltonian(traj.states[k], sweep.costates[k], traj.efforts[k], econ, params));
  }
  return sweep;
}

int bang_sign_violations(const Trajectory& traj, const AdjointSweep& sweep,
                         const EconParams& econ) {
  if (econ.effort_min() == econ.effort_max()) return 0;
  int violations = 0;
  for (std::size_t k = 0; k < traj.efforts.size(); ++k) {
    const double E = traj.efforts[k];
    const double phi = sweep.switching[k];
    if (E == econ.effort_max() && phi < -kSwitchBand) ++violations;
    if (E == econ.effort_min() && phi > kSwitchBand) ++violations;
  }
  return violations;
}

std::optional<double> singular_window_switching(const Trajectory& traj, const AdjointSweep& sweep,
                                                const EconParams& econ) {
  std::optional<double> worst;
  for (std::size_t k = 0; k < traj.efforts.size(); ++k) {
    const double E = traj.efforts[k];
    if (E > econ.effort_min() && E < econ.effort_max()) {
      worst = std::max(worst.value_or(0.0), std::abs(sweep.switching[k]));
    }
  }
  return worst;
}

}  // namespace mpa
