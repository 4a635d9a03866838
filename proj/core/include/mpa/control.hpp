#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mpa/params.hpp"

namespace mpa {

/// States with a patch at or below this biomass are degenerate for the
/// singular feedback law.
inline constexpr double kDegenerateBiomass = 1e-12;

/// Switching-function values inside +-kSwitchBand are treated as zero by the
/// sign diagnostics.
inline constexpr double kSwitchBand = 1e-6;

/// Shadow prices of fishery (p1) and reserve (p2) biomass.
struct Costate {
  double fishery = 0.0;
  double reserve = 0.0;
};

// Control-affine form x' = f(x) + E g(x). Both fields are linear, so their
// Jacobians are constant matrices.

Eigen::Vector2d drift_field(const PatchState& x, const HabitatParams& params);
Eigen::Vector2d control_field(const PatchState& x, const HabitatParams& params);
Eigen::Matrix2d drift_jacobian(const HabitatParams& params);
Eigen::Matrix2d control_jacobian(const HabitatParams& params);

// Lie brackets [u, v] = (Dv) u - (Du) v in closed form.

Eigen::Vector2d bracket_fg(const PatchState& x, const HabitatParams& params);
Eigen::Vector2d bracket_f_fg(const PatchState& x, const HabitatParams& params);
Eigen::Vector2d bracket_g_fg(const PatchState& x, const HabitatParams& params);

/// Phi = -C + P q x1 - p1 q x1, the coefficient of effort in the Hamiltonian.
double switching_function(const PatchState& x, const Costate& p, const EconParams& econ,
                          const HabitatParams& params);

/// Time derivative of Phi along the extremal: P q f1(x) + <p, [f,g](x)>.
double switching_rate(const PatchState& x, const Costate& p, const EconParams& econ,
                      const HabitatParams& params);

/// Hamiltonian <p, f(x)> + E Phi (with the running profit folded into Phi).
double hamiltonian(const PatchState& x, const Costate& p, double effort, const EconParams& econ,
                   const HabitatParams& params);

/// State-feedback singular effort
///   P c (c + m) / (2 C m (1 - R)) x1^2/x2 + (m R / q)(1 + x2/x1) - (m (1 - R) / q)(1 + x1/x2),
/// unclamped. Throws DegenerateState for x1 or x2 <= kDegenerateBiomass and
/// CostFree when C = 0.
double singular_effort(const PatchState& x, const EconParams& econ, const HabitatParams& params);

/// Effort that zeroes the second derivative of Phi once Phi = Phi' = 0 fix
/// the costate, computed from the bracket expansion directly.
double singular_effort_root(const PatchState& x, const EconParams& econ,
                            const HabitatParams& params);

/// 2 C q m (1 - R) x2 / x1: the coefficient of E in the second derivative of
/// Phi on a singular arc. Throws DegenerateState for x1 <= kDegenerateBiomass.
double glc_coefficient(const PatchState& x, const EconParams& econ, const HabitatParams& params);

/// Costate fixed by Phi = 0 and Phi' = 0 at x. Throws SingularLinearSystem
/// when the 2x2 system is rank deficient.
Costate singular_costate(const PatchState& x, const EconParams& econ, const HabitatParams& params);

/// Second derivative of Phi at x for the given effort with p = singular_costate(x).
double switching_second_derivative(const PatchState& x, double effort, const EconParams& econ,
                                   const HabitatParams& params);

/// |Phi''| / glc_coefficient at x with E = singular_effort(x).
double singular_consistency_residual(const PatchState& x, const EconParams& econ,
                                     const HabitatParams& params);

/// Same residual for an arbitrary effort.
double singular_consistency_residual(const PatchState& x, double effort, const EconParams& econ,
                                     const HabitatParams& params);

/// clamp(singular_effort(x), E_min, E_max).
double composite_effort(const PatchState& x, const EconParams& econ, const HabitatParams& params);

// ---------------------------------------------------------------------------
// Effort policies

struct ConstantEffort {
  double effort = 0.0;
};

/// `first` on [0, switch_time), `second` on [switch_time, T].
struct BangBangEffort {
  double first = 0.0;
  double second = 0.0;
  double switch_time = 0.0;
};

struct CompositeFeedback {};

/// Zero-order hold: efforts[i] applies from times[i] until times[i + 1].
struct PiecewiseEffort {
  std::vector<double> times;
  std::vector<double> efforts;
};

/// An effort schedule together with its admissible interval. Construction
/// checks that every effort the policy can produce lies in
/// [E_min, E_max] and that switch times lie in [0, T].
class EffortPolicy {
 public:
  using Kind = std::variant<ConstantEffort, BangBangEffort, CompositeFeedback, PiecewiseEffort>;

  EffortPolicy(Kind kind, const EconParams& econ, const HabitatParams& params);

  static EffortPolicy constant(double effort, const EconParams& econ, const HabitatParams& params);
  static EffortPolicy bang_bang(double first, double second, double switch_time,
                                const EconParams& econ, const HabitatParams& params);
  static EffortPolicy composite(const EconParams& econ, const HabitatParams& params);

  const Kind& kind() const noexcept { return kind_; }
  double effort_min() const noexcept { return effort_min_; }
  double effort_max() const noexcept { return effort_max_; }

  bool is_feedback() const noexcept { return std::holds_alternative<CompositeFeedback>(kind_); }

  /// Times in (0, T) where a time-scheduled effort jumps.
  std::vector<double> breakpoints(double season_length) const;

  /// Effort for a time-scheduled policy on the segment containing `time`.
  double scheduled_effort(double time) const;

  /// Effort at a state; for feedback policies degenerate states map to E_min
  /// and a cost-free economy to E_max.
  double feedback_effort(const PatchState& x, const EconParams& econ,
                         const HabitatParams& params) const;

  std::string describe() const;

 private:
  Kind kind_;
  double effort_min_;
  double effort_max_;
};

/// Efforts used by the three RK4 stage times of one step.
struct StepEfforts {
  double start = 0.0;
  double mid = 0.0;  // mean of the two midpoint stages
  double end = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PatchState> states;
  std::vector<double> efforts;   // effort applied going forward from each sample
  std::vector<double> revenue;   // cumulative int (P q x1 - C) E dt
  std::vector<StepEfforts> steps;
  bool clipped = false;          // a step undershot zero and was clipped

  double final_revenue() const { return revenue.empty() ? 0.0 : revenue.back(); }
  const PatchState& terminal() const { return states.back(); }
  /// Season-averaged effort (Simpson rule over the stored stage efforts).
  double mean_effort() const;
};

/// Default fixed step T / 2000.
double default_step(const HabitatParams& params) noexcept;

/// Fixed-step RK4 on the controlled state plus cumulative revenue. Requires
/// step <= T / 10 (InvalidParameter otherwise); throws StepTooLarge when a
/// step-doubling probe on the first step estimates a local error above 1e-6.
Trajectory integrate_season(const PatchState& start, const EffortPolicy& policy,
                            const EconParams& econ, const HabitatParams& params, double step);

struct AdjointSweep {
  std::vector<Costate> costates;    // sampled on Trajectory::times
  std::vector<double> switching;    // Phi
  std::vector<double> hamiltonian;  // H with the forward efforts
  double error_estimate = 0.0;      // step-halving estimate at t = 0
};

/// Backward RK4 of the costate system from p(T) = 0 along a stored
/// trajectory, reusing its step sizes and stage efforts. Throws StepMismatch
/// when the step-halving estimate exceeds `tolerance`.
AdjointSweep adjoint_sweep(const Trajectory& traj, const EconParams& econ,
                           const HabitatParams& params, double tolerance = 1e-6);

/// Count of samples whose Phi sign contradicts the applied bang arc
/// (Phi > band while at E_min, or Phi < -band while at E_max).
int bang_sign_violations(const Trajectory& traj, const AdjointSweep& sweep,
                         const EconParams& econ);

/// max |Phi| over samples where the composite effort lies strictly inside
/// (E_min, E_max); nullopt when there is no such sample.
std::optional<double> singular_window_switching(const Trajectory& traj, const AdjointSweep& sweep,
                                                const EconParams& econ);

}  // namespace mpa
