#include "mpa/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "mpa/errors.hpp"

namespace mpa {
namespace {

// (P q, 0) as a row vector
Eigen::RowVector2d price_row(const EconParams& econ, const HabitatParams& params) {
  return {econ.price() * params.catchability(), 0.0};
}

void require_interior(const PatchState& x) {
  if (!(x.fishery > kDegenerateBiomass) || !(x.reserve > kDegenerateBiomass)) {
    throw NumericalError(ErrorCode::DegenerateState,
                         "singular feedback needs both patches above 1e-12 biomass");
  }
}

}  // namespace

Eigen::Vector2d drift_field(const PatchState& x, const HabitatParams& params) {
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double R = params.reserve_fraction();
  return {-c * x.fishery + m * ((1.0 - R) * x.reserve - R * x.fishery),
          -c * x.reserve + m * (R * x.fishery - (1.0 - R) * x.reserve)};
}

Eigen::Vector2d control_field(const PatchState& x, const HabitatParams& params) {
  return {-params.catchability() * x.fishery, 0.0};
}

Eigen::Matrix2d drift_jacobian(const HabitatParams& params) {
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double R = params.reserve_fraction();
  Eigen::Matrix2d J;
  J << -c - m * R, m * (1.0 - R),
       m * R, -c - m * (1.0 - R);
  return J;
}

Eigen::Matrix2d control_jacobian(const HabitatParams& params) {
  Eigen::Matrix2d J;
  J << -params.catchability(), 0.0,
       0.0, 0.0;
  return J;
}

Eigen::Vector2d bracket_fg(const PatchState& x, const HabitatParams& params) {
  const double q = params.catchability();
  const double m = params.dispersal();
  const double R = params.reserve_fraction();
  return {-q * m * (1.0 - R) * x.reserve, q * m * R * x.fishery};
}

Eigen::Vector2d bracket_f_fg(const PatchState& x, const HabitatParams& params) {
  const double q = params.catchability();
  const double m = params.dispersal();
  const double R = params.reserve_fraction();
  const double x1 = x.fishery;
  const double x2 = x.reserve;
  const double qm2 = q * m * m;
  return {-2.0 * qm2 * R * (1.0 - R) * x1 + qm2 * (1.0 - R) * (1.0 - R) * x2 -
              qm2 * R * (1.0 - R) * x2,
          2.0 * qm2 * R * (1.0 - R) * x2 - qm2 * R * R * x1 + qm2 * R * (1.0 - R) * x1};
}

Eigen::Vector2d bracket_g_fg(const PatchState& x, const HabitatParams& params) {
  const double q = params.catchability();
  const double m = params.dispersal();
  const double R = params.reserve_fraction();
  return {-q * q * m * (1.0 - R) * x.reserve, -q * q * m * R * x.fishery};
}

double switching_function(const PatchState& x, const Costate& p, const EconParams& econ,
                          const HabitatParams& params) {
  const double q = params.catchability();
  return -econ.cost() + econ.price() * q * x.fishery - p.fishery * q * x.fishery;
}

double switching_rate(const PatchState& x, const Costate& p, const EconParams& econ,
                      const HabitatParams& params) {
  const Eigen::Vector2d fg = bracket_fg(x, params);
  return econ.price() * params.catchability() * drift_field(x, params)(0) + p.fishery * fg(0) +
         p.reserve * fg(1);
}

double hamiltonian(const PatchState& x, const Costate& p, double effort, const EconParams& econ,
                   const HabitatParams& params) {
  const Eigen::Vector2d f = drift_field(x, params);
  return p.fishery * f(0) + p.reserve * f(1) + effort * switching_function(x, p, econ, params);
}

double singular_effort(const PatchState& x, const EconParams& econ, const HabitatParams& params) {
  require_interior(x);
  if (econ.cost() == 0.0) {
    throw NumericalError(ErrorCode::CostFree, "singular feedback divides by the harvesting cost");
  }
  const double P = econ.price();
  const double C = econ.cost();
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double q = params.catchability();
  const double R = params.reserve_fraction();
  const double x1 = x.fishery;
  const double x2 = x.reserve;

  const double incentive = P * c * (c + m) / (2.0 * C * m * (1.0 - R)) * x1 * x1 / x2;
  const double stability = (m * R / q) * (1.0 + x2 / x1) - (m * (1.0 - R) / q) * (1.0 + x1 / x2);
  return incentive + stability;
}

double glc_coefficient(const PatchState& x, const EconParams& econ, const HabitatParams& params) {
  if (!(x.fishery > kDegenerateBiomass)) {
    throw NumericalError(ErrorCode::DegenerateState, "GLC coefficient divides by x1");
  }
  return 2.0 * econ.cost() * params.catchability() * params.dispersal() *
         (1.0 - params.reserve_fraction()) * x.reserve / x.fishery;
}

Costate singular_costate(const PatchState& x, const EconParams& econ,
                         const HabitatParams& params) {
  // Phi = 0 and Phi' = 0 are linear in p:
  //   <p, g(x)>      = C - P q x1
  //   <p, [f,g](x)>  = -P q f1(x)
  const Eigen::Vector2d g = control_field(x, params);
  const Eigen::Vector2d fg = bracket_fg(x, params);
  Eigen::Matrix2d M;
  M << g(0), g(1),
       fg(0), fg(1);
  const double Pq = econ.price() * params.catchability();
  const Eigen::Vector2d rhs(econ.cost() - Pq * x.fishery, -Pq * drift_field(x, params)(0));

  const double scale = M.cwiseAbs().maxCoeff();
  if (!(std::abs(M.determinant()) > 1e-14 * scale * scale)) {
    throw NumericalError(ErrorCode::SingularLinearSystem,
                         "Phi = 0, Phi' = 0 do not determine the costate at this state");
  }
  const Eigen::Vector2d p = M.partialPivLu().solve(rhs);
  return {p(0), p(1)};
}

namespace {

struct SecondDerivative {
  double slope = 0.0;   // coefficient of E
  double offset = 0.0;  // E-free part
};

SecondDerivative second_derivative_terms(const PatchState& x, const EconParams& econ,
                                         const HabitatParams& params) {
  const Costate cs = singular_costate(x, econ, params);
  const Eigen::Vector2d p(cs.fishery, cs.reserve);
  const Eigen::RowVector2d pq = price_row(econ, params);
  const Eigen::Matrix2d Df = drift_jacobian(params);
  const Eigen::Vector2d f = drift_field(x, params);
  const Eigen::Vector2d g = control_field(x, params);

  SecondDerivative d;
  d.slope = (pq * Df * g).value() - pq.dot(bracket_fg(x, params)) + p.dot(bracket_g_fg(x, params));
  d.offset = (pq * Df * f).value() + p.dot(bracket_f_fg(x, params));
  return d;
}

}  // namespace

double switching_second_derivative(const PatchState& x, double effort, const EconParams& econ,
                                   const HabitatParams& params) {
  const SecondDerivative d = second_derivative_terms(x, econ, params);
  return effort * d.slope + d.offset;
}

double singular_effort_root(const PatchState& x, const EconParams& econ,
                            const HabitatParams& params) {
  require_interior(x);
  const SecondDerivative d = second_derivative_terms(x, econ, params);
  if (d.slope == 0.0) {
    throw NumericalError(ErrorCode::CostFree, "effort does not appear in Phi''");
  }
  return -d.offset / d.slope;
}

double singular_consistency_residual(const PatchState& x, double effort, const EconParams& econ,
                                     const HabitatParams& params) {
  require_interior(x);
  if (econ.cost() == 0.0) {
    throw NumericalError(ErrorCode::CostFree, "GLC normalisation vanishes when C = 0");
  }
  return std::abs(switching_second_derivative(x, effort, econ, params)) /
         glc_coefficient(x, econ, params);
}

double singular_consistency_residual(const PatchState& x, const EconParams& econ,
                                     const HabitatParams& params) {
  return singular_consistency_residual(x, singular_effort(x, econ, params), econ, params);
}

double composite_effort(const PatchState& x, const EconParams& econ, const HabitatParams& params) {
  return std::clamp(singular_effort(x, econ, params), econ.effort_min(), econ.effort_max());
}

// ---------------------------------------------------------------------------

EffortPolicy::EffortPolicy(Kind kind, const EconParams& econ, const HabitatParams& params)
    : kind_(std::move(kind)), effort_min_(econ.effort_min()), effort_max_(econ.effort_max()) {
  const double T = params.season_length();
  auto in_bounds = [&](double e, const char* field) {
    if (!(e >= effort_min_ && e <= effort_max_)) {
      throw InvalidParameter(field, "effort must lie in [E_min, E_max]");
    }
  };
  if (const auto* c = std::get_if<ConstantEffort>(&kind_)) {
    in_bounds(c->effort, "effort");
  } else if (const auto* b = std::get_if<BangBangEffort>(&kind_)) {
    in_bounds(b->first, "first_effort");
    in_bounds(b->second, "second_effort");
    if (!(b->switch_time >= 0.0 && b->switch_time <= T)) {
      throw InvalidParameter("switch_time", "switch time must lie in [0, T]");
    }
  } else if (const auto* pw = std::get_if<PiecewiseEffort>(&kind_)) {
    if (pw->times.empty() || pw->times.size() != pw->efforts.size()) {
      throw InvalidParameter("efforts", "piecewise schedule needs matching times and efforts");
    }
    if (pw->times.front() != 0.0) throw InvalidParameter("times", "schedule must start at 0");
    for (std::size_t i = 0; i < pw->times.size(); ++i) {
      if (i > 0 && !(pw->times[i] > pw->times[i - 1])) {
        throw InvalidParameter("times", "schedule times must be strictly increasing");
      }
      if (pw->times[i] > T) throw InvalidParameter("times", "schedule times must lie in [0, T]");
      in_bounds(pw->efforts[i], "efforts");
    }
  }
}

EffortPolicy EffortPolicy::constant(double effort, const EconParams& econ,
                                    const HabitatParams& params) {
  return EffortPolicy(ConstantEffort{effort}, econ, params);
}

EffortPolicy EffortPolicy::bang_bang(double first, double second, double switch_time,
                                     const EconParams& econ, const HabitatParams& params) {
  return EffortPolicy(BangBangEffort{first, second, switch_time}, econ, params);
}

EffortPolicy EffortPolicy::composite(const EconParams& econ, const HabitatParams& params) {
  return EffortPolicy(CompositeFeedback{}, econ, params);
}

std::vector<double> EffortPolicy::breakpoints(double season_length) const {
  std::vector<double> out;
  if (const auto* b = std::get_if<BangBangEffort>(&kind_)) {
    if (b->switch_time > 0.0 && b->switch_time < season_length) out.push_back(b->switch_time);
  } else if (const auto* pw = std::get_if<PiecewiseEffort>(&kind_)) {
    for (double t : pw->times) {
      if (t > 0.0 && t < season_length) out.push_back(t);
    }
  }
  return out;
}

double EffortPolicy::scheduled_effort(double time) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantEffort>) {
          return k.effort;
        } else if constexpr (std::is_same_v<K, BangBangEffort>) {
          return time < k.switch_time ? k.first : k.second;
        } else if constexpr (std::is_same_v<K, PiecewiseEffort>) {
          const auto it = std::upper_bound(k.times.begin(), k.times.end(), time);
          const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - k.times.begin() - 1));
          return k.efforts[idx];
        } else {
          return effort_min_;
        }
      },
      kind_);
}

double EffortPolicy::feedback_effort(const PatchState& x, const EconParams& econ,
                                     const HabitatParams& params) const {
  try {
    return composite_effort(x, econ, params);
  } catch (const NumericalError& e) {
    if (e.code() == ErrorCode::CostFree) return effort_max_;
    return effort_min_;
  }
}

std::string EffortPolicy::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantEffort>) {
          os << "constant(E=" << k.effort << ")";
        } else if constexpr (std::is_same_v<K, BangBangEffort>) {
          os << "bang-bang(first=" << k.first << ";second=" << k.second
             << ";switch=" << k.switch_time << ")";
        } else if constexpr (std::is_same_v<K, PiecewiseEffort>) {
          os << "piecewise(n=" << k.times.size() << ")";
        } else {
          os << "composite-feedback";
        }
      },
      kind_);
  return os.str();
}

}  // namespace mpa
