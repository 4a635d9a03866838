#include "mpa/model.hpp"

#include <cmath>

namespace mpa {
namespace {

// Quantities shared by the eigenvalue, transition and survival routines.
struct Spectrum {
  double a12 = 0.0;    // m (1 - R)
  double a21 = 0.0;    // m R
  double d = 0.0;      // a11 - a22 = m - qE - 2 m R
  double delta = 0.0;  // sqrt(d^2 + 4 a12 a21)
  double s_plus = 0.0;   // (delta + d) / 2
  double s_minus = 0.0;  // (delta - d) / 2
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mean = 0.0;     // (lambda1 + lambda2) / 2
  double weight = 0.0;   // (e^lambda2 - e^lambda1) / delta
  double spread = 0.0;   // delta T = lambda2 - lambda1
  bool degenerate = false;
};

Spectrum spectrum(const HabitatParams& p, double effort) {
  const double c = p.death_rate();
  const double m = p.dispersal();
  const double R = p.reserve_fraction();
  const double T = p.season_length();
  const double qE = p.catchability() * effort;

  Spectrum s;
  s.a12 = m * (1.0 - R);
  s.a21 = m * R;
  s.d = m - qE - 2.0 * m * R;
  s.delta = std::hypot(m - qE, 2.0 * std::sqrt(m * qE * R));

  // s_plus * s_minus = a12 a21; take the sum without cancellation and
  // recover the other factor from the product.
  const double product = s.a12 * s.a21;
  if (s.d >= 0.0) {
    s.s_plus = 0.5 * (s.delta + s.d);
    s.s_minus = s.s_plus > 0.0 ? product / s.s_plus : 0.0;
  } else {
    s.s_minus = 0.5 * (s.delta - s.d);
    s.s_plus = s.s_minus > 0.0 ? product / s.s_minus : 0.0;
  }

  // m + qE - delta = 4 m q E (1 - R) / (m + qE + delta)
  const double sum = m + qE + s.delta;
  const double gap = sum > 0.0 ? 4.0 * m * qE * (1.0 - R) / sum : 0.0;
  s.lambda1 = -0.5 * T * (2.0 * c + sum);
  s.lambda2 = -0.5 * T * (2.0 * c + gap);
  s.mean = -0.5 * T * (2.0 * c + m + qE);

  const double x = s.delta * T;
  s.spread = x;
  s.degenerate = x < kDegeneracyThreshold;
  if (s.degenerate) {
    // 2 sinh(x/2) / delta = T (1 + x^2/24 + ...)
    s.weight = T * std::exp(s.mean) * (1.0 + x * x / 24.0);
  } else {
    s.weight = std::exp(s.lambda2) * -std::expm1(-x) / s.delta;
  }
  return s;
}

Eigen::Matrix2d transition_from(const Spectrum& s) {
  Eigen::Matrix2d M;
  if (s.degenerate) {
    // e^{mean} [cosh(delta T/2) I + (weight / e^{mean}) (A - mean/T I)]
    const double half = 0.5 * s.d * s.weight;
    const double ch = std::exp(s.mean) * (1.0 + s.spread * s.spread / 8.0);
    M << ch + half, s.a12 * s.weight,
         s.a21 * s.weight, ch - half;
  } else {
    const double e1 = std::exp(s.lambda1);
    M << e1 + s.s_plus * s.weight, s.a12 * s.weight,
         s.a21 * s.weight, e1 + s.s_minus * s.weight;
  }
  return M;
}

}  // namespace

EigenPair eigen_pair(const HabitatParams& params, double effort) {
  const Spectrum s = spectrum(params, effort);
  return {s.lambda1, s.lambda2, s.delta};
}

Eigen::Matrix2d system_matrix(const HabitatParams& p, double effort) {
  const double c = p.death_rate();
  const double m = p.dispersal();
  const double R = p.reserve_fraction();
  const double q = p.catchability();
  Eigen::Matrix2d A;
  A << -c - q * effort - m * R, m * (1.0 - R),
       m * R, -c - m * (1.0 - R);
  return A;
}

PatchState SeasonPropagator::apply(const PatchState& start) const {
  const Eigen::Vector2d x = transition * Eigen::Vector2d(start.fishery, start.reserve);
  return {x(0), x(1)};
}

SeasonPropagator season_matrix(const HabitatParams& params, double effort) {
  const Spectrum s = spectrum(params, effort);
  SeasonPropagator prop;
  prop.lambda1 = s.lambda1;
  prop.lambda2 = s.lambda2;
  prop.delta = s.delta;
  prop.transition = transition_from(s);
  prop.degenerate = s.degenerate;
  prop.survival = survival_factor(params, effort);
  return prop;
}

double survival_factor_summed(const HabitatParams& params, double effort) {
  const Eigen::Matrix2d M = transition_from(spectrum(params, effort));
  const double R = params.reserve_fraction();
  return (M(0, 0) + M(1, 0)) * (1.0 - R) + (M(0, 1) + M(1, 1)) * R;
}

double survival_factor(const HabitatParams& params, double effort) {
  const double T = params.season_length();
  const double c = params.death_rate();
  const double m = params.dispersal();
  const double qE = params.catchability() * effort;
  if (qE == 0.0) return std::exp(-c * T);  // total biomass obeys x' = -c x
  if (m == 0.0) return survival_factor_summed(params, effort);

  const Spectrum s = spectrum(params, effort);
  const double R = params.reserve_fraction();
  // m - qE + delta, rewritten when m < qE to avoid cancellation
  const double lower = (m - qE >= 0.0) ? (m - qE + s.delta)
                                       : 4.0 * m * qE * R / (s.delta - (m - qE));
  return std::exp(s.lambda1) + s.weight * (m + qE + s.delta) * lower / (4.0 * m);
}

double beverton_holt(double total, const HabitatParams& params) noexcept {
  return params.growth_rate() * total / (1.0 + params.density_coeff() * total);
}

double annual_map(double total, double alpha, double beta) noexcept {
  return alpha * total / (1.0 + beta * total);
}

double iterate_closed_form(double x0, double alpha, double beta, long k) {
  if (k == 0) return x0;
  const double kd = static_cast<double>(k);
  if (alpha == 1.0) return x0 / (1.0 + beta * kd * x0);
  if (alpha > 1.0) {
    // divide through by alpha^k so large k cannot overflow
    const double a = std::exp(-kd * std::log(alpha));
    return x0 / (a + beta * x0 * (-std::expm1(-kd * std::log(alpha))) / (alpha - 1.0));
  }
  const double a = std::exp(kd * std::log(alpha));
  return a * x0 / (1.0 + beta * x0 * (-std::expm1(kd * std::log(alpha))) / (1.0 - alpha));
}

Equilibria equilibria(double alpha, double beta) {
  Equilibria eq;
  if (alpha > 1.0) eq.interior = (alpha - 1.0) / beta;
  return eq;
}

}  // namespace mpa
