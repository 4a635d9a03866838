#pragma once

#include <optional>

#include <Eigen/Core>

#include "mpa/params.hpp"

namespace mpa {

/// Below this value of delta*T the spectral form of exp(AT) is replaced by
/// its repeated-eigenvalue series.
inline constexpr double kDegeneracyThreshold = 1e-7;

/// Eigenvalues of A*T (lambda1 <= lambda2) and the discriminant root
/// delta = sqrt((m - qE)^2 + 4 m q E R).
struct EigenPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double delta = 0.0;
};

EigenPair eigen_pair(const HabitatParams& params, double effort);

/// Within-season system matrix A for a constant effort.
Eigen::Matrix2d system_matrix(const HabitatParams& params, double effort);

/// Closed-form season transition for one (params, effort) pair.
struct SeasonPropagator {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double delta = 0.0;
  Eigen::Matrix2d transition = Eigen::Matrix2d::Identity();  // exp(A T)
  double survival = 1.0;                                     // F
  bool degenerate = false;  // series branch was used

  PatchState apply(const PatchState& start) const;
};

SeasonPropagator season_matrix(const HabitatParams& params, double effort);

/// Survival factor F from the explicit eigenvalue formula. Falls back to the
/// summed-transition route when m = 0, where the formula divides by zero.
double survival_factor(const HabitatParams& params, double effort);

/// F as the total of exp(AT) (1 - R, R)^T.
double survival_factor_summed(const HabitatParams& params, double effort);

/// Beverton-Holt recruitment J = r x / (1 + beta x).
double beverton_holt(double total, const HabitatParams& params) noexcept;

/// One step of the annual map x -> alpha x / (1 + beta x).
double annual_map(double total, double alpha, double beta) noexcept;

/// k-fold iterate of the annual map in closed form.
double iterate_closed_form(double x0, double alpha, double beta, long k);

struct Equilibria {
  double trivial = 0.0;
  std::optional<double> interior;  // (alpha - 1) / beta, present iff alpha > 1
};

Equilibria equilibria(double alpha, double beta);

}  // namespace mpa
