#pragma once

namespace mpa {

/// Raw habitat constants as read from a configuration; not yet validated.
struct HabitatSpec {
  double death_rate = 1.0;        // c, 1/year
  double dispersal = 1.0;         // m, 1/year
  double catchability = 0.7;      // q, 1/(effort year)
  double reserve_fraction = 0.2;  // R, [0, 1)
  double season_length = 0.5;     // T, years in [0, 1]
  double growth_rate = 2.0;       // r, recruits per adult
  double density_coeff = 0.1;     // beta, 1/biomass
};

/// Validated biological and spatial constants of the two-patch habitat.
///
/// Construction is the single validation point: c, q, r, beta > 0, m >= 0,
/// 0 <= R < 1 and 0 <= T <= 1. Every operation taking a HabitatParams may
/// therefore assume admissible values.
class HabitatParams {
 public:
  explicit HabitatParams(const HabitatSpec& spec);

  double death_rate() const noexcept { return spec_.death_rate; }
  double dispersal() const noexcept { return spec_.dispersal; }
  double catchability() const noexcept { return spec_.catchability; }
  double reserve_fraction() const noexcept { return spec_.reserve_fraction; }
  double season_length() const noexcept { return spec_.season_length; }
  double growth_rate() const noexcept { return spec_.growth_rate; }
  double density_coeff() const noexcept { return spec_.density_coeff; }

  const HabitatSpec& spec() const noexcept { return spec_; }

  HabitatParams with_reserve_fraction(double reserve) const;
  HabitatParams with_season_length(double season) const;
  HabitatParams with_growth_rate(double growth) const;

 private:
  HabitatSpec spec_;
};

struct EconSpec {
  double price = 5.0;       // P, currency per biomass
  double cost = 1.0;        // C, currency per (effort year)
  double discount = 0.0;    // annual discount rate, A(k) = (1 - discount)^k
  double effort_min = 3.0;
  double effort_max = 10.0;
};

/// Validated economic constants: P > 0, C >= 0, 0 <= discount < 1 and
/// 0 < E_min <= E_max.
class EconParams {
 public:
  explicit EconParams(const EconSpec& spec);

  double price() const noexcept { return spec_.price; }
  double cost() const noexcept { return spec_.cost; }
  double discount() const noexcept { return spec_.discount; }
  double effort_min() const noexcept { return spec_.effort_min; }
  double effort_max() const noexcept { return spec_.effort_max; }

  const EconSpec& spec() const noexcept { return spec_; }

 private:
  EconSpec spec_;
};

/// Biomass in the fishery zone (x1) and in the reserve (x2).
struct PatchState {
  double fishery = 0.0;
  double reserve = 0.0;

  double total() const noexcept { return fishery + reserve; }

  friend bool operator==(const PatchState&, const PatchState&) = default;
};

/// Season-start split of recruits: ((1 - R) J, R J).
PatchState split_recruits(double recruits, const HabitatParams& params) noexcept;

}  // namespace mpa
