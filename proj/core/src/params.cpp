#include "mpa/params.hpp"

#include <cmath>
#include <string>

#include "mpa/errors.hpp"

namespace mpa {
namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw InvalidParameter(field, message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

HabitatParams::HabitatParams(const HabitatSpec& spec) : spec_(spec) {
  require(finite(spec.death_rate) && spec.death_rate > 0, "c", "death rate must be > 0");
  require(finite(spec.dispersal) && spec.dispersal >= 0, "m", "dispersal must be >= 0");
  require(finite(spec.catchability) && spec.catchability > 0, "q", "catchability must be > 0");
  require(finite(spec.reserve_fraction) && spec.reserve_fraction >= 0 && spec.reserve_fraction < 1,
          "R", "reserve fraction must satisfy 0 <= R < 1");
  require(finite(spec.season_length) && spec.season_length >= 0 && spec.season_length <= 1,
          "T", "season length must satisfy 0 <= T <= 1");
  require(finite(spec.growth_rate) && spec.growth_rate > 0, "r", "growth rate must be > 0");
  require(finite(spec.density_coeff) && spec.density_coeff > 0, "beta",
          "density coefficient must be > 0");
}

HabitatParams HabitatParams::with_reserve_fraction(double reserve) const {
  HabitatSpec s = spec_;
  s.reserve_fraction = reserve;
  return HabitatParams(s);
}

HabitatParams HabitatParams::with_season_length(double season) const {
  HabitatSpec s = spec_;
  s.season_length = season;
  return HabitatParams(s);
}

HabitatParams HabitatParams::with_growth_rate(double growth) const {
  HabitatSpec s = spec_;
  s.growth_rate = growth;
  return HabitatParams(s);
}

EconParams::EconParams(const EconSpec& spec) : spec_(spec) {
  require(finite(spec.price) && spec.price > 0, "P", "price must be > 0");
  require(finite(spec.cost) && spec.cost >= 0, "C", "cost must be >= 0");
  require(finite(spec.discount) && spec.discount >= 0 && spec.discount < 1, "discount",
          "discount must satisfy 0 <= discount < 1");
  require(finite(spec.effort_min) && spec.effort_min > 0, "E_min", "minimum effort must be > 0");
  require(finite(spec.effort_max) && spec.effort_max >= spec.effort_min, "E_max",
          "maximum effort must be >= E_min");
}

PatchState split_recruits(double recruits, const HabitatParams& params) noexcept {
  const double R = params.reserve_fraction();
  return {(1.0 - R) * recruits, R * recruits};
}

}  // namespace mpa
