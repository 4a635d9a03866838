#include "commands.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "mpa/errors.hpp"
#include "mpa/model.hpp"
#include "mpa/persistence.hpp"
#include "mpa/season_sim.hpp"
#include "mpa/strategy.hpp"

namespace mpa::cli {
namespace {

Table make_table(const RunConfig& config, std::string name, std::vector<std::string> columns) {
  Table t;
  t.metadata = metadata_for(config, name);
  t.name = std::move(name);
  t.columns = std::move(columns);
  return t;
}

Cell opt(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

double default_x_init(const HabitatParams& params) {
  return nonharvested_equilibrium(params).value_or(1.0);
}

}  // namespace

std::vector<Table> cmd_bifurcation(const RunConfig& config) {
  Table curve = make_table(config, "bifurcation",
                           {"fixed", "abscissa", "boundary_ordinate", "has_boundary",
                            "alpha_check", "status"});
  Table asymptotes = make_table(config, "asymptotes", {"fixed", "R_threshold", "R_closed_form"});
  for (double fixed : config.fixed) {
    const PlaneSpec spec{config.plane, fixed, config.habitat, config.abscissa, config.ordinate};
    const BoundaryCurve result = trace_boundary(spec);
    for (const auto& p : result.points) {
      curve.add_row({fixed, p.abscissa, opt(p.ordinate), p.ordinate.has_value(), p.alpha_check,
                     std::string(to_string(p.status))});
    }
    if (result.asymptote) {
      const auto at_t = config.habitat.with_season_length(fixed);
      asymptotes.add_row({fixed, *result.asymptote, asymptote_R_closed_form(at_t)});
    }
  }
  std::vector<Table> out{std::move(curve)};
  if (config.plane == Plane::EffortVsReserve) out.push_back(std::move(asymptotes));
  return out;
}

std::vector<Table> cmd_compare(const RunConfig& config) {
  const PatchState x0 = config.x0.value_or(default_initial_state(config.habitat));
  const StrategyReport report =
      compare_strategies(x0, config.econ, config.habitat, config.step, config.references);

  std::vector<Table> out;
  Table summary = make_table(config, "summary",
                             {"policy", "descriptor", "revenue", "terminal_x1", "terminal_x2",
                              "alpha", "persistent", "rank", "reference", "flags"});
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const StrategyRecord& rec = report.records[i];
    Cell rank = std::monostate{};
    for (std::size_t k = 0; k < report.ranking.size(); ++k) {
      if (report.ranking[k] == i) rank = static_cast<long>(k + 1);
    }
    summary.add_row({rec.name, rec.policy ? Cell(rec.policy->describe()) : Cell(std::monostate{}),
                     opt(rec.revenue),
                     rec.terminal ? Cell(rec.terminal->fishery) : Cell(std::monostate{}),
                     rec.terminal ? Cell(rec.terminal->reserve) : Cell(std::monostate{}),
                     opt(rec.season_alpha), rec.persistent, rank, opt(rec.reference),
                     join(rec.flags, '|')});

    if (!rec.trajectory) continue;
    const Trajectory& traj = *rec.trajectory;
    Table t = make_table(config, "trajectory-" + rec.name, {"t", "x1", "x2", "E", "revenue", "phi"});
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const Cell phi = rec.adjoint ? Cell(rec.adjoint->switching[k]) : Cell(std::monostate{});
      t.add_row({traj.times[k], traj.states[k].fishery, traj.states[k].reserve, traj.efforts[k],
                 traj.revenue[k], phi});
    }
    out.push_back(std::move(t));
  }
  out.insert(out.begin(), std::move(summary));
  return out;
}

std::vector<Table> cmd_simulate_years(const RunConfig& config) {
  const EffortPolicy policy = make_policy(config, config.econ, config.habitat);
  const double x_init = config.x_init.value_or(default_x_init(config.habitat));
  const HorizonResult h =
      run_years(x_init, config.years, policy, config.econ, config.habitat, config.step);

  Table years = make_table(config, "years",
                           {"year", "start_x1", "start_x2", "end_x1", "end_x2", "J", "revenue",
                            "discounted", "start_total_diff", "extinct"});
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    const YearlyRecord& y = h.records[i];
    const Cell diff = i == 0 ? Cell(std::monostate{}) : Cell(h.start_total_diffs[i - 1]);
    years.add_row({y.year, y.start.fishery, y.start.reserve, y.end.fishery, y.end.reserve,
                   y.recruits, y.revenue, y.discounted_revenue, diff, y.extinct});
  }

  // Season k occupies [k - T, k]; recruitment is a jump at k - T, written as
  // two rows sharing that time stamp.
  Table samples = make_table(config, "samples", {"year", "t", "x1", "x2", "E", "revenue"});
  const double T = config.habitat.season_length();
  for (std::size_t i = 0; i < h.seasons.size(); ++i) {
    const YearlyRecord& y = h.records[i];
    const double origin = static_cast<double>(y.year) - T;
    if (i > 0) {
      const PatchState& prev = h.records[i - 1].end;
      samples.add_row({y.year, origin, prev.fishery, prev.reserve, std::monostate{},
                       std::monostate{}});
    }
    const Trajectory& traj = h.seasons[i];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      samples.add_row({y.year, origin + traj.times[k], traj.states[k].fishery,
                       traj.states[k].reserve, traj.efforts[k], traj.revenue[k]});
    }
  }

  Table horizon = make_table(config, "horizon",
                             {"policy", "years", "total_discounted", "persistent",
                              "extinction_year"});
  horizon.add_row({policy.describe(), config.years, h.total_discounted, h.persistent,
                   h.extinction_year ? Cell(*h.extinction_year) : Cell(std::monostate{})});
  return {std::move(years), std::move(horizon), std::move(samples)};
}

std::vector<Table> cmd_sweep(const RunConfig& config) {
  std::vector<std::string> columns;
  for (const auto& a : config.sweep) columns.push_back(a.key);
  for (const char* c : {"alpha", "effort_boundary", "boundary_status", "horizon_revenue",
                        "mean_effort", "error"}) {
    columns.emplace_back(c);
  }
  Table table = make_table(config, "sweep", columns);

  const SweepAxis* outer = &config.sweep[0];
  const SweepAxis* inner = config.sweep.size() > 1 ? &config.sweep[1] : nullptr;
  const int n_inner = inner ? inner->axis.count : 1;
  for (int i = 0; i < outer->axis.count; ++i) {
    for (int j = 0; j < n_inner; ++j) {
      HabitatSpec hs = config.habitat.spec();
      EconSpec es = config.econ.spec();
      std::vector<Cell> row;
      const double u = outer->axis.count == 1 ? outer->axis.lo : outer->axis.at(i);
      apply_numeric(hs, es, outer->key, u);
      row.emplace_back(u);
      if (inner) {
        const double v = inner->axis.count == 1 ? inner->axis.lo : inner->axis.at(j);
        apply_numeric(hs, es, inner->key, v);
        row.emplace_back(v);
      }
      const HabitatParams params(hs);
      const EconParams econ(es);
      row.emplace_back(alpha(params, config.sweep_effort));
      const EffortBoundary b = effort_boundary(params);
      row.push_back(opt(b.effort));
      row.emplace_back(std::string(to_string(b.status)));
      const double step = config.resolved.at("step").empty() ? default_step(params) : config.step;
      try {
        const EffortPolicy policy = EffortPolicy::composite(econ, params);
        const double x_init = config.x_init.value_or(default_x_init(params));
        const HorizonResult h = run_years(x_init, config.years, policy, econ, params, step);
        row.emplace_back(h.total_discounted);
        row.emplace_back(h.seasons.front().mean_effort());
        row.emplace_back(std::string());
      } catch (const NumericalError& e) {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
        row.emplace_back(std::string(to_string(e.code())));
      }
      table.add_row(std::move(row));
    }
  }
  return {std::move(table)};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-patch fishery with a marine reserve: persistence, harvest control and "
               "multi-year simulation"};
  app.name("mpa-harvest");
  app.allow_extras();
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::string preset;
  app.add_option("command", command, "bifurcation | compare | simulate-years | sweep")
      ->required()
      ->check(CLI::IsMember({"bifurcation", "compare", "simulate-years", "sweep"}));
  app.add_option("--config", config_path, "JSON file of key/value settings");
  app.add_option("--out", out_dir, "directory receiving one file per table");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--preset", preset,
                 "fig1-topleft | fig1-topright | fig1-bottomleft | fig1-bottomright | fig2 | fig3");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mpa-harvest: " << e.what() << '\n';
    return 2;
  }

  try {
    std::vector<Layer> layers{default_layer()};
    if (!preset.empty()) layers.push_back(preset_layer(preset));
    if (!config_path.empty()) layers.push_back(file_layer(config_path));
    layers.push_back(flag_layer(app.remaining()));
    const RunConfig config = resolve(command, layers);

    std::vector<Table> tables;
    if (command == "bifurcation") tables = cmd_bifurcation(config);
    else if (command == "compare") tables = cmd_compare(config);
    else if (command == "simulate-years") tables = cmd_simulate_years(config);
    else tables = cmd_sweep(config);

    const Format fmt = format == "json" ? Format::Json : Format::Csv;
    if (out_dir.empty()) emit(tables, fmt, out);
    else emit_to_directory(tables, fmt, out_dir);
    return 0;
  } catch (const ConfigError& e) {
    err << "mpa-harvest: config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    err << "mpa-harvest: invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "mpa-harvest: numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "mpa-harvest: cannot write output: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mpa::cli
