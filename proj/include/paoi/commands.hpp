#pragma once

// Command implementations behind the CLI. Each writes its tables plus a
// manifest.json into the output directory and returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "paoi/aoi_analytic.hpp"
#include "paoi/config.hpp"
#include "paoi/empirical.hpp"
#include "paoi/queue_sim.hpp"
#include "paoi/report.hpp"
#include "paoi/scenario.hpp"
#include "paoi/validation.hpp"

namespace paoi {

enum ExitCode : int { exit_ok = 0, exit_runtime_error = 1, exit_validation_failed = 2, exit_config_error = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> z;
  std::optional<double> ruin_level;
  std::optional<PsiMode> psi_mode;
  std::optional<ComputeFormula> avg_mode;
  std::optional<ComputeFeed> feed;
  std::optional<int> replications;
};

inline void apply_overrides(Config& c, const Overrides& o) {
  if (o.seed) {
    c.simulation.seed = *o.seed;
    c.validation.seed = *o.seed;
  }
  if (o.z) {
    if (!(*o.z > 0.0)) throw ConfigError("--z", "must be positive");
    c.threshold = *o.z;
  }
  if (o.ruin_level) {
    if (!(*o.ruin_level > 0.0)) throw ConfigError("--ruin-level", "must be positive");
    c.ruin_level = *o.ruin_level;
  }
  if (o.psi_mode) c.psi_modes = {*o.psi_mode};
  if (o.avg_mode) c.avg_modes = {*o.avg_mode};
  if (o.feed) c.scenario.queue.feed = *o.feed;
  if (o.replications) {
    if (*o.replications < 1) throw ConfigError("--replications", "must be >= 1");
    c.simulation.replications = *o.replications;
  }
}

struct CommandContext {
  std::string config_path;
  std::filesystem::path out_dir;
  std::ostream* log = &std::cerr;
};

namespace detail {

inline double require_ruin_level(const Config& c) {
  if (!c.ruin_level)
    throw ConfigError("analysis.ruin_level", "required (set it in the config or pass --ruin-level)");
  return *c.ruin_level;
}

inline nlohmann::json settings_json(const Config& c) {
  nlohmann::json modes_psi = nlohmann::json::array(), modes_avg = nlohmann::json::array(),
                 disc = nlohmann::json::array();
  for (auto m : c.psi_modes) modes_psi.push_back(std::string(to_string(m)));
  for (auto m : c.avg_modes) modes_avg.push_back(std::string(to_string(m)));
  for (auto d : c.disciplines) disc.push_back(std::string(to_string(d)));
  nlohmann::json j = {{"disciplines", disc},
                      {"psi_modes", modes_psi},
                      {"avg_modes", modes_avg},
                      {"z", c.threshold},
                      {"feed", std::string(to_string(c.scenario.queue.feed))},
                      {"replications", c.simulation.replications},
                      {"horizon_s", c.simulation.horizon_s},
                      {"meta_surfaces", c.scenario.link.meta_surfaces},
                      {"num_users", c.scenario.num_users}};
  if (c.ruin_level) j["ruin_level"] = *c.ruin_level;
  return j;
}

inline void finish(const CommandContext& ctx, RunManifest m, const Config& c) {
  m.config_path = ctx.config_path;
  m.output_dir = ctx.out_dir.string();
  m.timestamp = utc_timestamp();
  m.settings = settings_json(c);
  write_manifest(ctx.out_dir / "manifest.json", m);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// analytic

inline std::vector<AnalyticRow> analytic_rows(const Config& c) {
  std::vector<AnalyticRow> rows;
  const AnalyticGrid& g = c.analytic;
  const std::optional<double> a = g.thresholds.empty() ? c.ruin_level : detail::require_ruin_level(c);
  for (auto [r, mu] : g.points)
    for (Discipline d : c.disciplines) {
      const StageLaw law{r, mu, d};
      auto row = [&](std::optional<double> x, std::string q, std::string mode, std::optional<double> v,
                     std::optional<Validity> flag) {
        rows.push_back({d, r, mu, x, std::move(q), std::move(mode), v, flag});
      };
      for (double x : g.ages) {
        const double p = pdf_paoi(law, x);
        row(x, "pdf", "closed-form", p,
            std::isfinite(p) && p >= 0.0 ? Validity::valid : Validity::invalid);
      }
      for (double x : g.ages) {
        const CdfValue v = cdf_paoi(law, x, CdfSource::closed_form);
        row(x, "cdf", "closed-form", v.value, v.validity);
      }
      if (!g.ages.empty()) {
        const auto q = cdf_paoi_quadrature(law, g.ages);
        for (std::size_t i = 0; i < g.ages.size(); ++i)
          row(g.ages[i], "cdf", "quadrature", q[i], detail::probability_validity(q[i]));
      }
      if (!g.thresholds.empty()) {
        const SystemLaw sys{std::vector<StageLaw>(static_cast<std::size_t>(g.users), law),
                            ExponentMode::homogeneous_power};
        for (PsiMode m : c.psi_modes) {
          const auto curve = severity_curve(sys, *a, g.thresholds, m);
          for (std::size_t i = 0; i < curve.size(); ++i)
            row(g.thresholds[i], "severity", std::string(to_string(m)), curve[i].value,
                curve[i].value ? std::optional(curve[i].validity) : std::nullopt);
        }
      }
      row(std::nullopt, "avg_stage", "closed-form", avg_paoi_stage(law), Validity::valid);
    }
  return rows;
}

inline int cmd_analytic(const Config& c, const CommandContext& ctx) {
  const auto rows = analytic_rows(c);
  const auto path = ctx.out_dir / "analytic.csv";
  {
    auto os = open_output(path);
    write_analytic_csv(os, rows);
  }
  RunManifest m;
  m.command = "analytic";
  m.files = {path.filename().string()};
  detail::finish(ctx, std::move(m), c);
  return exit_ok;
}

// ---------------------------------------------------------------------------
// simulate

inline int cmd_simulate(const Config& c, const CommandContext& ctx) {
  const double a = detail::require_ruin_level(c);
  if (c.scenario.num_users < 1) throw ConfigError("users.count", "at least one user required");
  const std::vector<double> rates = realize_rates(c.scenario);
  RunManifest m;
  m.command = "simulate";
  m.seed = c.simulation.seed;

  const auto summary_path = ctx.out_dir / "simulation_summary.csv";
  auto summary_os = open_output(summary_path);
  CsvWriter summary(summary_os, {"discipline", "replication", "user", "stage", "update_rate", "count",
                                 "mean_paoi", "half_width", "drops", "preemptions",
                                 "compute_arrival_rate"});
  for (Discipline d : c.disciplines) {
    QueueConfig qc = c.scenario.queue;
    qc.discipline = d;
    const auto reps = run_replications(qc, rates, c.simulation.horizon_s, c.simulation.seed,
                                       c.simulation.replications);
    const std::string tag(to_string(d));
    const auto samples_path = ctx.out_dir / ("samples_" + tag + ".csv");
    {
      auto os = open_output(samples_path);
      write_samples_csv(os, reps);
    }
    std::vector<ExcursionStats> ex;
    for (const auto& s : reps) ex.push_back(excursion_severity(system_trace(s, Stage::stage1), a));
    const auto ex_path = ctx.out_dir / ("excursions_" + tag + ".csv");
    {
      auto os = open_output(ex_path);
      write_excursions_csv(os, ex);
    }
    m.files.push_back(samples_path.filename().string());
    m.files.push_back(ex_path.filename().string());

    for (std::size_t k = 0; k < reps.size(); ++k) {
      const PaoiSamples& s = reps[k];
      auto emit = [&](std::string user, Stage st, std::optional<double> rate,
                      std::span<const PaoiSample> series, std::uint64_t drops, std::uint64_t pre) {
        std::string n = std::to_string(series.size()), mean, hw;
        if (series.size() >= 2) {
          const Estimate e = estimate_avg(peaks(series));
          mean = format_number(e.mean);
          hw = format_number(e.half_width);
        }
        summary.row({tag, std::to_string(k), std::move(user), std::string(to_string(st)),
                     format_number(rate), n, mean, hw, std::to_string(drops), std::to_string(pre),
                     format_number(s.measured_compute_arrival_rate())});
      };
      for (std::size_t u = 0; u < s.users(); ++u) {
        emit(std::to_string(u), Stage::stage1, rates[u], s.stage1[u], s.counters[u].drops,
             s.counters[u].preemptions);
        if (qc.feed == ComputeFeed::tandem)
          emit(std::to_string(u), Stage::e2e, rates[u], s.e2e[u], 0, 0);
      }
      emit("", Stage::compute, std::nullopt, s.compute, s.total_drops(), s.total_preemptions());
    }
  }
  m.files.push_back(summary_path.filename().string());
  detail::finish(ctx, std::move(m), c);
  return exit_ok;
}

// ---------------------------------------------------------------------------
// sweep

inline Sweep make_sweep(const Config& c) {
  if (!c.sweep) throw ConfigError("sweep", "required for the sweep command");
  Sweep s;
  s.variable = c.sweep->variable;
  s.values = c.sweep->values;
  s.replications = c.simulation.replications;
  s.base = c.scenario;
  s.analysis.ruin_level = detail::require_ruin_level(c);
  s.analysis.threshold = c.threshold;
  s.analysis.arrival_rate_mode = c.arrival_rate_mode;
  s.analysis.disciplines = c.disciplines;
  s.analysis.avg_modes = c.avg_modes;
  s.analysis.psi_modes = c.psi_modes;
  s.analysis.simulate = c.simulation.enabled;
  s.analysis.horizon_s = c.simulation.horizon_s;
  s.analysis.seed = c.simulation.seed;
  return s;
}

inline void write_sweep_svg(std::ostream& os, const Sweep& sw, std::span<const AggregateRow> agg) {
  std::vector<SvgSeries> series;
  auto find = [&](const std::string& name) -> SvgSeries& {
    for (auto& s : series)
      if (s.name == name) return s;
    series.push_back({name, {}, {}});
    return series.back();
  };
  for (const auto& r : agg) {
    if (r.psi_mode != sw.analysis.psi_modes.front()) continue;
    const std::string base = std::string(to_string(r.discipline)) + " ";
    if (r.avg_analytic && r.avg_mode == ComputeFormula::corrected) {
      auto& s = find(base + "analytic");
      s.x.push_back(r.value);
      s.y.push_back(r.avg_analytic->mean);
    }
    if (r.avg_sim && r.avg_mode == sw.analysis.avg_modes.front()) {
      auto& s = find(base + "simulated");
      s.x.push_back(r.value);
      s.y.push_back(r.avg_sim->mean);
    }
  }
  write_svg_chart(os, "Average E2E peak AoI", to_string(sw.variable), "seconds", series);
}

inline int cmd_sweep(const Config& c, const CommandContext& ctx) {
  const Sweep sw = make_sweep(c);
  const auto rows = run_sweep(sw);
  const auto agg = aggregate(rows);
  RunManifest m;
  m.command = "sweep";
  m.seed = c.simulation.seed;
  const auto rows_path = ctx.out_dir / "sweep.csv";
  const auto agg_path = ctx.out_dir / "sweep_aggregate.csv";
  {
    auto os = open_output(rows_path);
    write_sweep_csv(os, rows);
  }
  {
    auto os = open_output(agg_path);
    write_aggregate_csv(os, agg);
  }
  m.files = {rows_path.filename().string(), agg_path.filename().string()};
  if (c.svg) {
    const auto svg_path = ctx.out_dir / "sweep.svg";
    auto os = open_output(svg_path);
    write_sweep_svg(os, sw, agg);
    m.files.push_back(svg_path.filename().string());
  }
  detail::finish(ctx, std::move(m), c);
  return exit_ok;
}

// ---------------------------------------------------------------------------
// validate

inline ValidationSettings validation_settings(const Config& c, const std::filesystem::path& out) {
  ValidationSettings v = c.validation;
  if (c.scenario.num_users < 1) throw ConfigError("users.count", "at least one user required");
  v.indoor = c.scenario;
  v.arrival_rate_mode = c.arrival_rate_mode;
  if (c.ruin_level) v.ruin_level = *c.ruin_level;
  v.output_dir = out;
  return v;
}

inline int cmd_validate(const Config& c, const CommandContext& ctx) {
  const ValidationSettings settings = validation_settings(c, ctx.out_dir);
  const ValidationReport report = run_validation(settings);
  const auto txt = ctx.out_dir / "validation_report.txt";
  const auto csv = ctx.out_dir / "validation.csv";
  {
    auto os = open_output(txt);
    write_validation_report(os, report);
  }
  {
    auto os = open_output(csv);
    CsvWriter w(os, {"criterion", "check", "passed", "detail", "seconds"});
    for (const auto& ch : report.checks)
      w.row({std::to_string(ch.criterion), ch.id, ch.passed ? "true" : "false", ch.detail,
             format_number(ch.seconds)});
  }
  if (ctx.log) write_validation_report(*ctx.log, report);
  RunManifest m;
  m.command = "validate";
  m.seed = settings.seed;
  m.files = {txt.filename().string(), csv.filename().string()};
  for (const auto& f : report.files) m.files.push_back(std::filesystem::path(f).filename().string());
  detail::finish(ctx, std::move(m), c);
  return report.all_passed() ? exit_ok : exit_validation_failed;
}

}  // namespace paoi
