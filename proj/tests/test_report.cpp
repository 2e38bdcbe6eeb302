#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "paoi/commands.hpp"
#include "paoi/report.hpp"

using namespace paoi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("paoi_test_" + name);
  fs::remove_all(p);
  return p;
}

Config analytic_config() {
  Config c = parse_config(nlohmann::json::parse(R"({
    "link": {"meta_surfaces": 100},
    "analysis": {"ruin_level": 1.0},
    "analytic": {"points": [{"r": 2, "mu": 1}], "ages": [0, 1], "thresholds": [1]}
  })"));
  return c;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1515000.0233333334), "1515000.0233333334");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::optional<double>{}), "");
  EXPECT_EQ(format_number(std::uint64_t{42}), "42");
  const double x = 0.21285000254822256846;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(CsvWriter, QuotesOnlyWhenNeeded) {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({"plain", "with,comma"});
  w.row({"say \"hi\"", ""});
  EXPECT_EQ(os.str(), "a,b\nplain,\"with,comma\"\n\"say \"\"hi\"\"\",\n");
}

TEST(Schemas, HeadersAreStable) {
  std::ostringstream s, e, a, sw, ag;
  write_samples_csv(s, std::span<const PaoiSamples>{});
  write_excursions_csv(e, std::span<const ExcursionStats>{});
  write_analytic_csv(a, std::span<const AnalyticRow>{});
  write_sweep_csv(sw, std::span<const SweepRow>{});
  write_aggregate_csv(ag, std::span<const AggregateRow>{});
  EXPECT_EQ(s.str(), "replication,user,stage,delivery_time,paoi_seconds\n");
  EXPECT_EQ(e.str(), "replication,ruin_level,exceedance\n");
  EXPECT_EQ(a.str(), "discipline,r,mu,a_or_z,quantity,mode,value,validity_flag\n");
  EXPECT_EQ(first_line(sw.str()),
            "sweep_var,value,replication,discipline,avg_analytic_mode,avg_analytic,avg_sim,"
            "avg_sim_ci,severity_mode,j_z,j_validity,ks_stage,drops,preemptions,j_sim,status");
  EXPECT_EQ(first_line(ag.str()),
            "sweep_var,value,discipline,avg_analytic_mode,severity_mode,replications,failed_cells,"
            "avg_analytic_mean,avg_analytic_hw,avg_sim_mean,avg_sim_hw,j_z_mean,j_z_hw,j_sim_mean,"
            "j_sim_hw");
}

TEST(Analytic, RowsForReferencePoint) {
  const auto rows = analytic_rows(analytic_config());
  auto find = [&](Discipline d, const std::string& q, const std::string& mode, double x) {
    for (const auto& r : rows)
      if (r.discipline == d && r.quantity == q && r.mode == mode && r.a_or_z && *r.a_or_z == x) return r;
    ADD_FAILURE() << q << " " << mode << " " << x;
    return AnalyticRow{};
  };
  EXPECT_NEAR(*find(Discipline::fcfs_mm12, "pdf", "closed-form", 1.0).value, 0.2128, 1e-4);
  const AnalyticRow l0 = find(Discipline::lcfs_mm12_star, "cdf", "closed-form", 0.0);
  EXPECT_NEAR(*l0.value, -1.0 / 3.0, 1e-9);
  EXPECT_EQ(*l0.validity, Validity::invalid);
  EXPECT_NEAR(*find(Discipline::lcfs_mm12_star, "cdf", "quadrature", 1.0).value, 0.13239388385739519812,
              1e-9);
  const AnalyticRow sev = find(Discipline::fcfs_mm12, "severity", "survival", 1.0);
  EXPECT_NEAR(*sev.value, 3.0488, 1e-3);
  EXPECT_EQ(*sev.validity, Validity::invalid);
  // per discipline: 2 pdf + 2 cdf + 2 quadrature + 2 severity + 1 average
  EXPECT_EQ(rows.size(), 18u);
}

TEST(Analytic, EmptyGridGivesHeaderOnly) {
  Config c = analytic_config();
  c.analytic.points.clear();
  const fs::path dir = scratch("analytic_empty");
  EXPECT_EQ(cmd_analytic(c, {"cfg.json", dir, nullptr}), exit_ok);
  EXPECT_EQ(slurp(dir / "analytic.csv"), "discipline,r,mu,a_or_z,quantity,mode,value,validity_flag\n");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "analytic");
  EXPECT_EQ(manifest["config_path"], "cfg.json");
  EXPECT_EQ(manifest["tool_version"], std::string(version));
  EXPECT_EQ(manifest["files"][0], "analytic.csv");
  EXPECT_FALSE(manifest["timestamp"].get<std::string>().empty());
}

TEST(Analytic, ThresholdsNeedRuinLevel) {
  Config c = analytic_config();
  c.ruin_level.reset();
  EXPECT_THROW(analytic_rows(c), ConfigError);
  c.analytic.thresholds.clear();
  EXPECT_NO_THROW(analytic_rows(c));
}

TEST(Sweep, CommandWritesTablesAndIsReproducible) {
  Config c = parse_config(nlohmann::json::parse(R"({
    "link": {"meta_surfaces": 100},
    "users": {"count": 2},
    "queue": {"stage_service_rate": 5, "compute_service_rate": 100},
    "analysis": {"ruin_level": 0.5},
    "simulation": {"horizon_s": 100, "replications": 2, "seed": 3},
    "sweep": {"variable": "num_users", "values": [2, 3, 4]},
    "svg": true
  })"));
  Overrides o;
  o.psi_mode = PsiMode::survival;
  o.avg_mode = ComputeFormula::corrected;
  apply_overrides(c, o);
  c.disciplines = {Discipline::fcfs_mm12};
  const fs::path d1 = scratch("sweep1"), d2 = scratch("sweep2");
  EXPECT_EQ(cmd_sweep(c, {"x.json", d1, nullptr}), exit_ok);
  EXPECT_EQ(cmd_sweep(c, {"x.json", d2, nullptr}), exit_ok);
  const std::string a = slurp(d1 / "sweep.csv");
  EXPECT_EQ(a, slurp(d2 / "sweep.csv"));
  EXPECT_EQ(slurp(d1 / "sweep_aggregate.csv"), slurp(d2 / "sweep_aggregate.csv"));
  // one row per (value, replication) when a single discipline and mode pair is selected
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 3 * 2);
  const std::string svg = slurp(d1 / "sweep.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Validate, CorruptedToleranceFails) {
  Config c = parse_config(nlohmann::json::parse(R"({"link": {"meta_surfaces": 100}, "users": {"count": 15}})"));
  ValidationSettings s = validation_settings(c, scratch("validate"));
  s.tol.moment = 0.0;
  const Check ch = check_moments(s);
  EXPECT_FALSE(ch.passed);
  s.tol.moment = 1e-6;
  EXPECT_TRUE(check_moments(s).passed);
  s.tol.ks = 0.0;
  for (const auto& k : check_simulator_ks(s)) EXPECT_FALSE(k.passed);
}

TEST(Simulate, CommandExports) {
  Config c = parse_config(nlohmann::json::parse(R"({
    "link": {"meta_surfaces": 100},
    "users": {"count": 2},
    "queue": {"disciplines": ["lcfs"]},
    "analysis": {"ruin_level": 0.5},
    "simulation": {"horizon_s": 50, "replications": 2}
  })"));
  const fs::path dir = scratch("simulate");
  EXPECT_EQ(cmd_simulate(c, {"x.json", dir, nullptr}), exit_ok);
  EXPECT_EQ(first_line(slurp(dir / "samples_lcfs.csv")), "replication,user,stage,delivery_time,paoi_seconds");
  EXPECT_EQ(first_line(slurp(dir / "excursions_lcfs.csv")), "replication,ruin_level,exceedance");
  const std::string summary = slurp(dir / "simulation_summary.csv");
  EXPECT_NE(summary.find("lcfs,1,1,stage1"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}
