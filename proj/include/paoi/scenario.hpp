#pragma once

// Indoor scenario (square room, RISs on the walls, static users), the rate
// chain from geometry to per-user update rates, and parameter sweeps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "paoi/aoi_analytic.hpp"
#include "paoi/empirical.hpp"
#include "paoi/error.hpp"
#include "paoi/parallel.hpp"
#include "paoi/queue_sim.hpp"
#include "paoi/rng.hpp"
#include "paoi/thz_link.hpp"

namespace paoi {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Room {
  double side_m = 50.0;
  std::vector<Point> ris_positions = wall_midpoints(50.0);

  static std::vector<Point> wall_midpoints(double side) {
    const double h = side / 2.0;
    return {{h, 0.0}, {side, h}, {h, side}, {0.0, h}};
  }

  void validate() const {
    if (!(side_m > 0.0)) throw DomainError("Room: side length must be positive");
    if (ris_positions.empty()) throw DomainError("Room: at least one RIS required");
    const double eps = 1e-9 * side_m;
    for (const auto& p : ris_positions) {
      const bool inside = p.x >= -eps && p.x <= side_m + eps && p.y >= -eps && p.y <= side_m + eps;
      const bool on_wall = std::abs(p.x) <= eps || std::abs(p.y) <= eps ||
                           std::abs(p.x - side_m) <= eps || std::abs(p.y - side_m) <= eps;
      if (!inside || !on_wall) throw DomainError("Room: RIS positions must lie on the walls");
    }
  }
};

struct Scenario {
  Room room;
  int num_users = 0;
  LinkParams link;
  LinkOptions link_options;
  QueueConfig queue;
  std::uint64_t placement_seed = 1;

  void validate() const {
    room.validate();
    link.validate();
    queue.validate();
    if (num_users < 0) throw DomainError("Scenario: number of users must be non-negative");
  }
};

inline constexpr std::uint64_t placement_stream = 2;

// i.i.d. uniform points strictly inside the room. The k-th point does not
// depend on num_users, so placements are nested across user counts.
inline std::vector<Point> place_users(const Scenario& s) {
  s.room.validate();
  if (s.num_users < 0) throw DomainError("place_users: number of users must be non-negative");
  Engine rng = make_stream(s.placement_seed, placement_stream);
  std::uniform_real_distribution<double> coord(0.0, s.room.side_m);
  auto draw = [&] {
    double v = coord(rng);
    while (v <= 0.0) v = coord(rng);
    return v;
  };
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(s.num_users));
  for (int u = 0; u < s.num_users; ++u) {
    const double x = draw();
    out.push_back({x, draw()});
  }
  return out;
}

struct Association {
  std::size_t serving_ris = 0;
  LinkGeometry geometry;
};

// Nearest RIS; equal distances go to the lowest index.
inline std::vector<Association> associate(std::span<const Point> users, const Room& room) {
  if (room.ris_positions.empty()) throw DomainError("associate: no RIS positions");
  std::vector<Association> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    std::vector<double> d;
    d.reserve(room.ris_positions.size());
    for (const auto& p : room.ris_positions) d.push_back(distance(u, p));
    const auto best = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
    out.push_back({best, LinkGeometry(std::move(d), best)});
  }
  return out;
}

inline std::vector<double> realize_rates(const Scenario& s, std::span<const Point> users) {
  s.link.validate();
  std::vector<double> out;
  out.reserve(users.size());
  for (const auto& a : associate(users, s.room))
    out.push_back(update_rate(rate_bps(a.geometry, s.link, s.link_options), s.link));
  return out;
}

inline std::vector<double> realize_rates(const Scenario& s) { return realize_rates(s, place_users(s)); }

inline SystemLaw system_law(std::span<const double> rates, double service_rate, Discipline d) {
  SystemLaw sys;
  for (double r : rates) sys.stages.push_back({r, service_rate, d});
  return sys;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { num_users, bandwidth };

inline std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::num_users ? "num_users" : "bandwidth";
}

struct SweepAnalysis {
  double ruin_level = 0.0;  // required, no default
  double threshold = 3.0;   // z
  ArrivalRateMode arrival_rate_mode = ArrivalRateMode::sum_of_service_rates;
  std::vector<Discipline> disciplines{Discipline::fcfs_mm12, Discipline::lcfs_mm12_star};
  std::vector<ComputeFormula> avg_modes{ComputeFormula::as_written, ComputeFormula::corrected};
  std::vector<PsiMode> psi_modes{PsiMode::as_written_cdf, PsiMode::survival};
  bool simulate = true;
  double horizon_s = 500.0;
  std::uint64_t seed = 1;

  void validate() const {
    SeverityQuery{ruin_level, threshold, PsiMode::survival}.validate();
    if (disciplines.empty() || avg_modes.empty() || psi_modes.empty())
      throw DomainError("SweepAnalysis: empty discipline or mode list");
    if (simulate && !(horizon_s > 0.0)) throw DomainError("SweepAnalysis: horizon must be positive");
  }
};

struct Sweep {
  SweepVariable variable = SweepVariable::num_users;
  std::vector<double> values;
  int replications = 1;
  Scenario base;
  SweepAnalysis analysis;

  void validate() const {
    if (values.empty()) throw DomainError("Sweep: no values");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (!(values[i] > values[i - 1])) throw DomainError("Sweep: values must be strictly increasing");
    if (replications < 1) throw DomainError("Sweep: replications must be >= 1");
    for (double v : values) {
      if (!(v > 0.0)) throw DomainError("Sweep: values must be positive");
      if (variable == SweepVariable::num_users && v != std::floor(v))
        throw DomainError("Sweep: user counts must be integers");
    }
    base.validate();
    analysis.validate();
  }

  Scenario scenario_at(double value, int replication) const {
    Scenario s = base;
    if (variable == SweepVariable::num_users)
      s.num_users = static_cast<int>(value);
    else
      s.link.bandwidth_hz = value;
    s.placement_seed = derive_seed(base.placement_seed, static_cast<std::uint64_t>(replication));
    return s;
  }
};

struct SweepRow {
  SweepVariable sweep_var = SweepVariable::num_users;
  double value = 0.0;
  int replication = 0;
  Discipline discipline = Discipline::fcfs_mm12;
  ComputeFormula avg_mode = ComputeFormula::corrected;
  std::optional<double> avg_analytic;
  std::optional<double> avg_sim;
  std::optional<double> avg_sim_ci;
  PsiMode psi_mode = PsiMode::survival;
  std::optional<double> j_z;
  std::optional<Validity> j_validity;
  std::optional<double> ks_stage;
  std::uint64_t drops = 0;
  std::uint64_t preemptions = 0;
  std::optional<double> j_sim;
  std::string status = "ok";
};

namespace detail {

inline void add_status(std::string& status, std::string_view issue) {
  if (status == "ok")
    status = issue;
  else if (status.find(issue) == std::string::npos)
    status += ";" + std::string(issue);
}

struct SimSummary {
  std::optional<Estimate> e2e;
  std::optional<double> ks;
  std::optional<double> j_sim;
  std::uint64_t drops = 0, preemptions = 0;
  std::vector<std::string> issues;
};

// Largest stage-1 KS distance over users against the canonical analytic CDF.
inline double max_stage_ks(const PaoiSamples& s, std::span<const double> rates, double mu,
                           Discipline d) {
  double worst = 0.0;
  for (std::size_t u = 0; u < s.users(); ++u) {
    const EmpiricalCdf emp = empirical_cdf(s, u, Stage::stage1);
    const StageLaw law{rates[u], mu, d};
    const double ks =
        d == Discipline::fcfs_mm12
            ? ks_distance(emp, [&](double x) { return cdf_paoi(law, x, CdfSource::closed_form).value; })
            : ks_distance(emp, cdf_paoi_quadrature(law, emp.sorted()));
    worst = std::max(worst, ks);
  }
  return worst;
}

inline SimSummary simulate_cell(const Scenario& sc, const SweepAnalysis& an, std::span<const double> rates,
                                Discipline d, std::uint64_t seed) {
  SimSummary out;
  QueueConfig qc = sc.queue;
  qc.discipline = d;
  const PaoiSamples s = run(qc, rates, an.horizon_s, seed);
  out.drops = s.total_drops();
  out.preemptions = s.total_preemptions();
  try {
    out.e2e = estimate_e2e_composite(s);
  } catch (const InsufficientData&) {
    out.issues.emplace_back("insufficient-samples");
  }
  try {
    out.ks = max_stage_ks(s, rates, qc.stage_service_rate, d);
  } catch (const InsufficientData&) {
    out.issues.emplace_back("insufficient-samples");
  }
  const ExcursionStats ex = excursion_severity(system_trace(s, Stage::stage1), an.ruin_level);
  if (ex.empty())
    out.issues.emplace_back("no-excursions");
  else
    out.j_sim = ex.cdf(an.threshold);
  return out;
}

inline std::vector<SweepRow> evaluate_cell(const Sweep& sw, double value, int replication) {
  const Scenario sc = sw.scenario_at(value, replication);
  const SweepAnalysis& an = sw.analysis;
  std::vector<SweepRow> rows;
  auto blank = [&](Discipline d, ComputeFormula f, PsiMode m) {
    SweepRow r;
    r.sweep_var = sw.variable;
    r.value = value;
    r.replication = replication;
    r.discipline = d;
    r.avg_mode = f;
    r.psi_mode = m;
    return r;
  };

  std::vector<double> rates;
  try {
    rates = realize_rates(sc);
    if (rates.empty()) throw DomainError("no users");
  } catch (const Error& e) {
    for (Discipline d : an.disciplines)
      for (ComputeFormula f : an.avg_modes)
        for (PsiMode m : an.psi_modes) {
          rows.push_back(blank(d, f, m));
          rows.back().status = std::string("error:") + e.what();
        }
    return rows;
  }

  const std::uint64_t sim_seed = derive_seed(an.seed, static_cast<std::uint64_t>(replication));
  for (Discipline d : an.disciplines) {
    const SystemLaw sys = system_law(rates, sc.queue.stage_service_rate, d);
    const double lambda_c = compute_arrival_rate(sys.stages, an.arrival_rate_mode);

    std::optional<SimSummary> sim;
    std::string sim_error;
    if (an.simulate) {
      try {
        sim = simulate_cell(sc, an, rates, d, sim_seed);
      } catch (const Error& e) {
        sim_error = std::string("sim-error:") + e.what();
      }
    }

    for (ComputeFormula f : an.avg_modes) {
      std::optional<double> avg;
      std::string avg_issue;
      try {
        avg = avg_paoi_e2e(sys, {lambda_c, sc.queue.compute_service_rate, f});
      } catch (const InstabilityError&) {
        avg_issue = "unstable-compute-queue";
      } catch (const Error& e) {
        avg_issue = std::string("error:") + e.what();
      }
      for (PsiMode m : an.psi_modes) {
        SweepRow r = blank(d, f, m);
        r.avg_analytic = avg;
        if (!avg_issue.empty()) add_status(r.status, avg_issue);
        try {
          const SeverityResult j = severity_cdf(sys, {an.ruin_level, an.threshold, m});
          r.j_z = j.value;
          r.j_validity = j.validity;
          if (!j.computable()) add_status(r.status, "severity-undefined");
        } catch (const Error& e) {
          add_status(r.status, std::string("error:") + e.what());
        }
        if (!sim_error.empty()) add_status(r.status, sim_error);
        if (sim) {
          if (sim->e2e) {
            r.avg_sim = sim->e2e->mean;
            r.avg_sim_ci = sim->e2e->half_width;
          }
          r.ks_stage = sim->ks;
          r.j_sim = sim->j_sim;
          r.drops = sim->drops;
          r.preemptions = sim->preemptions;
          for (const auto& issue : sim->issues) add_status(r.status, issue);
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

}  // namespace detail

// One block of rows per (value, replication), in sweep order. Cells are
// evaluated in parallel; a failing cell is recorded in its status column.
inline std::vector<SweepRow> run_sweep(const Sweep& sw) {
  sw.validate();
  const std::size_t reps = static_cast<std::size_t>(sw.replications);
  auto blocks = parallel_map(sw.values.size() * reps, [&](std::size_t i) {
    return detail::evaluate_cell(sw, sw.values[i / reps], static_cast<int>(i % reps));
  });
  std::vector<SweepRow> out;
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct AggregateRow {
  SweepVariable sweep_var = SweepVariable::num_users;
  double value = 0.0;
  Discipline discipline = Discipline::fcfs_mm12;
  ComputeFormula avg_mode = ComputeFormula::corrected;
  PsiMode psi_mode = PsiMode::survival;
  int replications = 0;
  std::optional<Estimate> avg_analytic, avg_sim, j_z, j_sim;
  int failed_cells = 0;
};

// Mean and 95 % half-width across replications per (value, discipline, modes).
inline std::vector<AggregateRow> aggregate(std::span<const SweepRow> rows) {
  using Key = std::tuple<double, int, int, int>;
  struct Acc {
    AggregateRow head;
    std::vector<double> avg_analytic, avg_sim, j_z, j_sim;
  };
  std::vector<Key> order;
  std::map<Key, Acc> groups;
  for (const auto& r : rows) {
    const Key k{r.value, static_cast<int>(r.discipline), static_cast<int>(r.avg_mode),
                static_cast<int>(r.psi_mode)};
    auto [it, fresh] = groups.try_emplace(k);
    Acc& a = it->second;
    if (fresh) {
      order.push_back(k);
      a.head.sweep_var = r.sweep_var;
      a.head.value = r.value;
      a.head.discipline = r.discipline;
      a.head.avg_mode = r.avg_mode;
      a.head.psi_mode = r.psi_mode;
    }
    ++a.head.replications;
    if (r.status != "ok") ++a.head.failed_cells;
    if (r.avg_analytic) a.avg_analytic.push_back(*r.avg_analytic);
    if (r.avg_sim) a.avg_sim.push_back(*r.avg_sim);
    if (r.j_z) a.j_z.push_back(*r.j_z);
    if (r.j_sim) a.j_sim.push_back(*r.j_sim);
  }
  auto pooled = [](const std::vector<double>& v) -> std::optional<Estimate> {
    if (v.empty()) return std::nullopt;
    return pool_replications(v);
  };
  std::vector<AggregateRow> out;
  for (const auto& k : order) {
    Acc& a = groups.at(k);
    a.head.avg_analytic = pooled(a.avg_analytic);
    a.head.avg_sim = pooled(a.avg_sim);
    a.head.j_z = pooled(a.j_z);
    a.head.j_sim = pooled(a.j_sim);
    out.push_back(a.head);
  }
  return out;
}

}  // namespace paoi
