#pragma once

// JSON configuration. Every object rejects keys it does not know; errors carry
// the dotted path of the offending field.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "paoi/aoi_analytic.hpp"
#include "paoi/error.hpp"
#include "paoi/queue_sim.hpp"
#include "paoi/scenario.hpp"
#include "paoi/validation.hpp"

namespace paoi {

struct SimulationSettings {
  bool enabled = true;
  double horizon_s = 500.0;
  std::uint64_t seed = 1;
  int replications = 1;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::num_users;
  std::vector<double> values;
};

struct AnalyticGrid {
  std::vector<std::pair<double, double>> points;  // (r, μ)
  std::vector<double> ages;
  std::vector<double> thresholds;
  int users = 1;  // system size for the severity rows
};

struct Config {
  Scenario scenario;
  std::vector<Discipline> disciplines{Discipline::fcfs_mm12, Discipline::lcfs_mm12_star};
  std::optional<double> ruin_level;
  double threshold = 3.0;
  std::vector<PsiMode> psi_modes{PsiMode::as_written_cdf, PsiMode::survival};
  std::vector<ComputeFormula> avg_modes{ComputeFormula::as_written, ComputeFormula::corrected};
  ArrivalRateMode arrival_rate_mode = ArrivalRateMode::sum_of_service_rates;
  SimulationSettings simulation;
  std::optional<SweepSpec> sweep;
  AnalyticGrid analytic;
  ValidationSettings validation;
  bool svg = false;
};

namespace detail {

using json = nlohmann::json;

class ConfigObject {
 public:
  ConfigObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  ConfigObject child(const std::string& key) { return ConfigObject(raw(key), at(key)); }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    return v.get<double>();
  }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) throw ConfigError(at(key), "must be positive");
    return v;
  }

  std::int64_t integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  template <class Parse>
  auto strings(const std::string& key, Parse&& parse) {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError(at(key), "expected a non-empty array of strings");
    std::vector<decltype(parse(std::string(), std::string()))> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = at(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_string()) throw ConfigError(p, "expected a string");
      out.push_back(parse(v[i].get<std::string>(), p));
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, _] : j_.items())
      if (!used_.contains(key)) throw ConfigError(at(key), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace detail

inline Discipline parse_discipline(const std::string& s, const std::string& path) {
  if (s == "fcfs") return Discipline::fcfs_mm12;
  if (s == "lcfs") return Discipline::lcfs_mm12_star;
  throw ConfigError(path, "expected \"fcfs\" or \"lcfs\", got \"" + s + "\"");
}

inline PsiMode parse_psi_mode(const std::string& s, const std::string& path) {
  if (s == "as-written") return PsiMode::as_written_cdf;
  if (s == "survival") return PsiMode::survival;
  throw ConfigError(path, "expected \"as-written\" or \"survival\", got \"" + s + "\"");
}

inline ComputeFormula parse_avg_mode(const std::string& s, const std::string& path) {
  if (s == "as-written") return ComputeFormula::as_written;
  if (s == "corrected") return ComputeFormula::corrected;
  throw ConfigError(path, "expected \"as-written\" or \"corrected\", got \"" + s + "\"");
}

inline ComputeFeed parse_feed(const std::string& s, const std::string& path) {
  if (s == "tandem") return ComputeFeed::tandem;
  if (s == "independent") return ComputeFeed::independent_poisson;
  throw ConfigError(path, "expected \"tandem\" or \"independent\", got \"" + s + "\"");
}

inline ArrivalRateMode parse_arrival_rate_mode(const std::string& s, const std::string& path) {
  if (s == "sum-of-service-rates") return ArrivalRateMode::sum_of_service_rates;
  if (s == "effective-throughput") return ArrivalRateMode::effective_throughput;
  throw ConfigError(path, "expected \"sum-of-service-rates\" or \"effective-throughput\", got \"" + s + "\"");
}

inline SweepVariable parse_sweep_variable(const std::string& s, const std::string& path) {
  if (s == "num_users") return SweepVariable::num_users;
  if (s == "bandwidth") return SweepVariable::bandwidth;
  throw ConfigError(path, "expected \"num_users\" or \"bandwidth\", got \"" + s + "\"");
}

namespace detail {

inline void read_link(ConfigObject o, LinkParams& p, LinkOptions& opt) {
  if (o.has("bandwidth_hz")) p.bandwidth_hz = o.positive("bandwidth_hz");
  if (o.has("carrier_hz")) p.carrier_hz = o.positive("carrier_hz");
  if (o.has("tx_power_w")) p.tx_power_w = o.positive("tx_power_w");
  if (o.has("absorption_per_m")) p.absorption_per_m = o.positive("absorption_per_m");
  if (o.has("temperature_k")) p.temperature_k = o.positive("temperature_k");
  if (o.has("image_size_bits")) p.image_size_bits = o.positive("image_size_bits");
  if (!o.has("meta_surfaces")) throw ConfigError(o.at("meta_surfaces"), "required (no default)");
  const auto n = o.integer("meta_surfaces");
  if (n < 1 || n > 1'000'000) throw ConfigError(o.at("meta_surfaces"), "must be in [1, 1e6]");
  p.meta_surfaces = static_cast<int>(n);
  if (o.has("include_serving_ris")) opt.include_serving_ris = o.boolean("include_serving_ris");
  if (o.has("conventional_noise")) opt.conventional_noise = o.boolean("conventional_noise");
  o.reject_unknown();
}

inline void read_room(ConfigObject o, Room& room) {
  if (o.has("side_m")) {
    room.side_m = o.positive("side_m");
    room.ris_positions = Room::wall_midpoints(room.side_m);
  }
  if (o.has("ris_positions")) {
    const json& v = o.raw("ris_positions");
    const std::string path = o.at("ris_positions");
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of [x, y]");
    room.ris_positions.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& p = v[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError(path + "[" + std::to_string(i) + "]", "expected [x, y]");
      room.ris_positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  o.reject_unknown();
  try {
    room.validate();
  } catch (const DomainError& e) {
    throw ConfigError(o.at("ris_positions"), e.what());
  }
}

inline void read_queue(ConfigObject o, Config& c) {
  QueueConfig& q = c.scenario.queue;
  if (o.has("disciplines")) c.disciplines = o.strings("disciplines", parse_discipline);
  if (o.has("stage_service_rate")) q.stage_service_rate = o.positive("stage_service_rate");
  if (o.has("compute_service_rate")) q.compute_service_rate = o.positive("compute_service_rate");
  if (o.has("feed")) q.feed = parse_feed(o.string("feed"), o.at("feed"));
  if (o.has("warmup_fraction")) {
    q.warmup_fraction = o.number("warmup_fraction");
    if (!(q.warmup_fraction >= 0.0 && q.warmup_fraction < 1.0))
      throw ConfigError(o.at("warmup_fraction"), "must lie in [0, 1)");
  }
  q.discipline = c.disciplines.front();
  o.reject_unknown();
}

inline void read_analysis(ConfigObject o, Config& c) {
  if (o.has("ruin_level")) c.ruin_level = o.positive("ruin_level");
  if (o.has("z")) c.threshold = o.positive("z");
  if (o.has("psi_modes")) c.psi_modes = o.strings("psi_modes", parse_psi_mode);
  if (o.has("avg_modes")) c.avg_modes = o.strings("avg_modes", parse_avg_mode);
  if (o.has("arrival_rate_mode"))
    c.arrival_rate_mode = parse_arrival_rate_mode(o.string("arrival_rate_mode"), o.at("arrival_rate_mode"));
  o.reject_unknown();
}

inline void read_simulation(ConfigObject o, SimulationSettings& s) {
  if (o.has("enabled")) s.enabled = o.boolean("enabled");
  if (o.has("horizon_s")) s.horizon_s = o.positive("horizon_s");
  if (o.has("seed")) s.seed = o.unsigned_integer("seed");
  if (o.has("replications")) {
    const auto n = o.integer("replications");
    if (n < 1 || n > 100000) throw ConfigError(o.at("replications"), "must be in [1, 100000]");
    s.replications = static_cast<int>(n);
  }
  o.reject_unknown();
}

inline void read_sweep(ConfigObject o, std::optional<SweepSpec>& out) {
  SweepSpec s;
  if (!o.has("variable")) throw ConfigError(o.at("variable"), "required");
  if (!o.has("values")) throw ConfigError(o.at("values"), "required");
  s.variable = parse_sweep_variable(o.string("variable"), o.at("variable"));
  s.values = o.numbers("values");
  if (s.values.empty()) throw ConfigError(o.at("values"), "must not be empty");
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!(s.values[i] > 0.0)) throw ConfigError(o.at("values"), "values must be positive");
    if (i && !(s.values[i] > s.values[i - 1]))
      throw ConfigError(o.at("values"), "values must be strictly increasing");
    if (s.variable == SweepVariable::num_users && s.values[i] != std::floor(s.values[i]))
      throw ConfigError(o.at("values"), "user counts must be integers");
  }
  o.reject_unknown();
  out = std::move(s);
}

inline void read_analytic(ConfigObject o, AnalyticGrid& g) {
  if (o.has("points")) {
    const json& v = o.raw("points");
    const std::string path = o.at("points");
    if (!v.is_array()) throw ConfigError(path, "expected an array of {\"r\", \"mu\"}");
    for (std::size_t i = 0; i < v.size(); ++i) {
      ConfigObject p(v[i], path + "[" + std::to_string(i) + "]");
      if (!p.has("r")) throw ConfigError(p.at("r"), "required");
      if (!p.has("mu")) throw ConfigError(p.at("mu"), "required");
      const double r = p.positive("r"), mu = p.positive("mu");
      p.reject_unknown();
      g.points.emplace_back(r, mu);
    }
  }
  auto non_negative_grid = [&](const std::string& key, bool strictly_positive) {
    std::vector<double> xs = o.numbers(key);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (strictly_positive ? !(xs[i] > 0.0) : !(xs[i] >= 0.0))
        throw ConfigError(o.at(key) + "[" + std::to_string(i) + "]", "out of range");
      if (i && !(xs[i] > xs[i - 1])) throw ConfigError(o.at(key), "must be strictly increasing");
    }
    return xs;
  };
  if (o.has("ages")) g.ages = non_negative_grid("ages", false);
  if (o.has("thresholds")) g.thresholds = non_negative_grid("thresholds", true);
  if (o.has("users")) {
    const auto u = o.integer("users");
    if (u < 1 || u > 10000) throw ConfigError(o.at("users"), "must be in [1, 10000]");
    g.users = static_cast<int>(u);
  }
  o.reject_unknown();
}

inline void read_validation(ConfigObject o, ValidationSettings& v) {
  if (o.has("seed")) v.seed = o.unsigned_integer("seed");
  if (o.has("ks_deliveries")) {
    const auto n = o.integer("ks_deliveries");
    if (n < 10) throw ConfigError(o.at("ks_deliveries"), "must be >= 10");
    v.ks_deliveries = static_cast<std::size_t>(n);
  }
  if (o.has("e2e_horizon_s")) v.e2e_horizon_s = o.positive("e2e_horizon_s");
  if (o.has("excursion_horizon_s")) v.excursion_horizon_s = o.positive("excursion_horizon_s");
  if (o.has("user_counts")) v.user_counts = o.numbers("user_counts");
  if (o.has("bandwidths")) v.bandwidths = o.numbers("bandwidths");
  if (o.has("tolerances")) {
    ConfigObject t = o.child("tolerances");
    ValidationTolerances& tol = v.tol;
    auto field = [&](const char* key, double& dst) {
      if (!t.has(key)) return;
      dst = t.number(key);
      if (!(dst >= 0.0)) throw ConfigError(t.at(key), "must be non-negative");
    };
    field("normalization", tol.normalization);
    field("cdf_agreement", tol.cdf_agreement);
    field("spot_cdf", tol.spot_cdf);
    field("lcfs_at_zero", tol.lcfs_at_zero);
    field("lcfs_tail", tol.lcfs_tail);
    field("moment", tol.moment);
    field("spot_mean", tol.spot_mean);
    field("ks", tol.ks);
    field("e2e_relative", tol.e2e_relative);
    field("as_written_compute", tol.as_written_compute);
    field("worked_severity", tol.worked_severity);
    field("burke_relative", tol.burke_relative);
    field("normalization_seconds", tol.normalization_seconds);
    field("ks_case_seconds", tol.ks_case_seconds);
    t.reject_unknown();
  }
  o.reject_unknown();
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& root) {
  Config c;
  detail::ConfigObject o(root, "");
  if (!o.has("link")) throw ConfigError("link", "required");
  detail::read_link(o.child("link"), c.scenario.link, c.scenario.link_options);
  if (o.has("room")) detail::read_room(o.child("room"), c.scenario.room);
  if (o.has("users")) {
    detail::ConfigObject u = o.child("users");
    if (u.has("count")) {
      const auto n = u.integer("count");
      if (n < 0 || n > 100000) throw ConfigError(u.at("count"), "must be in [0, 100000]");
      c.scenario.num_users = static_cast<int>(n);
    }
    if (u.has("placement_seed")) c.scenario.placement_seed = u.unsigned_integer("placement_seed");
    u.reject_unknown();
  }
  if (o.has("queue")) detail::read_queue(o.child("queue"), c);
  if (o.has("analysis")) detail::read_analysis(o.child("analysis"), c);
  if (o.has("simulation")) detail::read_simulation(o.child("simulation"), c.simulation);
  if (o.has("sweep")) detail::read_sweep(o.child("sweep"), c.sweep);
  if (o.has("analytic")) detail::read_analytic(o.child("analytic"), c.analytic);
  if (o.has("validation")) detail::read_validation(o.child("validation"), c.validation);
  if (o.has("svg")) c.svg = o.boolean("svg");
  o.reject_unknown();
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  return parse_config(root);
}

}  // namespace paoi
