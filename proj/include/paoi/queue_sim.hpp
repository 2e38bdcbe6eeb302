#pragma once

// Event-driven simulator of the two-stage network: one capacity-2 stage per
// user (FCFS M/M/1/2 or LCFS M/M/1/2*) feeding a shared FCFS M/M/1 compute
// queue. Peak AoI is recorded at three observation points:
//   stage1  - stage output, per user (freshness of the RIS hop)
//   e2e     - compute output, per user, stamped with the user's generation time
//   compute - compute output, each request stamped with its compute arrival
//
// While a stage is full the user's arrival clock is suspended. Arrivals during
// the blocked period cannot change the state except for the LCFS waiting slot,
// so at the next service completion their count is drawn from the Poisson law
// and, for LCFS, the surviving packet's timestamp from the backward
// exponential gap. The sample path law is the same as the naive simulation.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "paoi/aoi_analytic.hpp"
#include "paoi/error.hpp"
#include "paoi/parallel.hpp"
#include "paoi/rng.hpp"

namespace paoi {

enum class ComputeFeed { tandem, independent_poisson };

inline std::string_view to_string(ComputeFeed f) {
  return f == ComputeFeed::tandem ? "tandem" : "independent";
}

enum class Stage { stage1, e2e, compute };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::stage1: return "stage1";
    case Stage::e2e: return "e2e";
    case Stage::compute: return "compute";
  }
  return "?";
}

struct QueueConfig {
  Discipline discipline = Discipline::fcfs_mm12;
  double stage_service_rate = 5.0;      // μ_u, same for every user
  double compute_service_rate = 100.0;  // μ_C
  ComputeFeed feed = ComputeFeed::tandem;
  double warmup_fraction = 0.01;

  static constexpr int stage_capacity = 2;  // one in service + one waiting

  void validate() const {
    if (!(stage_service_rate > 0.0)) throw DomainError("QueueConfig: stage service rate must be positive");
    if (!(compute_service_rate > 0.0))
      throw DomainError("QueueConfig: compute service rate must be positive");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
      throw DomainError("QueueConfig: warm-up fraction must lie in [0, 1)");
  }
};

struct Packet {
  std::size_t user = 0;
  double generation_time = 0.0;
  std::optional<double> stage_departure_time;
  std::optional<double> delivery_time;
};

// One delivery seen at an observation point: the age just before it (peak)
// and just after it (reset, the delivered packet's age).
struct PaoiSample {
  double time = 0.0;
  double peak = 0.0;
  double reset = 0.0;
};

struct UserCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t stage_deliveries = 0;
  std::uint64_t drops = 0;
  std::uint64_t preemptions = 0;
  std::uint64_t in_system = 0;  // at the horizon
  int max_occupancy = 0;
};

struct PaoiSamples {
  std::vector<std::vector<PaoiSample>> stage1;  // per user
  std::vector<std::vector<PaoiSample>> e2e;     // per user, empty unless tandem
  std::vector<PaoiSample> compute;
  std::vector<UserCounters> counters;
  double window_start = 0.0;
  double window_end = 0.0;
  std::uint64_t compute_arrivals = 0;  // inside the window

  std::size_t users() const { return stage1.size(); }

  std::span<const PaoiSample> series(std::size_t user, Stage stage) const {
    switch (stage) {
      case Stage::stage1: return stage1.at(user);
      case Stage::e2e: return e2e.at(user);
      case Stage::compute: return compute;
    }
    return {};
  }

  double measured_compute_arrival_rate() const {
    const double span = window_end - window_start;
    return span > 0.0 ? static_cast<double>(compute_arrivals) / span : 0.0;
  }

  std::uint64_t total_drops() const {
    return std::accumulate(counters.begin(), counters.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const UserCounters& c) { return acc + c.drops; });
  }

  std::uint64_t total_preemptions() const {
    return std::accumulate(
        counters.begin(), counters.end(), std::uint64_t{0},
        [](std::uint64_t acc, const UserCounters& c) { return acc + c.preemptions; });
  }
};

namespace detail {

class TandemSimulator {
 public:
  TandemSimulator(const QueueConfig& config, std::span<const double> rates, double horizon,
                  std::uint64_t seed)
      : config_(config), rates_(rates.begin(), rates.end()), horizon_(horizon),
        compute_rng_(make_stream(seed, streams::compute_service)),
        feed_rng_(make_stream(seed, streams::compute_feed)) {
    const std::size_t n = rates_.size();
    users_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      users_[u].arrival_rng = make_stream(seed, streams::user_arrivals(u));
      users_[u].service_rng = make_stream(seed, streams::stage_service(u));
    }
    out_.stage1.resize(n);
    out_.e2e.resize(n);
    out_.counters.resize(n);
    out_.window_start = config_.warmup_fraction * horizon_;
    out_.window_end = horizon_;
  }

  PaoiSamples run() {
    for (std::size_t u = 0; u < users_.size(); ++u)
      schedule(exp_draw(users_[u].arrival_rng, rates_[u]), EventKind::arrival, u);
    if (config_.feed == ComputeFeed::independent_poisson)
      schedule(exp_draw(feed_rng_, feed_rate()), EventKind::external_arrival, 0);

    while (!events_.empty() && events_.top().time <= horizon_) {
      const Event ev = events_.top();
      events_.pop();
      switch (ev.kind) {
        case EventKind::arrival: on_arrival(ev.time, ev.user); break;
        case EventKind::stage_done: on_stage_done(ev.time, ev.user); break;
        case EventKind::compute_done: on_compute_done(ev.time); break;
        case EventKind::external_arrival: on_external_arrival(ev.time); break;
      }
    }
    for (std::size_t u = 0; u < users_.size(); ++u) {
      UserState& s = users_[u];
      if (s.waiting) resolve_blocked_period(u, horizon_);
      out_.counters[u].in_system = (s.in_service ? 1 : 0) + (s.waiting ? 1 : 0);
    }
    return std::move(out_);
  }

 private:
  enum class EventKind { arrival, stage_done, compute_done, external_arrival };

  struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::size_t user;
    // min-heap on (time, seq)
    bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
  };

  struct UserState {
    Engine arrival_rng;
    Engine service_rng;
    std::optional<double> in_service;  // generation times
    std::optional<double> waiting;
    double full_since = 0.0;
    std::optional<double> last_stage_gen;
    std::optional<double> last_e2e_gen;
  };

  struct ComputeJob {
    std::size_t user;
    double generation_time;
    double arrival_time;
  };

  static double exp_draw(Engine& rng, double rate) {
    return std::exponential_distribution<double>(rate)(rng);
  }

  static std::uint64_t poisson_draw(Engine& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(rng);
  }

  double feed_rate() const { return config_.stage_service_rate * static_cast<double>(rates_.size()); }

  bool in_window(double t) const { return t >= out_.window_start; }

  void schedule(double time, EventKind kind, std::size_t user) {
    events_.push(Event{time, next_seq_++, kind, user});
  }

  void on_arrival(double t, std::size_t u) {
    UserState& s = users_[u];
    UserCounters& c = out_.counters[u];
    ++c.arrivals;
    if (!s.in_service) {
      s.in_service = t;
      schedule(t + exp_draw(s.service_rng, config_.stage_service_rate), EventKind::stage_done, u);
      schedule(t + exp_draw(s.arrival_rng, rates_[u]), EventKind::arrival, u);
      c.max_occupancy = std::max(c.max_occupancy, 1);
    } else {
      // Stage becomes full; the arrival clock stays suspended until the
      // in-service packet leaves.
      s.waiting = t;
      s.full_since = t;
      c.max_occupancy = std::max(c.max_occupancy, 2);
    }
  }

  // Arrivals that hit a full stage during (full_since, t].
  void resolve_blocked_period(std::size_t u, double t) {
    UserState& s = users_[u];
    UserCounters& c = out_.counters[u];
    const double r = rates_[u];
    const double blocked = t - s.full_since;
    if (config_.discipline == Discipline::fcfs_mm12) {
      const std::uint64_t k = poisson_draw(s.arrival_rng, r * blocked);
      c.arrivals += k;
      c.drops += k;
    } else {
      const double gap = exp_draw(s.arrival_rng, r);
      if (gap < blocked) {
        // Each blocked-period arrival replaces the waiting packet.
        const std::uint64_t k = 1 + poisson_draw(s.arrival_rng, r * (blocked - gap));
        s.waiting = t - gap;
        c.arrivals += k;
        c.preemptions += k;
      }
    }
    s.full_since = t;
  }

  void on_stage_done(double t, std::size_t u) {
    UserState& s = users_[u];
    UserCounters& c = out_.counters[u];
    if (s.waiting) {
      resolve_blocked_period(u, t);
      schedule(t + exp_draw(s.arrival_rng, rates_[u]), EventKind::arrival, u);
    }
    const double gen = *s.in_service;
    ++c.stage_deliveries;
    if (s.last_stage_gen && in_window(t))
      out_.stage1[u].push_back({t, t - *s.last_stage_gen, t - gen});
    s.last_stage_gen = gen;

    s.in_service = s.waiting;
    s.waiting.reset();
    if (s.in_service)
      schedule(t + exp_draw(s.service_rng, config_.stage_service_rate), EventKind::stage_done, u);

    if (config_.feed == ComputeFeed::tandem) enqueue_compute({u, gen, t});
  }

  void on_external_arrival(double t) {
    enqueue_compute({std::numeric_limits<std::size_t>::max(), t, t});
    schedule(t + exp_draw(feed_rng_, feed_rate()), EventKind::external_arrival, 0);
  }

  void enqueue_compute(const ComputeJob& job) {
    if (in_window(job.arrival_time)) ++out_.compute_arrivals;
    compute_queue_.push_back(job);
    if (compute_queue_.size() == 1)
      schedule(job.arrival_time + exp_draw(compute_rng_, config_.compute_service_rate),
               EventKind::compute_done, 0);
  }

  void on_compute_done(double t) {
    const ComputeJob job = compute_queue_.front();
    compute_queue_.pop_front();
    if (last_compute_arrival_ && in_window(t))
      out_.compute.push_back({t, t - *last_compute_arrival_, t - job.arrival_time});
    last_compute_arrival_ = job.arrival_time;

    if (job.user < users_.size()) {
      UserState& s = users_[job.user];
      if (s.last_e2e_gen && in_window(t))
        out_.e2e[job.user].push_back({t, t - *s.last_e2e_gen, t - job.generation_time});
      s.last_e2e_gen = job.generation_time;
    }
    if (!compute_queue_.empty())
      schedule(t + exp_draw(compute_rng_, config_.compute_service_rate), EventKind::compute_done, 0);
  }

  QueueConfig config_;
  std::vector<double> rates_;
  double horizon_;
  Engine compute_rng_;
  Engine feed_rng_;
  std::vector<UserState> users_;
  std::deque<ComputeJob> compute_queue_;
  std::optional<double> last_compute_arrival_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t next_seq_ = 0;
  PaoiSamples out_;
};

}  // namespace detail

// Runs one replication. Output is a pure function of the arguments.
inline PaoiSamples run(const QueueConfig& config, std::span<const double> per_user_rates,
                       double horizon, std::uint64_t seed) {
  config.validate();
  if (per_user_rates.empty()) throw DomainError("run: at least one user required");
  if (!(horizon > 0.0)) throw DomainError("run: horizon must be positive");
  for (double r : per_user_rates)
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("run: update rates must be positive");
  return detail::TandemSimulator(config, per_user_rates, horizon, seed).run();
}

// Independent replications, seeds derived from the master seed; evaluated in
// parallel and returned in replication order.
inline std::vector<PaoiSamples> run_replications(const QueueConfig& config,
                                                 std::span<const double> per_user_rates,
                                                 double horizon, std::uint64_t master_seed,
                                                 int replications) {
  if (replications < 1) throw DomainError("run_replications: need at least one replication");
  return parallel_map(static_cast<std::size_t>(replications), [&](std::size_t k) {
    return run(config, per_user_rates, horizon, derive_seed(master_seed, k));
  });
}

}  // namespace paoi
