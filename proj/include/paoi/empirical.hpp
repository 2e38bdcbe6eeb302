#pragma once

// Estimators over simulator output: empirical CDF, KS distance, excursion
// severity of the AoI sawtooth and batch-means averages.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "paoi/error.hpp"
#include "paoi/queue_sim.hpp"

namespace paoi {

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw InsufficientData("EmpiricalCdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
  }

  // Right-continuous: F(x) = #{samples ≤ x} / n.
  double operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  std::span<const double> sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

inline std::vector<double> peaks(std::span<const PaoiSample> series) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(s.peak);
  return out;
}

inline EmpiricalCdf empirical_cdf(const PaoiSamples& samples, std::size_t user, Stage stage) {
  return EmpiricalCdf(peaks(samples.series(user, stage)));
}

// sup |F_n − F| with F already evaluated at the sorted sample points.
inline double ks_distance(const EmpiricalCdf& emp, std::span<const double> cdf_at_sorted) {
  const auto xs = emp.sorted();
  if (cdf_at_sorted.size() != xs.size())
    throw DomainError("ks_distance: one CDF value per sample required");
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // ties: the step at x jumps to the last index with the same value
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
    const double f = cdf_at_sorted[i];
    d = std::max({d, std::abs(static_cast<double>(j + 1) / n - f),
                  std::abs(f - static_cast<double>(i) / n)});
    i = j;
  }
  return d;
}

template <std::invocable<double> Cdf>
double ks_distance(const EmpiricalCdf& emp, Cdf&& cdf) {
  std::vector<double> values;
  values.reserve(emp.size());
  for (double x : emp.sorted()) values.push_back(cdf(x));
  return ks_distance(emp, values);
}

// ---------------------------------------------------------------------------
// Excursions above a ruin level

struct ExcursionStats {
  double ruin_level = 0.0;
  std::vector<double> exceedances;

  bool empty() const { return exceedances.empty(); }

  // Fraction of excursions whose maximum exceedance is at most z.
  double cdf(double z) const {
    if (exceedances.empty()) throw InsufficientData("ExcursionStats: no excursions");
    const auto k = std::count_if(exceedances.begin(), exceedances.end(),
                                 [z](double e) { return e <= z; });
    return static_cast<double>(k) / static_cast<double>(exceedances.size());
  }
};

// AoI rises with unit slope from each reset to the next peak, so an excursion
// above a ends at the first delivery that resets the age to ≤ a. An excursion
// still open at the last delivery is discarded.
inline ExcursionStats excursion_severity(std::span<const PaoiSample> trace, double a) {
  if (!(a > 0.0)) throw DomainError("excursion_severity: ruin level must be positive");
  ExcursionStats out;
  out.ruin_level = a;
  bool open = false;
  double worst = 0.0;
  for (const auto& s : trace) {
    if (s.peak > a) {
      worst = open ? std::max(worst, s.peak) : s.peak;
      open = true;
    }
    if (open && s.reset <= a) {
      out.exceedances.push_back(worst - a);
      open = false;
    }
  }
  return out;
}

// Worst AoI over all users, t − min_u G_u(t), as a sawtooth. A point is emitted
// at each delivery that moves the minimum; the trace starts once every user has
// delivered.
inline std::vector<PaoiSample> system_trace(const PaoiSamples& samples, Stage stage) {
  struct Delivery {
    double time;
    std::size_t user;
    double generation;
  };
  const std::size_t n = stage == Stage::compute ? 1 : samples.users();
  std::vector<Delivery> all;
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& s : samples.series(u, stage)) all.push_back({s.time, u, s.time - s.reset});
  std::stable_sort(all.begin(), all.end(),
                   [](const Delivery& x, const Delivery& y) { return x.time < y.time; });

  constexpr double unset = -std::numeric_limits<double>::infinity();
  std::vector<double> gen(n, unset);
  std::size_t seen = 0;
  std::vector<PaoiSample> out;
  for (const auto& d : all) {
    const double before = *std::min_element(gen.begin(), gen.end());
    if (gen[d.user] == unset) ++seen;
    gen[d.user] = std::max(gen[d.user], d.generation);
    const double after = *std::min_element(gen.begin(), gen.end());
    if (seen < n || before == unset || after == before) continue;
    out.push_back({d.time, d.time - before, d.time - after});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Averages

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95 %
  std::size_t count = 0;
};

inline constexpr std::size_t default_batches = 20;

// Sample mean with a batch-means confidence half-width. Fewer samples than
// 2·batches fall back to one observation per batch.
inline Estimate estimate_avg(std::span<const double> values, std::size_t batches = default_batches) {
  if (values.size() < 2) throw InsufficientData("estimate_avg: at least 2 samples required");
  if (batches < 2) throw DomainError("estimate_avg: at least 2 batches required");
  const std::size_t n = values.size();
  const std::size_t k = n >= 2 * batches ? batches : n;
  const std::size_t size = n / k;
  std::vector<double> means(k, 0.0);
  for (std::size_t b = 0; b < k; ++b) {
    double s = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += values[i];
    means[b] = s / static_cast<double>(size);
  }
  Estimate out;
  out.count = n;
  double total = 0.0;
  for (double v : values) total += v;
  out.mean = total / static_cast<double>(n);

  double bm = 0.0;
  for (double m : means) bm += m;
  bm /= static_cast<double>(k);
  double ss = 0.0;
  for (double m : means) ss += (m - bm) * (m - bm);
  const double sd = std::sqrt(ss / static_cast<double>(k - 1));
  const boost::math::students_t dist(static_cast<double>(k - 1));
  out.half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(k));
  return out;
}

inline Estimate estimate_avg(const PaoiSamples& samples, std::size_t user, Stage stage) {
  return estimate_avg(peaks(samples.series(user, stage)));
}

// DES counterpart of avg_paoi_e2e: mean compute-queue PAoI plus the sum of the
// per-user stage means; independent half-widths combined in quadrature.
inline Estimate estimate_e2e_composite(const PaoiSamples& samples) {
  Estimate out = estimate_avg(peaks(samples.compute));
  double var = out.half_width * out.half_width;
  for (std::size_t u = 0; u < samples.users(); ++u) {
    const Estimate e = estimate_avg(samples, u, Stage::stage1);
    out.mean += e.mean;
    var += e.half_width * e.half_width;
    out.count += e.count;
  }
  out.half_width = std::sqrt(var);
  return out;
}

// Replication means pooled as i.i.d. observations (Student-t over replications).
inline Estimate pool_replications(std::span<const double> means) {
  if (means.empty()) throw InsufficientData("pool_replications: no replications");
  Estimate out;
  out.count = means.size();
  for (double m : means) out.mean += m;
  out.mean /= static_cast<double>(means.size());
  if (means.size() < 2) return out;
  double ss = 0.0;
  for (double m : means) ss += (m - out.mean) * (m - out.mean);
  const double k = static_cast<double>(means.size());
  const boost::math::students_t dist(k - 1.0);
  out.half_width = boost::math::quantile(dist, 0.975) * std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  return out;
}

}  // namespace paoi
