#pragma once

// Closed-form peak-AoI laws of capacity-2 stages (FCFS M/M/1/2 and
// LCFS-preemptive-in-waiting M/M/1/2*), their CDFs, the system CDF over U
// users, the maximum-severity-of-ruin CDF and the average-PAoI expressions.
//
// Every closed form carries (r − μ) denominators. Near r = μ the value is
// rebuilt from a second-order Taylor expansion in r around μ.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paoi/error.hpp"
#include "paoi/quadrature.hpp"

namespace paoi {

enum class Discipline { fcfs_mm12, lcfs_mm12_star };

inline std::string_view to_string(Discipline d) {
  return d == Discipline::fcfs_mm12 ? "fcfs" : "lcfs";
}

enum class Validity { valid, invalid };

inline std::string_view to_string(Validity v) { return v == Validity::valid ? "VALID" : "INVALID"; }

struct StageLaw {
  double update_rate = 1.0;   // r, Poisson arrivals of fresh updates
  double service_rate = 1.0;  // μ
  Discipline discipline = Discipline::fcfs_mm12;

  void validate() const {
    if (!(update_rate > 0.0) || !std::isfinite(update_rate))
      throw DomainError("StageLaw: update rate must be positive");
    if (!(service_rate > 0.0) || !std::isfinite(service_rate))
      throw DomainError("StageLaw: service rate must be positive");
  }

  // Probability that the stage is seen empty, μ/(r+μ).
  double empty_probability() const { return service_rate / (update_rate + service_rate); }
};

namespace detail {

// Φ_F(a): mixture of Exp(r)∗Erlang2(μ) (weight μ/(r+μ)) and Erlang3(μ).
template <std::floating_point T>
T fcfs_pdf(T r, T mu, T a) {
  const T d = r - mu;
  const T em = std::exp(-mu * a);
  const T idle = (mu / d) * (mu / d) * r * (std::exp(-r * a) - em + d * a * em);
  const T busy = T(0.5) * a * a * mu * mu * mu * em;
  return (idle * mu + busy * r) / (r + mu);
}

template <std::floating_point T>
T lcfs_pdf(T r, T mu, T a) {
  const T d = r - mu;
  const T s = r + mu;
  const T e_s = std::exp(-s * a);
  const T e_mu = std::exp(-mu * a);
  const T e_r = std::exp(-r * a);
  const T idle = (r * s * a - (2 * mu * mu * mu - r * r * r - r * r * mu) / (mu * d)) * e_s +
                 (r * mu + 2 * mu * mu) / d * e_mu -
                 (r * mu * s + r * r * r) / (mu * d) * e_r;
  const T k = mu * mu / (r * r);
  const T busy = k * e_s * (3 * mu + 2 * r + r * s * a) -
                 k * e_mu * (3 * mu + 2 * r - r * (r + 2 * mu) * a);
  return (idle * mu + busy * r) / s;
}

// 1 − φ_F(a), evaluated directly to keep precision in the far tail.
template <std::floating_point T>
T fcfs_survival(T r, T mu, T a) {
  const T d = r - mu;
  const T s = r + mu;
  const T poly = mu * mu * a * a * d * d + 2 * r * mu * d * a + 2 * (r * r - r * mu - mu * mu);
  return mu * mu * mu / (d * d * s) * std::exp(-r * a) +
         r / (2 * d * d * s) * std::exp(-mu * a) * poly;
}

template <std::floating_point T>
T fcfs_cdf(T r, T mu, T a) {
  return T(1) - fcfs_survival(r, mu, a);
}

// LCFS CDF exactly as printed; not the antiderivative of lcfs_pdf.
template <std::floating_point T>
T lcfs_cdf_as_written(T r, T mu, T a) {
  const T d = r - mu;
  const T s = r + mu;
  const T c1 = r * r * r - 3 * mu * mu * mu + r * mu * s * (1 + d);
  const T c2 = r * r + r * mu + mu * mu;
  const T c3 = 3 * mu * mu * mu + r * d * d + r * mu * a * (r * r + r * mu - 2 * mu * mu);
  return 1 - std::exp(-s * a) / (r * s * d) * c1 + std::exp(-r * a) / (s * d) * c2 -
         std::exp(-mu * a) / (r * s * d) * c3;
}

// Within the singular band the closed form is replaced by its Taylor
// expansion. Outside it, but still close to r = μ, the closed form is
// evaluated in extended precision: its pole terms cancel to O((r−μ)²).
inline constexpr double singular_band = 1e-4;   // relative |r − μ|/μ
inline constexpr double extended_band = 1e-2;
inline constexpr double series_step = 1e-3;     // relative sampling offset

// Evaluates g(r) for |r − μ| inside the singular band through
// g(μ+δ) ≈ c0 + c1·δ + c2·δ², with the coefficients taken from
// Richardson-extrapolated central differences at μ(1 ± h), μ(1 ± 2h).
template <class G>
double near_singular(G&& g, double r, double mu) {
  using X = long double;
  const X m = mu;
  const X h = static_cast<X>(series_step) * m;
  const X fp1 = g(m + h), fm1 = g(m - h);
  const X fp2 = g(m + 2 * h), fm2 = g(m - 2 * h);
  const X even1 = (fp1 + fm1) / 2, even2 = (fp2 + fm2) / 2;
  const X c0 = (4 * even1 - even2) / 3;
  const X c1 = (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h);
  const X c2 = (even2 - even1) / (3 * h * h);
  const X delta = static_cast<X>(r) - m;
  return static_cast<double>(c0 + c1 * delta + c2 * delta * delta);
}

// kernel must accept (r, μ, a) as double and as long double.
template <class Kernel>
double regularized(Kernel&& kernel, double r, double mu, double a) {
  const double gap = std::abs(r - mu);
  if (gap < singular_band * mu) {
    const long double ax = a, mx = mu;
    return near_singular([&](long double rr) { return kernel(rr, mx, ax); }, r, mu);
  }
  if (gap < extended_band * mu)
    return static_cast<double>(
        kernel(static_cast<long double>(r), static_cast<long double>(mu), static_cast<long double>(a)));
  return kernel(r, mu, a);
}

inline constexpr auto fcfs_pdf_kernel = [](auto r, auto mu, auto a) { return fcfs_pdf(r, mu, a); };
inline constexpr auto lcfs_pdf_kernel = [](auto r, auto mu, auto a) { return lcfs_pdf(r, mu, a); };
inline constexpr auto fcfs_cdf_kernel = [](auto r, auto mu, auto a) { return fcfs_cdf(r, mu, a); };
inline constexpr auto fcfs_survival_kernel = [](auto r, auto mu, auto a) {
  return fcfs_survival(r, mu, a);
};
inline constexpr auto lcfs_cdf_kernel = [](auto r, auto mu, auto a) {
  return lcfs_cdf_as_written(r, mu, a);
};

inline void require_age(double a, const char* op) {
  if (!(a >= 0.0)) throw DomainError(std::string(op) + ": age must be non-negative");
}

inline Validity probability_validity(double v) {
  constexpr double slack = 1e-12;
  return (std::isfinite(v) && v >= -slack && v <= 1.0 + slack) ? Validity::valid
                                                                : Validity::invalid;
}

}  // namespace detail

inline double pdf_paoi(const StageLaw& law, double a) {
  law.validate();
  detail::require_age(a, "pdf_paoi");
  const double r = law.update_rate, mu = law.service_rate;
  if (law.discipline == Discipline::fcfs_mm12)
    return detail::regularized(detail::fcfs_pdf_kernel, r, mu, a);
  return detail::regularized(detail::lcfs_pdf_kernel, r, mu, a);
}

// Smallest doubling of 1/min(r, μ) where the FCFS tail mass is below 1e-12.
inline double integration_horizon(const StageLaw& law) {
  law.validate();
  const double r = law.update_rate, mu = law.service_rate;
  double horizon = 1.0 / std::min(r, mu);
  for (int i = 0; i < 64; ++i, horizon *= 2.0) {
    if (detail::regularized(detail::fcfs_survival_kernel, r, mu, horizon) < 1e-12) break;
  }
  return horizon;
}

enum class CdfSource { closed_form, quadrature };

inline std::string_view to_string(CdfSource s) {
  return s == CdfSource::closed_form ? "closed-form" : "quadrature";
}

// Canonical CDF route per discipline: FCFS closed form is exact; the printed
// LCFS closed form violates the CDF axioms, so LCFS goes through quadrature.
inline CdfSource canonical_source(Discipline d) {
  return d == Discipline::fcfs_mm12 ? CdfSource::closed_form : CdfSource::quadrature;
}

struct CdfValue {
  double value = 0.0;
  Validity validity = Validity::valid;
};

inline CdfValue cdf_paoi(const StageLaw& law, double a, CdfSource source) {
  law.validate();
  detail::require_age(a, "cdf_paoi");
  const double r = law.update_rate, mu = law.service_rate;
  double value = 0.0;
  if (source == CdfSource::closed_form) {
    value = law.discipline == Discipline::fcfs_mm12
                ? detail::regularized(detail::fcfs_cdf_kernel, r, mu, a)
                : detail::regularized(detail::lcfs_cdf_kernel, r, mu, a);
  } else {
    value = quadrature::integrate([&](double x) { return pdf_paoi(law, x); }, 0.0, a).value;
  }
  return {value, detail::probability_validity(value)};
}

// Quadrature CDF at every point of a non-decreasing grid, integrating only the
// gaps between consecutive points.
inline std::vector<double> cdf_paoi_quadrature(const StageLaw& law,
                                               std::span<const double> sorted_points) {
  law.validate();
  std::vector<double> out;
  out.reserve(sorted_points.size());
  double acc = 0.0, prev = 0.0;
  quadrature::Tolerance tol;
  tol.absolute = 1e-11;
  for (double x : sorted_points) {
    detail::require_age(x, "cdf_paoi_quadrature");
    if (x < prev) throw DomainError("cdf_paoi_quadrature: grid must be non-decreasing");
    if (x > prev)
      acc += quadrature::integrate([&](double t) { return pdf_paoi(law, t); }, prev, x, tol).value;
    prev = x;
    out.push_back(acc);
  }
  return out;
}

inline double avg_paoi_stage(const StageLaw& law) {
  law.validate();
  const double r = law.update_rate, mu = law.service_rate;
  if (law.discipline == Discipline::fcfs_mm12) return 1.0 / r + 3.0 / mu - 2.0 / (r + mu);
  return 1.0 / r + 1.0 / mu + r / ((r + mu) * (r + mu)) + r / (mu * (r + mu));
}

// ---------------------------------------------------------------------------
// System of U stages

enum class ExponentMode { homogeneous_power, heterogeneous_product };

struct SystemLaw {
  std::vector<StageLaw> stages;
  ExponentMode exponent_mode = ExponentMode::heterogeneous_product;
};

// Ψ(a): φ₁(a)^U (i.i.d. users) or Π_u φ_u(a). Invalid if any factor is.
inline CdfValue system_cdf(const SystemLaw& sys, double a,
                           std::optional<CdfSource> source = std::nullopt) {
  if (sys.stages.empty()) throw DomainError("system_cdf: at least one stage required");
  auto stage_cdf = [&](const StageLaw& s) {
    return cdf_paoi(s, a, source.value_or(canonical_source(s.discipline)));
  };
  CdfValue out{1.0, Validity::valid};
  if (sys.exponent_mode == ExponentMode::homogeneous_power) {
    const CdfValue phi = stage_cdf(sys.stages.front());
    out.value = std::pow(phi.value, static_cast<double>(sys.stages.size()));
    out.validity = phi.validity;
  } else {
    for (const auto& s : sys.stages) {
      const CdfValue phi = stage_cdf(s);
      out.value *= phi.value;
      if (phi.validity == Validity::invalid) out.validity = Validity::invalid;
    }
  }
  if (detail::probability_validity(out.value) == Validity::invalid) out.validity = Validity::invalid;
  return out;
}

// ---------------------------------------------------------------------------
// Maximum severity of ruin

enum class PsiMode { as_written_cdf, survival };

inline std::string_view to_string(PsiMode m) {
  return m == PsiMode::as_written_cdf ? "as-written" : "survival";
}

struct SeverityQuery {
  double ruin_level = 1.0;  // a
  double threshold = 1.0;   // z
  PsiMode psi_mode = PsiMode::survival;

  void validate() const {
    if (!(ruin_level > 0.0)) throw DomainError("SeverityQuery: ruin level must be positive");
    if (!(threshold > 0.0)) throw DomainError("SeverityQuery: threshold must be positive");
  }
};

// Empty value means the ratio is undefined (Ψ(a) = 0 or Ψ(z) = 1).
struct SeverityResult {
  std::optional<double> value;
  Validity validity = Validity::invalid;

  bool computable() const { return value.has_value(); }
};

// J(z) = [Ψ(a) − Ψ(a+z)] / [Ψ(a)·(1 − Ψ(z))] for any callable Ψ. The value
// is returned verbatim; it is flagged, never clamped.
template <class Psi>
SeverityResult severity_from_psi(Psi&& psi, double a, double z) {
  const double psi_a = psi(a);
  const double psi_az = psi(a + z);
  const double psi_z = psi(z);
  const double denom = psi_a * (1.0 - psi_z);
  SeverityResult out;
  if (psi_a == 0.0 || denom == 0.0 || !std::isfinite(denom)) return out;
  const double j = (psi_a - psi_az) / denom;
  if (!std::isfinite(j)) return out;
  out.value = j;
  out.validity = detail::probability_validity(j);
  return out;
}

inline SeverityResult severity_cdf(const SystemLaw& sys, const SeverityQuery& q,
                                   std::optional<CdfSource> source = std::nullopt) {
  q.validate();
  bool upstream_invalid = false;
  auto psi = [&](double x) {
    const CdfValue c = system_cdf(sys, x, source);
    if (c.validity == Validity::invalid) upstream_invalid = true;
    return q.psi_mode == PsiMode::as_written_cdf ? c.value : 1.0 - c.value;
  };
  SeverityResult out = severity_from_psi(psi, q.ruin_level, q.threshold);
  if (upstream_invalid) out.validity = Validity::invalid;
  return out;
}

// Severity over a strictly increasing z grid. A CDF must be non-decreasing in
// z; any decrease between computable neighbours marks the whole curve invalid.
inline std::vector<SeverityResult> severity_curve(const SystemLaw& sys, double ruin_level,
                                                  std::span<const double> z_grid, PsiMode mode,
                                                  std::optional<CdfSource> source = std::nullopt) {
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    if (!(z_grid[i] > z_grid[i - 1])) throw DomainError("severity_curve: z grid must increase");
  std::vector<SeverityResult> out;
  out.reserve(z_grid.size());
  for (double z : z_grid) out.push_back(severity_cdf(sys, {ruin_level, z, mode}, source));
  std::optional<double> last;
  bool monotone = true;
  for (const auto& s : out) {
    if (!s.value) continue;
    if (last && *s.value < *last) monotone = false;
    last = s.value;
  }
  if (!monotone)
    for (auto& s : out) s.validity = Validity::invalid;
  return out;
}

// ---------------------------------------------------------------------------
// Average PAoI

enum class ComputeFormula { as_written, corrected };

inline std::string_view to_string(ComputeFormula f) {
  return f == ComputeFormula::as_written ? "as-written" : "corrected";
}

struct ComputeQueueLaw {
  double arrival_rate = 1.0;  // λ_C
  double service_rate = 2.0;  // μ_C
  ComputeFormula formula = ComputeFormula::corrected;

  double utilization() const { return arrival_rate / service_rate; }
};

struct ComputeAverage {
  double value = 0.0;
  // The printed λ_C(μ_C + μ_C²)/(2(1−ρ_C)) term has units of rate², not time.
  bool dimensional_anomaly = false;
};

inline ComputeAverage avg_paoi_compute(const ComputeQueueLaw& law) {
  const double lambda = law.arrival_rate, mu = law.service_rate;
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw DomainError("avg_paoi_compute: rates must be positive");
  const double rho = lambda / mu;
  if (law.formula == ComputeFormula::corrected) {
    if (rho >= 1.0)
      throw InstabilityError("avg_paoi_compute: compute queue utilization " +
                             std::to_string(rho) + " >= 1");
    // mean inter-arrival time + mean M/M/1 sojourn
    return {1.0 / lambda + 1.0 / (mu - lambda), false};
  }
  const double value = 1.0 / lambda + 1.0 / mu + lambda * (mu + mu * mu) / (2.0 * (1.0 - rho));
  if (!std::isfinite(value)) throw DomainError("avg_paoi_compute: as-written value not finite");
  return {value, true};
}

enum class ArrivalRateMode { sum_of_service_rates, effective_throughput };

// Departure rate of one capacity-2 stage: μ·P(busy) = μ(ρ+ρ²)/(1+ρ+ρ²).
inline double stage_throughput(const StageLaw& law) {
  law.validate();
  const double rho = law.update_rate / law.service_rate;
  return law.service_rate * (rho + rho * rho) / (1.0 + rho + rho * rho);
}

inline double compute_arrival_rate(std::span<const StageLaw> stages, ArrivalRateMode mode) {
  double total = 0.0;
  for (const auto& s : stages)
    total += mode == ArrivalRateMode::sum_of_service_rates ? s.service_rate : stage_throughput(s);
  return total;
}

// Â = Â_c + Σ_u (stage term of user u).
inline double avg_paoi_e2e(const SystemLaw& sys, const ComputeQueueLaw& comp) {
  double total = avg_paoi_compute(comp).value;
  for (const auto& s : sys.stages) total += avg_paoi_stage(s);
  return total;
}

}  // namespace paoi
