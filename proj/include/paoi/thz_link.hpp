#pragma once

// THz uplink budget for an RIS acting as base station: LoS path gain with
// molecular absorption, thermal noise plus RIS leakage, Shannon rate and the
// resulting AR update rate for a fixed image size.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "paoi/constants.hpp"
#include "paoi/error.hpp"

namespace paoi {

struct LinkParams {
  double bandwidth_hz = 10e9;
  double carrier_hz = 1e12;
  double tx_power_w = 1.0;
  double absorption_per_m = 0.0016;
  double temperature_k = 300.0;
  int meta_surfaces = 0;  // no default operating point; must be configured
  double image_size_bits = 10e6;

  double wavelength() const { return constants::speed_of_light / carrier_hz; }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string("LinkParams.") + name + " must be positive");
    };
    positive(bandwidth_hz, "bandwidth_hz");
    positive(carrier_hz, "carrier_hz");
    positive(tx_power_w, "tx_power_w");
    positive(absorption_per_m, "absorption_per_m");
    positive(temperature_k, "temperature_k");
    positive(image_size_bits, "image_size_bits");
    if (meta_surfaces < 1) throw DomainError("LinkParams.meta_surfaces must be >= 1");
  }
};

// Switches for the two places where the as-written model and the conventional
// one disagree.
struct LinkOptions {
  // Count the serving RIS in the interference sum (as written).
  bool include_serving_ris = true;
  // Replace N0 = (W·λ²/4π)·kB·T0 with the textbook kB·T0·W.
  bool conventional_noise = false;
};

// Distances from one user to every RIS, with the serving one singled out.
class LinkGeometry {
 public:
  LinkGeometry(std::vector<double> ris_distances, std::size_t serving_index)
      : distances_(std::move(ris_distances)), serving_(serving_index) {
    if (distances_.empty()) throw DomainError("LinkGeometry: empty RIS distance list");
    if (serving_ >= distances_.size())
      throw DomainError("LinkGeometry: serving index out of range");
    for (double d : distances_)
      if (!(d > 0.0)) throw DomainError("LinkGeometry: distances must be positive");
  }

  double serving_distance() const { return distances_[serving_]; }
  std::size_t serving_index() const { return serving_; }
  std::span<const double> ris_distances() const { return distances_; }

 private:
  std::vector<double> distances_;
  std::size_t serving_;
};

// (λ/(4πd))² · e^{−2kd}
inline double channel_gain(double distance_m, const LinkParams& params) {
  if (!(distance_m > 0.0)) throw DomainError("channel_gain: distance must be positive");
  const double spread = params.wavelength() / (4.0 * constants::pi * distance_m);
  return spread * spread * std::exp(-2.0 * params.absorption_per_m * distance_m);
}

inline double thermal_noise(const LinkParams& params, const LinkOptions& options = {}) {
  const double kt = constants::boltzmann * params.temperature_k;
  if (options.conventional_noise) return kt * params.bandwidth_hz;
  const double lambda = params.wavelength();
  return params.bandwidth_hz * lambda * lambda / (4.0 * constants::pi) * kt;
}

// N0 + Σ_b p·A0·d_b⁻²·(1 − e^{−K·d_b}), A0 = c²/(16π²f²).
inline double noise_plus_interference(const LinkGeometry& geom, const LinkParams& params,
                                      const LinkOptions& options = {}) {
  const double f = params.carrier_hz;
  const double a0 = constants::speed_of_light * constants::speed_of_light /
                    (16.0 * constants::pi * constants::pi * f * f);
  double leak = 0.0;
  const auto distances = geom.ris_distances();
  for (std::size_t b = 0; b < distances.size(); ++b) {
    if (!options.include_serving_ris && b == geom.serving_index()) continue;
    const double d = distances[b];
    leak += params.tx_power_w * a0 / (d * d) * -std::expm1(-params.absorption_per_m * d);
  }
  return thermal_noise(params, options) + leak;
}

// |Σ_n e^{jΔ_n}|² for explicit phase mismatches Δ_n = θ_n − ψ_n.
inline double ris_array_gain(std::span<const double> phase_offsets) {
  if (phase_offsets.empty()) throw DomainError("ris_array_gain: need at least one element");
  std::complex<double> sum{};
  for (double delta : phase_offsets) sum += std::polar(1.0, delta);
  return std::norm(sum);
}

// Perfect alignment θ = ψ gives the coherent gain N².
inline double ris_array_gain(int elements) {
  if (elements < 1) throw DomainError("ris_array_gain: need at least one element");
  const double n = elements;
  return n * n;
}

inline double shannon_rate(double bandwidth_hz, double snr) {
  if (snr < 0.0) throw DomainError("shannon_rate: negative SNR");
  return bandwidth_hz * std::log1p(snr) / std::numbers::ln2;
}

inline double snr(const LinkGeometry& geom, const LinkParams& params,
                  const LinkOptions& options = {}) {
  params.validate();
  const double signal = params.tx_power_w * channel_gain(geom.serving_distance(), params) *
                        ris_array_gain(params.meta_surfaces);
  return signal / noise_plus_interference(geom, params, options);
}

// W·log2(1 + p·h·N²/N(d,p,f)), flat across the band.
inline double rate_bps(const LinkGeometry& geom, const LinkParams& params,
                       const LinkOptions& options = {}) {
  return shannon_rate(params.bandwidth_hz, snr(geom, params, options));
}

// Images per second: r = R / M.
inline double update_rate(double rate_bps, const LinkParams& params) {
  if (rate_bps < 0.0) throw DomainError("update_rate: negative rate");
  if (!(params.image_size_bits > 0.0)) throw DomainError("update_rate: image size must be positive");
  return rate_bps / params.image_size_bits;
}

}  // namespace paoi
