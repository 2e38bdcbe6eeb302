#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "paoi/thz_link.hpp"

using namespace paoi;

namespace {

LinkParams section_four_params() {
  LinkParams p;
  p.bandwidth_hz = 10e9;
  p.carrier_hz = 1e12;
  p.tx_power_w = 1.0;
  p.absorption_per_m = 0.0016;
  p.temperature_k = 300.0;
  p.meta_surfaces = 100;
  p.image_size_bits = 10e6;
  return p;
}

LinkGeometry four_at(double d) { return LinkGeometry({d, d, d, d}, 0); }

}  // namespace

TEST(ChannelGain, UnityAtReferenceDistanceWithoutAbsorption) {
  LinkParams p = section_four_params();
  p.absorption_per_m = 0.0;
  const double d = p.wavelength() / (4.0 * constants::pi);
  EXPECT_NEAR(channel_gain(d, p), 1.0, 1e-14);
}

TEST(ChannelGain, TenMetresAtOneTerahertz) {
  // mpmath, 40 digits, c = 299792458 m/s
  EXPECT_NEAR(channel_gain(10.0, section_four_params()) / 5.5121909584105108967e-12, 1.0, 1e-13);
}

TEST(ChannelGain, StrictlyDecreasingInDistanceAndAbsorption) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.1, 100.0), absorb(1e-4, 0.05);
  for (int i = 0; i < 500; ++i) {
    LinkParams p = section_four_params();
    p.absorption_per_m = absorb(rng);
    double d1 = dist(rng), d2 = dist(rng);
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    EXPECT_GT(channel_gain(d1, p), channel_gain(d2, p));
    LinkParams q = p;
    q.absorption_per_m *= 1.5;
    EXPECT_GT(channel_gain(d1, p), channel_gain(d1, q));
  }
}

TEST(ChannelGain, RejectsNonPositiveDistance) {
  EXPECT_THROW(channel_gain(0.0, section_four_params()), DomainError);
  EXPECT_THROW(channel_gain(-1.0, section_four_params()), DomainError);
}

TEST(NoisePlusInterference, FourRisAtTwentyFiveMetres) {
  const double got = noise_plus_interference(four_at(25.0), section_four_params());
  EXPECT_NEAR(got / 1.4282545189812333973e-13, 1.0, 1e-12);
  // Composite written out: N0 + 4·p·A0·(1 − e^{−0.04})/625
  const LinkParams p = section_four_params();
  const double a0 = std::pow(constants::speed_of_light / p.carrier_hz, 2) / (16 * constants::pi * constants::pi);
  const double n0 = thermal_noise(p);
  EXPECT_NEAR(got, n0 + 4.0 * a0 * (1.0 - std::exp(-0.04)) / 625.0, 1e-25);
}

TEST(NoisePlusInterference, NoAbsorptionLeavesThermalFloor) {
  LinkParams p = section_four_params();
  p.absorption_per_m = 0.0;
  EXPECT_EQ(noise_plus_interference(four_at(25.0), p), thermal_noise(p));
}

TEST(NoisePlusInterference, FarRisTendsToThermalFloor) {
  const LinkParams p = section_four_params();
  const double n0 = thermal_noise(p);
  const double far = noise_plus_interference(LinkGeometry({1e9}, 0), p);
  EXPECT_GE(far, n0);
  EXPECT_NEAR(far / n0, 1.0, 1e-6);
}

TEST(NoisePlusInterference, EmptyGeometryRejected) {
  EXPECT_THROW(LinkGeometry({}, 0), DomainError);
  EXPECT_THROW(LinkGeometry({1.0, 2.0}, 2), DomainError);
  EXPECT_THROW(LinkGeometry({1.0, -2.0}, 0), DomainError);
}

TEST(NoisePlusInterference, ServingExclusionAndConventionalNoise) {
  const LinkParams p = section_four_params();
  const LinkGeometry g({10.0, 30.0, 40.0, 25.0}, 0);
  const double all = noise_plus_interference(g, p);
  const double excl = noise_plus_interference(g, p, {.include_serving_ris = false});
  EXPECT_LT(excl, all);
  EXPECT_NEAR(thermal_noise(p, {.conventional_noise = true}), 1.380649e-23 * 300.0 * 10e9, 1e-24);
  // Rates from mpmath composition
  EXPECT_NEAR(rate_bps(g, p) / 182425452650.11053338, 1.0, 1e-12);
  EXPECT_NEAR(rate_bps(g, p, {.include_serving_ris = false}) / 192666222268.40103166, 1.0, 1e-12);
}

TEST(RisArrayGain, AlignedAndExplicitPhases) {
  EXPECT_EQ(ris_array_gain(1), 1.0);
  EXPECT_EQ(ris_array_gain(100), 10000.0);
  const std::vector<double> opposite{0.0, constants::pi};
  EXPECT_NEAR(ris_array_gain(opposite), 0.0, 1e-30);
  const std::vector<double> aligned(7, 0.3);
  EXPECT_NEAR(ris_array_gain(aligned), 49.0, 1e-12);
  EXPECT_THROW(ris_array_gain(0), DomainError);
  EXPECT_THROW(ris_array_gain(std::span<const double>{}), DomainError);
}

TEST(Rate, ShannonLimits) {
  EXPECT_DOUBLE_EQ(shannon_rate(10e9, 1.0), 10e9);
  EXPECT_EQ(shannon_rate(10e9, 0.0), 0.0);
  EXPECT_NEAR(shannon_rate(1.0, 1e-300), 0.0, 1e-290);
}

TEST(Rate, SectionFourTwentyFiveMetres) {
  const LinkParams p = section_four_params();
  const double r = rate_bps(four_at(25.0), p);
  EXPECT_NEAR(r / 158449322081.59329256, 1.0, 1e-12);
  EXPECT_NEAR(update_rate(r, p) / 15844.932208159329256, 1.0, 1e-12);
}

TEST(Rate, IncreasingInElementsAndPower) {
  LinkParams p = section_four_params();
  const LinkGeometry g({12.0, 20.0, 33.0, 41.0}, 0);
  const double base = rate_bps(g, p);
  LinkParams more = p;
  more.meta_surfaces = p.meta_surfaces * p.meta_surfaces;
  EXPECT_GT(rate_bps(g, more), base);
  more = p;
  more.tx_power_w = 2.0;
  EXPECT_GT(rate_bps(g, more), base);
}

TEST(Rate, MissingElementCountRejected) {
  LinkParams p = section_four_params();
  p.meta_surfaces = 0;
  EXPECT_THROW(rate_bps(four_at(25.0), p), DomainError);
}

TEST(UpdateRate, DivisionByImageSize) {
  const LinkParams p = section_four_params();
  EXPECT_EQ(update_rate(1e8, p), 10.0);
  EXPECT_EQ(update_rate(0.0, p), 0.0);
  EXPECT_THROW(update_rate(-1.0, p), DomainError);
  for (double c : {0.5, 2.0, 7.25}) EXPECT_DOUBLE_EQ(update_rate(c * 3e9, p), c * update_rate(3e9, p));
}
