#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "paoi/scenario.hpp"

using namespace paoi;

namespace {

Scenario indoor(int users) {
  Scenario s;
  s.num_users = users;
  s.link.meta_surfaces = 100;
  s.queue.stage_service_rate = 5.0;
  s.queue.compute_service_rate = 100.0;
  return s;
}

}  // namespace

TEST(Room, DefaultsToWallMidpoints) {
  const Room r;
  ASSERT_EQ(r.ris_positions.size(), 4u);
  EXPECT_NO_THROW(r.validate());
  Room bad;
  bad.ris_positions = {{25.0, 25.0}};
  EXPECT_THROW(bad.validate(), DomainError);
  bad.ris_positions = {};
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(PlaceUsers, EmptyForZeroUsers) { EXPECT_TRUE(place_users(indoor(0)).empty()); }

TEST(PlaceUsers, DeterministicNestedAndInside) {
  const auto a = place_users(indoor(30));
  const auto b = place_users(indoor(30));
  const auto c = place_users(indoor(10));
  ASSERT_EQ(a.size(), 30u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
    EXPECT_GT(a[i].x, 0.0);
    EXPECT_LT(a[i].x, 50.0);
    EXPECT_GT(a[i].y, 0.0);
    EXPECT_LT(a[i].y, 50.0);
  }
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(a[i].x, c[i].x);
  Scenario other = indoor(30);
  other.placement_seed = 2;
  EXPECT_NE(place_users(other)[0].x, a[0].x);
}

TEST(PlaceUsers, UniformMeanIsRoomCentre) {
  const auto pts = place_users(indoor(100000));
  double mx = 0, my = 0;
  for (const auto& p : pts) mx += p.x, my += p.y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  EXPECT_NEAR(mx / 25.0, 1.0, 0.01);
  EXPECT_NEAR(my / 25.0, 1.0, 0.01);
}

TEST(Associate, NearestWithLowestIndexTieBreak) {
  const Room room;
  const std::vector<Point> users{{25.0, 25.0}, {25.0, 1.0}, {49.0, 25.0}, {3.0, 47.0}};
  const auto a = associate(users, room);
  EXPECT_EQ(a[0].serving_ris, 0u);  // four-way tie at the centre
  EXPECT_EQ(a[1].serving_ris, 0u);
  EXPECT_EQ(a[2].serving_ris, 1u);
  EXPECT_EQ(a[3].serving_ris, 2u);  // equidistant from RIS 2 and RIS 3
}

TEST(Associate, ServingDistanceIsMinimum) {
  const auto users = place_users(indoor(500));
  const Room room;
  for (const auto& a : associate(users, room)) {
    const auto d = a.geometry.ris_distances();
    EXPECT_EQ(a.geometry.serving_distance(), *std::min_element(d.begin(), d.end()));
    EXPECT_EQ(a.geometry.serving_index(), a.serving_ris);
    EXPECT_EQ(d.size(), 4u);
  }
}

TEST(Associate, PermutationOfRisOrderKeepsServingPosition) {
  const auto users = place_users(indoor(200));
  Room r1, r2;
  r2.ris_positions = {r1.ris_positions[2], r1.ris_positions[0], r1.ris_positions[3], r1.ris_positions[1]};
  const auto a1 = associate(users, r1), a2 = associate(users, r2);
  for (std::size_t i = 0; i < users.size(); ++i) {
    const Point p1 = r1.ris_positions[a1[i].serving_ris], p2 = r2.ris_positions[a2[i].serving_ris];
    EXPECT_EQ(distance(users[i], p1), distance(users[i], p2));
  }
}

TEST(RealizeRates, MatchesLinkComposition) {
  // mpmath, 40 digits, wall-midpoint RISs, N = 100, W = 10 GHz
  const Scenario s = indoor(0);
  const std::vector<Point> users{{10, 5}, {40, 30}, {25, 25}, {3, 47}};
  const std::vector<double> expected{17290.408802805211363, 18024.681710993341478,
                                     15844.932208159329256, 16521.984636910257071};
  const auto r = realize_rates(s, users);
  ASSERT_EQ(r.size(), expected.size());
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i] / expected[i], 1.0, 1e-12);
}

TEST(RealizeRates, Properties) {
  const Scenario s = indoor(0);
  const std::vector<Point> same{{12, 31}, {12, 31}, {12, 31}};
  const auto r = realize_rates(s, same);
  EXPECT_EQ(r[0], r[1]);
  EXPECT_EQ(r[1], r[2]);

  const Scenario base = indoor(20);
  const auto r0 = realize_rates(base);
  Scenario doubled = base;
  doubled.link.image_size_bits *= 2.0;
  const auto r1 = realize_rates(doubled);
  for (std::size_t i = 0; i < r0.size(); ++i) EXPECT_NEAR(r1[i], r0[i] / 2.0, 1e-9 * r0[i]);

  Scenario more_n = base, more_p = base;
  more_n.link.meta_surfaces = 200;
  more_p.link.tx_power_w = 2.0;
  const auto rn = realize_rates(more_n), rp = realize_rates(more_p);
  for (std::size_t i = 0; i < r0.size(); ++i) {
    EXPECT_GT(rn[i], r0[i]);
    EXPECT_GT(rp[i], r0[i]);
  }
  EXPECT_EQ(realize_rates(base), r0);
}

TEST(RealizeRates, DoublingBandwidthRaisesEveryRate) {
  Scenario s = indoor(30);
  std::vector<double> prev = realize_rates(s);
  for (double w : {20e9, 40e9, 80e9}) {
    s.link.bandwidth_hz = w;
    const auto next = realize_rates(s);
    for (std::size_t i = 0; i < next.size(); ++i) EXPECT_GT(next[i], prev[i]);
    prev = next;
  }
}

TEST(Sweep, Validation) {
  Sweep sw;
  sw.base = indoor(5);
  sw.analysis.ruin_level = 1.0;
  sw.values = {5, 10};
  EXPECT_NO_THROW(sw.validate());
  sw.values = {10, 5};
  EXPECT_THROW(sw.validate(), DomainError);
  sw.values = {5.5};
  EXPECT_THROW(sw.validate(), DomainError);
  sw.values = {5};
  sw.replications = 0;
  EXPECT_THROW(sw.validate(), DomainError);
  sw.replications = 1;
  sw.analysis.ruin_level = 0.0;
  EXPECT_THROW(sw.validate(), DomainError);
}

TEST(Sweep, SingleValueSingleReplication) {
  Sweep sw;
  sw.base = indoor(3);
  sw.values = {3};
  sw.analysis.ruin_level = 0.5;
  sw.analysis.disciplines = {Discipline::lcfs_mm12_star};
  sw.analysis.avg_modes = {ComputeFormula::corrected};
  sw.analysis.psi_modes = {PsiMode::survival};
  sw.analysis.horizon_s = 200.0;
  const auto rows = run_sweep(sw);
  ASSERT_EQ(rows.size(), 1u);
  const SweepRow& r = rows[0];
  EXPECT_EQ(r.status, "ok");
  ASSERT_TRUE(r.avg_analytic && r.avg_sim && r.ks_stage && r.j_z && r.j_sim);
  EXPECT_NEAR(*r.avg_sim / *r.avg_analytic, 1.0, 0.05);
  EXPECT_GT(r.preemptions, 0u);
  EXPECT_EQ(r.drops, 0u);
}

TEST(Sweep, RowsPerCellAndStatus) {
  Sweep sw;
  sw.base = indoor(5);
  sw.values = {5, 10, 20, 25};
  sw.replications = 2;
  sw.analysis.ruin_level = 1.0;
  sw.analysis.simulate = false;
  const auto rows = run_sweep(sw);
  // 2 disciplines × 2 average modes × 2 Ψ modes per (value, replication)
  ASSERT_EQ(rows.size(), 4u * 2u * 8u);
  std::set<std::pair<double, int>> cells;
  for (const auto& r : rows) {
    cells.insert({r.value, r.replication});
    if (r.avg_mode == ComputeFormula::corrected && r.value >= 20) {
      EXPECT_FALSE(r.avg_analytic.has_value());
      EXPECT_NE(r.status.find("unstable-compute-queue"), std::string::npos);
    }
    // λ_C = 5U meets μ_C = 100 at U = 20; the as-written form is only finite below that
    if (r.avg_mode == ComputeFormula::as_written && r.value < 20) EXPECT_TRUE(r.avg_analytic.has_value());
    if (r.avg_mode == ComputeFormula::as_written && r.value == 20) {
      EXPECT_FALSE(r.avg_analytic.has_value());
      EXPECT_NE(r.status.find("error"), std::string::npos);
    }
    EXPECT_FALSE(r.avg_sim.has_value());
  }
  EXPECT_EQ(cells.size(), 8u);
  const auto agg = aggregate(rows);
  EXPECT_EQ(agg.size(), 4u * 8u);
  for (const auto& a : agg) EXPECT_EQ(a.replications, 2);
}

TEST(Sweep, CorrectedAverageFallsWithBandwidthForLcfs) {
  Sweep sw;
  sw.variable = SweepVariable::bandwidth;
  sw.base = indoor(10);
  sw.values = {5e9, 10e9, 20e9, 40e9};
  sw.analysis.ruin_level = 1.0;
  sw.analysis.simulate = false;
  sw.analysis.disciplines = {Discipline::lcfs_mm12_star};
  sw.analysis.avg_modes = {ComputeFormula::corrected};
  sw.analysis.psi_modes = {PsiMode::survival};
  const auto rows = run_sweep(sw);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(*rows[i].avg_analytic, *rows[i - 1].avg_analytic);
}

TEST(Sweep, FcfsStageMeanRisesWithRateAboveThreshold) {
  // d/dr [1/r + 3/μ − 2/(r+μ)] > 0 once r > μ(1+√2): more bandwidth hurts FCFS.
  const double mu = 5.0, knee = mu * (1.0 + std::sqrt(2.0));
  const double below = avg_paoi_stage({0.9 * knee, mu, Discipline::fcfs_mm12});
  const double at = avg_paoi_stage({knee, mu, Discipline::fcfs_mm12});
  const double above = avg_paoi_stage({1.1 * knee, mu, Discipline::fcfs_mm12});
  EXPECT_GT(below, at);
  EXPECT_GT(above, at);
}

TEST(Sweep, ParallelEvaluationIsDeterministic) {
  Sweep sw;
  sw.base = indoor(2);
  sw.values = {2, 3};
  sw.replications = 3;
  sw.analysis.ruin_level = 0.5;
  sw.analysis.horizon_s = 100.0;
  const auto a = run_sweep(sw), b = run_sweep(sw);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].avg_sim, b[i].avg_sim);
    EXPECT_EQ(a[i].j_sim, b[i].j_sim);
    EXPECT_EQ(a[i].replication, b[i].replication);
  }
}
