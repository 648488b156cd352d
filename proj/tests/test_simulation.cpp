#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavesim/controllers.hpp"
#include "wavesim/error.hpp"
#include "wavesim/simulation.hpp"

using namespace wavesim;

namespace {

Scenario constant_leader(double v, std::vector<ControllerSpec> followers, double duration) {
  Scenario sc;
  sc.name = "constant";
  sc.leader = {ProfileKind::Sinusoid, v, v, 60, 0};
  sc.followers = std::move(followers);
  sc.duration = duration;
  return sc;
}

Scenario wave(std::vector<ControllerSpec> followers) {
  Scenario sc;
  sc.name = "wave";
  sc.leader = {ProfileKind::Sinusoid, 30 / 3.6, 45 / 3.6, 60, 0};
  sc.followers = std::move(followers);
  sc.duration = 600;
  return sc;
}

ControllerSpec spec(ControllerKind k) {
  ControllerSpec c;
  c.kind = k;
  return c;
}

double tail_sd(const VehicleTrajectory& tr, double t_from) {
  std::vector<double> v;
  for (const auto& s : tr.samples())
    if (s.t >= t_from) v.push_back(s.v);
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / v.size());
}

double tail_amplitude(const VehicleTrajectory& tr, double t_from) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : tr.samples())
    if (s.t >= t_from) lo = std::min(lo, s.v), hi = std::max(hi, s.v);
  return 0.5 * (hi - lo);
}

}  // namespace

TEST(Simulate, ConstantLeaderDistance) {
  const auto run = simulate(constant_leader(10, {}, 60));
  ASSERT_EQ(run.log.size(), 1u);
  const auto& head = run.log.vehicles()[0];
  EXPECT_EQ(head.size(), 601u);
  EXPECT_NEAR(head.back().s, 600.0, 1e-9);
  EXPECT_EQ(head.vehicle_id(), "v1");
}

TEST(Simulate, IdmEquilibriumGap) {
  ControllerSpec f = spec(ControllerKind::DdIdm);
  f.idm.v0 = 16.67;
  auto sc = constant_leader(8.333, {f}, 120);
  sc.initial_gaps = {25.0};
  const auto run = simulate(sc);
  const auto gs = gap_series(run.log.vehicles()[1], run.log.vehicles()[0], 0);
  const double expected = idm_equilibrium_gap(8.333, f.idm);
  EXPECT_NEAR(expected, 10.672, 1e-3);
  EXPECT_NEAR(gs.gap.back(), expected, 0.01 * expected);
}

TEST(Simulate, DeterministicForSeed) {
  auto sc = make_template("module1_waves");
  for (auto& f : sc.followers) f.noise_sd = 0.2;
  sc.seed = 77;
  sc.duration = 120;
  const auto a = simulate(sc), b = simulate(sc);
  EXPECT_EQ(write_log_csv(a.log), write_log_csv(b.log));
  EXPECT_EQ(events_to_json(a), events_to_json(b));
  sc.seed = 78;
  EXPECT_NE(write_log_csv(simulate(sc).log), write_log_csv(a.log));
}

TEST(Simulate, InvariantsAcrossTemplates) {
  for (const auto& name : template_names()) {
    auto sc = make_template(name);
    sc.duration = std::min(sc.duration, 300.0);
    const auto run = simulate(sc);
    const auto& vs = run.log.vehicles();
    ASSERT_EQ(vs.size(), sc.followers.size() + 1) << name;
    const bool collided = std::any_of(run.events.begin(), run.events.end(),
                                      [](const Event& e) { return e.kind == EventKind::Collision; });
    EXPECT_FALSE(collided) << name;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t k = 0; k < vs[i].size(); ++k) {
        ASSERT_GE(vs[i][k].v, 0.0) << name;
        if (k) {
          ASSERT_GE(vs[i][k].s, vs[i][k - 1].s) << name;
        }
        if (i) {
          ASSERT_LE(vs[i][k].s, vs[i - 1][k].s - sc.vehicle_length + 1e-9) << name;
        }
      }
    }
  }
}

TEST(Simulate, DdChainAmplifies) {
  const auto run = simulate(wave(std::vector<ControllerSpec>(5, spec(ControllerKind::DdIdm))));
  const auto& vs = run.log.vehicles();
  double prev = tail_sd(vs[0], 200);
  for (std::size_t i = 1; i <= 5; ++i) {
    const double sd = tail_sd(vs[i], 200);
    EXPECT_GE(sd, prev) << "position " << i;
    EXPECT_GE(sd, 0.9 * tail_sd(vs[0], 200));
    prev = sd;
  }
}

TEST(Simulate, DiDamps) {
  auto sc = wave({spec(ControllerKind::DiInertia)});
  sc.initial_gaps = {150};
  const auto run = simulate(sc);
  const auto& vs = run.log.vehicles();
  EXPECT_LE(tail_sd(vs[1], 200), 0.5 * tail_sd(vs[0], 200));
}

TEST(Simulate, AccAmplifies) {
  const auto run = simulate(wave({spec(ControllerKind::AccCtg)}));
  const auto& vs = run.log.vehicles();
  EXPECT_GT(tail_amplitude(vs[1], 200), tail_amplitude(vs[0], 200));
}

TEST(Simulate, BatchMatchesSequential) {
  std::vector<Scenario> scs;
  for (const char* n : {"module1_waves", "module1_waves_di", "traffic_lights", "ecd_dd"}) {
    scs.push_back(make_template(n));
    scs.back().duration = 100;
  }
  const auto batch = simulate_batch(scs, 3);
  ASSERT_EQ(batch.size(), scs.size());
  for (std::size_t i = 0; i < scs.size(); ++i) {
    EXPECT_EQ(write_log_csv(batch[i].log), write_log_csv(simulate(scs[i]).log));
    EXPECT_EQ(events_to_json(batch[i]), events_to_json(simulate(scs[i])));
  }
  scs[1].dt = -1;
  EXPECT_THROW(simulate_batch(scs, 2), Error);
}

TEST(Simulate, SignalsStopCompliantTraffic) {
  const auto sc = make_template("traffic_lights");
  const auto run = simulate(sc);
  std::size_t stops = 0;
  for (const auto& e : run.events) {
    EXPECT_NE(e.kind, EventKind::Collision);
    stops += e.kind == EventKind::SignalStop;
    if (e.kind != EventKind::RedLightRun) continue;
    // Only vehicles already inside their stopping distance at red onset may pass.
    const double v = sc.leader.v_max;
    const bool dilemma = std::any_of(sc.signals.begin(), sc.signals.end(), [&](const Signal& s) {
      const double since_red = std::fmod(e.t - s.green_end + 10 * s.cycle, s.cycle);
      return since_red < v / (2 * 8.0);
    });
    EXPECT_TRUE(dilemma) << e.vehicle_id << " at " << e.t;
  }
  EXPECT_GT(stops, 0u);
}

TEST(Simulate, NonCompliantTrafficRunsReds) {
  auto sc = make_template("traffic_lights");
  sc.signal_compliance = false;
  const auto run = simulate(sc);
  const auto runs = std::count_if(run.events.begin(), run.events.end(),
                                  [](const Event& e) { return e.kind == EventKind::RedLightRun; });
  EXPECT_GT(runs, 0);
}

TEST(Simulate, CapZoneSlowsTraffic) {
  auto sc = constant_leader(10, {spec(ControllerKind::DdIdm)}, 100);
  sc.speed_caps = {{400, 500, 4}};
  const auto run = simulate(sc);
  for (const auto& vt : run.log.vehicles())
    for (const auto& s : vt.samples())
      if (s.s > 410 && s.s < 500) {
        EXPECT_LE(s.v, 4.0 + 0.5);
      }
}

TEST(Simulate, LoopExtensionVaries) {
  auto sc = make_template("jrc_circuit");
  sc.duration = 300;
  const auto ext = platoon_extension_series(simulate(sc).log);
  const auto [lo, hi] = std::minmax_element(ext.begin(), ext.end());
  EXPECT_GT(*hi - *lo, 1.0);
}

TEST(SimulateFollowers, VirtualChain) {
  const auto run = simulate(constant_leader(10, {}, 60));
  const auto log = simulate_followers(run.log.vehicles()[0], 3, IdmParams{});
  ASSERT_EQ(log.size(), 4u);
  EXPECT_EQ(log.vehicles()[3].vehicle_id(), "virtual3");
  const auto gs = gap_series(log.vehicles()[1], log.vehicles()[0], 0);
  const double eq = idm_equilibrium_gap(10, IdmParams{});
  for (double g : gs.gap) EXPECT_NEAR(g, eq, 1e-3);
}

TEST(Events, JsonLayout) {
  const auto run = simulate(make_template("traffic_lights"));
  const auto js = events_to_json(run);
  EXPECT_NE(js.find("\"scenario\""), std::string::npos);
  EXPECT_NE(js.find("\"signal_stop\""), std::string::npos);
}
