#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wavesim/error.hpp"
#include "wavesim/scenario.hpp"
#include "wavesim/simulation.hpp"

using namespace wavesim;

namespace {

// Drives one signal-ignoring vehicle at constant speed through the plan and reports
// whether it ever crossed a stop line on red.
bool passes_on_green(const std::vector<Signal>& plan, double v) {
  Scenario sc;
  sc.leader = {ProfileKind::Sinusoid, v, v, 60.0, 0.0};
  sc.signals = plan;
  sc.signal_compliance = false;
  double far = 0.0;
  for (const auto& s : plan) far = std::max(far, s.position);
  sc.duration = std::ceil((far + 1.0) / v / 0.1) * 0.1 + 0.2;
  const auto run = simulate(sc);
  for (const auto& e : run.events)
    if (e.kind == EventKind::RedLightRun) return false;
  return true;
}

}  // namespace

TEST(LeaderSpeed, Sinusoid) {
  const LeaderProfile flat{ProfileKind::Sinusoid, 10, 10, 60, 0};
  for (double t : {0.0, 7.3, 45.0}) EXPECT_DOUBLE_EQ(leader_speed(flat, t), 10.0);
  const LeaderProfile p{ProfileKind::Sinusoid, 30 / 3.6, 45 / 3.6, 60, 0};
  EXPECT_NEAR(leader_speed(p, 15.0), 12.5, 1e-12);
  EXPECT_NEAR(leader_speed(p, 45.0), 30 / 3.6, 1e-12);
}

TEST(LeaderSpeed, TrapezoidPhases) {
  const LeaderProfile p{ProfileKind::Trapezoid, 2, 10, 40, 0};
  EXPECT_DOUBLE_EQ(leader_speed(p, 0), 2.0);
  EXPECT_DOUBLE_EQ(leader_speed(p, 15), 6.0);
  EXPECT_DOUBLE_EQ(leader_speed(p, 25), 10.0);
  EXPECT_DOUBLE_EQ(leader_speed(p, 35), 6.0);
  EXPECT_DOUBLE_EQ(leader_speed(p, 40), 2.0);
}

TEST(LeaderSpeed, StopAndGoReachesZeroAndStaysInRange) {
  const LeaderProfile p{ProfileKind::StopAndGo, 0, 50 / 3.6, 60, 0};
  EXPECT_DOUBLE_EQ(leader_speed(p, 5), 50 / 3.6);
  EXPECT_DOUBLE_EQ(leader_speed(p, 35), 0.0);
  EXPECT_DOUBLE_EQ(leader_speed(p, 41.9), 0.0);
  for (int k = 0; k < 6000; ++k) {
    const double v = leader_speed(p, k * 0.05);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 50 / 3.6 + 1e-12);
  }
}

TEST(LeaderSpeed, DurationHoldsMinimum) {
  const LeaderProfile p{ProfileKind::Sinusoid, 4, 8, 60, 100};
  EXPECT_DOUBLE_EQ(leader_speed(p, 150), 4.0);
}

TEST(Signals, HalfOpenGreenWindow) {
  const Signal s{0, 60, 0, 30};
  EXPECT_EQ(signal_state(s, 29.9), SignalState::Green);
  EXPECT_EQ(signal_state(s, 30.0), SignalState::Red);
  EXPECT_EQ(signal_state(s, 90.0), SignalState::Red);
  EXPECT_EQ(signal_state(s, 60.0), SignalState::Green);
}

TEST(GreenWave, WorkedSingleSignal) {
  const std::vector<Signal> plan{{300, 60, 0, 30}};
  const auto v = green_wave_speeds(plan, 5, 20, 0, 0, 1);
  EXPECT_NE(std::find(v.begin(), v.end(), 15.0), v.end());
  EXPECT_EQ(std::find(v.begin(), v.end(), 8.0), v.end());
}

TEST(GreenWave, NoSignalsWholeGrid) {
  const auto v = green_wave_speeds({}, 5, 15, 0, 0, 0.5);
  ASSERT_EQ(v.size(), 21u);
  EXPECT_DOUBLE_EQ(v.back(), 15.0);
}

TEST(GreenWave, InfeasibleIsEmpty) {
  const std::vector<Signal> plan{{100, 60, 0, 1}, {200, 60, 0, 1}};
  EXPECT_TRUE(green_wave_speeds(plan, 5, 15, 0, 0, 0.5).empty());
}

TEST(GreenWave, StartOffsets) {
  const std::vector<Signal> plan{{300, 60, 0, 30}};
  // From 150 m at t = 20 s, 15 m/s arrives at 30 s: red.
  const auto v = green_wave_speeds(plan, 15, 15, 150, 20, 1);
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(green_wave_speeds(plan, 15, 15, 400, 0, 1).size(), 1u);  // signal behind
}

TEST(GreenWave, PreconditionsRejected) {
  EXPECT_THROW(green_wave_speeds({}, 0, 10, 0, 0, 1), Error);
  EXPECT_THROW(green_wave_speeds({}, 1, 10, 0, 0, 0), Error);
}

TEST(GreenWave, EqualsBruteForceSimulation) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> gap(150, 600);
  std::uniform_real_distribution<double> cycle(40, 90);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int plan_no = 0; plan_no < 5; ++plan_no) {
    std::vector<Signal> plan;
    double pos = 0.0;
    for (int k = 0; k < 4; ++k) {
      pos += gap(rng);
      const double c = cycle(rng);
      const double a = frac(rng) * c * 0.3;
      plan.push_back({pos, c, a, a + c * (0.3 + 0.4 * frac(rng))});
    }
    const double lo = 4.0 + 0.0173 * plan_no, res = 0.0789;
    const auto fast = green_wave_speeds(plan, lo, lo + 199 * res, 0, 0, res);
    std::vector<double> brute;
    for (int j = 0; j < 200; ++j)
      if (passes_on_green(plan, lo + j * res)) brute.push_back(lo + j * res);
    ASSERT_EQ(fast.size(), brute.size()) << "plan " << plan_no;
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_DOUBLE_EQ(fast[i], brute[i]);
  }
}

TEST(ScenarioValidation, RejectsBadFields) {
  Scenario s = make_template("module1_waves");
  EXPECT_NO_THROW(s.validate());
  s.dt = 0;
  EXPECT_THROW(s.validate(), Error);
  s = make_template("module1_waves");
  s.initial_gaps = {10, 10};
  EXPECT_THROW(s.validate(), Error);
  s = make_template("jrc_circuit");
  s.speed_caps.push_back({3200, 3400, 3});
  EXPECT_THROW(s.validate(), Error);
  s = make_template("traffic_lights");
  s.signals[0].green_end = 70;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_THROW(make_template("nope"), Error);
}

TEST(Templates, AllValid) {
  for (const auto& n : template_names()) EXPECT_NO_THROW(make_template(n).validate()) << n;
  const auto jrc = make_template("jrc_circuit");
  EXPECT_DOUBLE_EQ(jrc.loop_length, 3300.0);
  ASSERT_EQ(jrc.followers.size(), 5u);
  EXPECT_EQ(jrc.followers[0].kind, ControllerKind::AccCtg);
  EXPECT_EQ(make_template("wdc_eval").followers.size(), 9u);
}
