#include "wavesim/scenario.hpp"

#include <cmath>
#include <numbers>

#include "wavesim/error.hpp"

namespace wavesim {

namespace {

constexpr double kKmh = 1.0 / 3.6;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

void LeaderProfile::validate() const {
  require(std::isfinite(v_min) && v_min >= 0.0, "leader.v_min must be >= 0");
  require(std::isfinite(v_max) && v_max >= v_min, "leader.v_max must be >= leader.v_min");
  require(std::isfinite(period) && period > 0.0, "leader.period must be > 0");
  require(std::isfinite(duration) && duration >= 0.0, "leader.duration must be >= 0");
}

double leader_speed(const LeaderProfile& p, double t) noexcept {
  if (p.duration > 0.0 && t > p.duration) return p.v_min;
  const double span = p.v_max - p.v_min;
  switch (p.kind) {
    case ProfileKind::Sinusoid:
      return 0.5 * (p.v_min + p.v_max) +
             0.5 * span * std::sin(2.0 * std::numbers::pi * t / p.period);
    case ProfileKind::Trapezoid: {
      const double ph = std::fmod(t, p.period) / p.period;
      if (ph < 0.25) return p.v_min;
      if (ph < 0.5) return p.v_min + span * (ph - 0.25) / 0.25;
      if (ph < 0.75) return p.v_max;
      return p.v_max - span * (ph - 0.75) / 0.25;
    }
    case ProfileKind::StopAndGo: {
      const double ph = std::fmod(t, p.period) / p.period;
      if (ph < 0.3) return p.v_max;
      if (ph < 0.5) return p.v_max - span * (ph - 0.3) / 0.2;
      if (ph < 0.7) return p.v_min;
      return p.v_min + span * (ph - 0.7) / 0.3;
    }
  }
  return p.v_min;
}

void Signal::validate() const {
  require(std::isfinite(position) && position >= 0.0, "signal.position must be >= 0");
  require(std::isfinite(cycle) && cycle > 0.0, "signal.cycle must be > 0");
  require(green_start >= 0.0 && green_start < green_end && green_end <= cycle,
          "signal green window must satisfy 0 <= green_start < green_end <= cycle");
}

SignalState signal_state(const Signal& signal, double t) noexcept {
  double phase = std::fmod(t, signal.cycle);
  if (phase < 0.0) phase += signal.cycle;
  return (phase >= signal.green_start && phase < signal.green_end) ? SignalState::Green
                                                                   : SignalState::Red;
}

std::vector<double> green_wave_speeds(std::span<const Signal> signals, double v_min, double v_max,
                                      double start_s, double start_t, double resolution) {
  require(std::isfinite(v_min) && v_min > 0.0, "v_min must be > 0");
  require(std::isfinite(v_max) && v_max >= v_min, "v_max must be >= v_min");
  require(std::isfinite(resolution) && resolution > 0.0, "resolution must be > 0");
  for (const auto& s : signals) s.validate();
  std::vector<double> feasible;
  const auto count = static_cast<std::size_t>(std::floor((v_max - v_min) / resolution + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double v = v_min + static_cast<double>(k) * resolution;
    bool ok = true;
    for (const auto& s : signals) {
      if (s.position < start_s) continue;
      if (signal_state(s, start_t + (s.position - start_s) / v) == SignalState::Red) {
        ok = false;
        break;
      }
    }
    if (ok) feasible.push_back(v);
  }
  return feasible;
}

const char* to_string(ControllerKind kind) noexcept {
  switch (kind) {
    case ControllerKind::DdIdm: return "DD_IDM";
    case ControllerKind::AccCtg: return "ACC_CTG";
    case ControllerKind::DiInertia: return "DI_INERTIA";
    case ControllerKind::Scripted: return "SCRIPTED";
  }
  return "?";
}

const char* to_string(ProfileKind kind) noexcept {
  switch (kind) {
    case ProfileKind::Sinusoid: return "sinusoid";
    case ProfileKind::Trapezoid: return "trapezoid";
    case ProfileKind::StopAndGo: return "stop_and_go";
  }
  return "?";
}

void ControllerSpec::validate() const {
  switch (kind) {
    case ControllerKind::DdIdm: idm.validate(); break;
    case ControllerKind::AccCtg: acc.validate(); break;
    case ControllerKind::DiInertia: di.validate(); break;
    case ControllerKind::Scripted: script.validate(); break;
  }
  require(std::isfinite(noise_sd) && noise_sd >= 0.0, "follower.noise_sd must be >= 0");
}

void Scenario::validate() const {
  require(std::isfinite(loop_length) && loop_length >= 0.0, "loop_length must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
  require(std::isfinite(duration) && duration > 0.0, "duration must be > 0");
  require(std::isfinite(vehicle_length) && vehicle_length >= 0.0, "vehicle_length must be >= 0");
  leader.validate();
  for (std::size_t i = 0; i < followers.size(); ++i) {
    try {
      followers[i].validate();
    } catch (const Error& e) {
      throw Error(e.kind(), "follower " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (!initial_gaps.empty()) {
    require(initial_gaps.size() == followers.size(),
            "initial_gaps must list one gap per follower");
    for (double g : initial_gaps) require(std::isfinite(g) && g > 0.0, "initial_gaps must be positive");
  }
  for (const auto& c : speed_caps) {
    require(std::isfinite(c.from) && std::isfinite(c.to) && c.from < c.to,
            "cap.from must be below cap.to");
    require(std::isfinite(c.cap) && c.cap > 0.0, "cap.cap must be > 0");
    if (loop_length > 0.0)
      require(c.from >= 0.0 && c.to <= loop_length, "speed caps must lie within [0, loop_length)");
  }
  for (const auto& s : signals) {
    s.validate();
    if (loop_length > 0.0) require(s.position < loop_length, "signal.position must be < loop_length");
  }
}

namespace {

ControllerSpec dd() { return ControllerSpec{}; }

ControllerSpec acc() {
  ControllerSpec c;
  c.kind = ControllerKind::AccCtg;
  return c;
}

ControllerSpec di() {
  ControllerSpec c;
  c.kind = ControllerKind::DiInertia;
  return c;
}

LeaderProfile sinusoid(double lo_kmh, double hi_kmh, double period) {
  return {ProfileKind::Sinusoid, lo_kmh * kKmh, hi_kmh * kKmh, period, 0.0};
}

Scenario jrc_circuit(bool inertia) {
  Scenario s;
  s.name = inertia ? "jrc_circuit_di" : "jrc_circuit";
  s.loop_length = 3300.0;
  s.leader = sinusoid(30.0, 45.0, 60.0);
  s.followers.push_back(acc());
  for (int i = 0; i < 4; ++i) s.followers.push_back(inertia ? di() : dd());
  for (double from : {300.0, 950.0, 1600.0, 2250.0, 2900.0})
    s.speed_caps.push_back({from, from + 120.0, 3.5});
  s.duration = 1000.0;
  return s;
}

Scenario wdc_eval(bool inertia) {
  Scenario s;
  s.name = inertia ? "wdc_eval_di" : "wdc_eval";
  s.leader = sinusoid(20.0, 60.0, 60.0);
  s.followers.push_back(inertia ? di() : dd());
  for (int i = 0; i < 8; ++i) s.followers.push_back(dd());
  s.duration = 600.0;
  if (inertia) {
    const double v0 = leader_speed(s.leader, 0.0);
    s.initial_gaps.assign(s.followers.size(), idm_equilibrium_gap(v0, IdmParams{}));
    s.initial_gaps.front() = 150.0;
  }
  return s;
}

Scenario module1_waves(bool inertia) {
  Scenario s;
  s.name = inertia ? "module1_waves_di" : "module1_waves";
  s.leader = sinusoid(20.0, 60.0, 60.0);
  s.followers.push_back(inertia ? di() : dd());
  for (int i = 0; i < 4; ++i) s.followers.push_back(dd());
  s.duration = 600.0;
  if (inertia) {
    const double v0 = leader_speed(s.leader, 0.0);
    s.initial_gaps.assign(s.followers.size(), idm_equilibrium_gap(v0, IdmParams{}));
    s.initial_gaps.front() = 150.0;
  }
  return s;
}

Scenario traffic_lights() {
  Scenario s;
  s.name = "traffic_lights";
  s.leader = sinusoid(50.0, 50.0, 60.0);
  for (int i = 0; i < 4; ++i) s.followers.push_back(dd());
  s.signals = {{400.0, 60.0, 0.0, 30.0},
               {900.0, 60.0, 10.0, 40.0},
               {1500.0, 60.0, 20.0, 50.0},
               {2200.0, 60.0, 30.0, 60.0}};
  s.duration = 300.0;
  return s;
}

Scenario ecd_fixture(bool inertia) {
  Scenario s;
  s.name = inertia ? "ecd_di" : "ecd_dd";
  s.leader = {ProfileKind::StopAndGo, 0.0, 50.0 * kKmh, 60.0, 0.0};
  s.followers.push_back(inertia ? di() : dd());
  s.duration = 600.0;
  if (inertia) s.initial_gaps = {250.0};
  return s;
}

}  // namespace

std::vector<std::string> template_names() {
  return {"jrc_circuit",   "jrc_circuit_di", "wdc_eval", "wdc_eval_di", "module1_waves",
          "module1_waves_di", "traffic_lights", "ecd_dd",   "ecd_di"};
}

Scenario make_template(std::string_view name) {
  if (name == "jrc_circuit") return jrc_circuit(false);
  if (name == "jrc_circuit_di") return jrc_circuit(true);
  if (name == "wdc_eval") return wdc_eval(false);
  if (name == "wdc_eval_di") return wdc_eval(true);
  if (name == "module1_waves") return module1_waves(false);
  if (name == "module1_waves_di") return module1_waves(true);
  if (name == "traffic_lights") return traffic_lights();
  if (name == "ecd_dd") return ecd_fixture(false);
  if (name == "ecd_di") return ecd_fixture(true);
  throw Error(ErrorKind::InvalidArgument, "unknown template '" + std::string(name) + "'");
}

}  // namespace wavesim
