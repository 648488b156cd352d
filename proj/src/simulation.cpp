#include "wavesim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "json.hpp"
#include "wavesim/error.hpp"
#include "wavesim/format.hpp"

namespace wavesim {

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Collision: return "collision";
    case EventKind::SignalStop: return "signal_stop";
    case EventKind::RedLightRun: return "red_light_run";
  }
  return "?";
}

namespace {

constexpr double kEmergencyBrake = 8.0;
constexpr double kStopSearch = 30.0;  // m, signal distance that attributes a stop to it

/// Virtual obstacles share one interaction law regardless of the vehicle's own controller.
const IdmParams kVirtualLaw{};

class Engine {
 public:
  explicit Engine(const Scenario& sc) : sc_(sc), n_(sc.followers.size() + 1) {}

  PlatoonRun run();

 private:
  double wrap(double x) const { return sc_.loop_length > 0.0 ? wrap_distance(x, sc_.loop_length) : x; }
  double ahead(double target, double from) const { return wrap(target - from); }
  double virtual_limit(double s, double v, double t) const;
  double initial_gap(std::size_t follower, double v0) const;

  const Scenario& sc_;
  std::size_t n_;
};

double Engine::virtual_limit(double s, double v, double t) const {
  double a = std::numeric_limits<double>::infinity();
  const double pos = wrap(s);
  for (const auto& c : sc_.speed_caps) {
    const double seq = kVirtualLaw.s0 + c.cap * kVirtualLaw.T;
    if (pos >= c.from && pos < c.to) {
      a = std::min(a, idm_interaction(v, seq, c.cap, kVirtualLaw));
    } else if (v > c.cap) {
      const double d = ahead(c.from, pos);
      if (d > 0.0 && d < kLookahead) a = std::min(a, idm_interaction(v, d + seq, c.cap, kVirtualLaw));
    }
  }
  if (sc_.signal_compliance) {
    for (const auto& sig : sc_.signals) {
      const double d = ahead(sig.position, pos);
      if (!(d > 0.0 && d <= kLookahead)) continue;
      if (signal_state(sig, t) != SignalState::Red) continue;
      if (v * v / (2.0 * kEmergencyBrake) > d) continue;  // too late to stop
      a = std::min(a, idm_interaction(v, d, 0.0, kVirtualLaw));
    }
  }
  return a;
}

double Engine::initial_gap(std::size_t follower, double v0) const {
  if (!sc_.initial_gaps.empty()) return sc_.initial_gaps[follower];
  const auto& spec = sc_.followers[follower];
  switch (spec.kind) {
    case ControllerKind::DdIdm:
      if (v0 < spec.idm.v0) return idm_equilibrium_gap(v0, spec.idm);
      break;
    case ControllerKind::AccCtg:
      return acc_equilibrium_gap(v0, spec.acc);
    default:
      break;
  }
  return 20.0;
}

PlatoonRun Engine::run() {
  sc_.validate();
  const double dt = sc_.dt;
  const auto steps = static_cast<std::size_t>(std::llround(sc_.duration / dt));
  const double len = sc_.vehicle_length;

  std::vector<double> s(n_, 0.0);
  std::vector<double> v(n_, leader_speed(sc_.leader, 0.0));
  for (std::size_t i = 1; i < n_; ++i) s[i] = s[i - 1] - len - initial_gap(i - 1, v[0]);

  std::vector<std::string> ids(n_);
  for (std::size_t i = 0; i < n_; ++i) ids[i] = "v" + std::to_string(i + 1);

  std::vector<std::optional<DiHistory>> history(n_);
  std::vector<std::mt19937_64> rng;
  rng.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(sc_.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(sc_.seed >> 32), static_cast<std::uint32_t>(i)};
    rng.emplace_back(seq);
    if (i > 0 && sc_.followers[i - 1].kind == ControllerKind::DiInertia)
      history[i].emplace(sc_.followers[i - 1].di.window, dt);
  }

  std::vector<std::vector<TrajectorySample>> samples(n_);
  for (auto& x : samples) x.reserve(steps + 1);
  auto record = [&](double t) {
    for (std::size_t i = 0; i < n_; ++i) samples[i].push_back({t, s[i], v[i], 0.0});
  };
  record(0.0);

  std::vector<Event> events;
  std::vector<bool> in_contact(n_, false);
  std::vector<double> a(n_, 0.0);
  std::vector<double> target(n_, 0.0);
  std::vector<bool> exact(n_, false);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double t_next = static_cast<double>(k + 1) * dt;

    for (std::size_t i = 0; i < n_; ++i) {
      exact[i] = false;
      const ControllerSpec* spec = i > 0 ? &sc_.followers[i - 1] : nullptr;
      const double limit = virtual_limit(s[i], v[i], t);
      if (!spec || spec->kind == ControllerKind::Scripted) {
        const auto& profile = spec ? spec->script : sc_.leader;
        target[i] = leader_speed(profile, t_next);
        const double track = (target[i] - v[i]) / dt;
        a[i] = std::min({track, kLeaderAccel, limit});
        exact[i] = a[i] == track && track >= -kEmergencyBrake;
        a[i] = std::max(a[i], -kEmergencyBrake);
      } else {
        const double gap = s[i - 1] - s[i] - len;
        const double vl = v[i - 1];
        double ai = 0.0;
        switch (spec->kind) {
          case ControllerKind::DdIdm: ai = step_dd_idm(v[i], gap, vl, spec->idm); break;
          case ControllerKind::AccCtg: ai = step_acc_ctg(v[i], gap, vl, spec->acc); break;
          case ControllerKind::DiInertia: {
            const double r = spec->di.exclusion_radius;
            const double lead_pos = wrap(s[i - 1]);
            bool excluded = false;
            for (const auto& c : sc_.speed_caps) {
              const double start = c.from - r;
              const double width = (c.to - c.from) + 2.0 * r;
              const double off = sc_.loop_length > 0.0 ? wrap(lead_pos - start) : lead_pos - start;
              if (off >= 0.0 && off < width) excluded = true;
            }
            history[i]->push({t, vl, gap, excluded});
            ai = step_di(v[i], gap, vl, *history[i], spec->di);
            break;
          }
          case ControllerKind::Scripted: break;
        }
        ai = std::min(ai, limit);
        if (spec->noise_sd > 0.0) ai += std::normal_distribution<double>(0.0, spec->noise_sd)(rng[i]);
        a[i] = std::max(ai, -kEmergencyBrake);
      }
    }

    for (std::size_t i = 0; i < n_; ++i) {
      const double s_prev = s[i];
      const double v_prev = v[i];
      v[i] = exact[i] ? target[i] : std::max(0.0, v[i] + a[i] * dt);
      s[i] = s[i] + v[i] * dt;

      for (const auto& sig : sc_.signals) {
        const double d = ahead(sig.position, wrap(s_prev));
        const double moved = s[i] - s_prev;
        if (moved > 0.0 && d > 0.0 && d <= moved) {
          const double t_cross = t + dt * d / moved;
          if (signal_state(sig, t_cross) == SignalState::Red)
            events.push_back({t_cross, ids[i], EventKind::RedLightRun});
        }
      }
      if (sc_.signal_compliance && v_prev >= kStandstillSpeed && v[i] < kStandstillSpeed) {
        for (const auto& sig : sc_.signals) {
          const double d = ahead(sig.position, wrap(s[i]));
          if (d > 0.0 && d <= kStopSearch && signal_state(sig, t_next) == SignalState::Red) {
            events.push_back({t_next, ids[i], EventKind::SignalStop});
            break;
          }
        }
      }
    }

    for (std::size_t i = 1; i < n_; ++i) {
      const double bound = s[i - 1] - len;
      if (s[i] > bound) {
        if (!in_contact[i]) events.push_back({t_next, ids[i], EventKind::Collision});
        in_contact[i] = true;
        s[i] = std::max(bound, samples[i].back().s);
        v[i] = v[i - 1];
      } else {
        in_contact[i] = false;
      }
    }
    record(t_next);
  }

  std::vector<VehicleTrajectory> vehicles;
  vehicles.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i)
    vehicles.emplace_back(ids[i], dt, std::move(samples[i]), len);
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& x, const Event& y) { return x.t < y.t; });
  return {sc_, PlatoonLog(sc_.loop_length, std::move(vehicles), sc_.name), std::move(events)};
}

}  // namespace

PlatoonRun simulate(const Scenario& scenario) { return Engine(scenario).run(); }

std::vector<PlatoonRun> simulate_batch(std::span<const Scenario> scenarios, unsigned jobs) {
  std::vector<std::optional<PlatoonRun>> slots(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        slots[i] = simulate(scenarios[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<PlatoonRun> out;
  out.reserve(slots.size());
  for (auto& r : slots) out.push_back(std::move(*r));
  return out;
}

PlatoonLog simulate_followers(const VehicleTrajectory& head, std::size_t n, const IdmParams& params,
                              double vehicle_length) {
  params.validate();
  const double dt = head.dt();
  const std::size_t steps = head.size();
  std::vector<double> s(n + 1, head.front().s);
  std::vector<double> v(n + 1, head.front().v);
  double gap0 = 20.0;
  if (head.front().v < params.v0) gap0 = idm_equilibrium_gap(head.front().v, params);
  auto length_of = [&](std::size_t i) { return i == 0 ? head.vehicle_length() : vehicle_length; };
  for (std::size_t i = 1; i <= n; ++i) s[i] = s[i - 1] - length_of(i - 1) - gap0;

  std::vector<std::vector<TrajectorySample>> samples(n + 1);
  samples[0].assign(head.samples().begin(), head.samples().end());
  for (std::size_t i = 1; i <= n; ++i) {
    samples[i].reserve(steps);
    samples[i].push_back({head.front().t, s[i], v[i], 0.0});
  }
  std::vector<double> a(n + 1, 0.0);
  for (std::size_t k = 0; k + 1 < steps; ++k) {
    s[0] = head[k].s;
    v[0] = head[k].v;
    for (std::size_t i = 1; i <= n; ++i)
      a[i] = step_dd_idm(v[i], s[i - 1] - s[i] - length_of(i - 1), v[i - 1], params);
    s[0] = head[k + 1].s;
    v[0] = head[k + 1].v;
    for (std::size_t i = 1; i <= n; ++i) {
      v[i] = std::max(0.0, v[i] + a[i] * dt);
      s[i] += v[i] * dt;
      const double bound = s[i - 1] - length_of(i - 1);
      if (s[i] > bound) {
        s[i] = std::max(bound, samples[i].back().s);
        v[i] = v[i - 1];
      }
      samples[i].push_back({head[k + 1].t, s[i], v[i], 0.0});
    }
  }
  std::vector<VehicleTrajectory> vehicles;
  vehicles.emplace_back(head.vehicle_id(), dt, std::move(samples[0]), head.vehicle_length());
  for (std::size_t i = 1; i <= n; ++i)
    vehicles.emplace_back("virtual" + std::to_string(i), dt, std::move(samples[i]), vehicle_length);
  return PlatoonLog(0.0, std::move(vehicles));
}

std::string events_to_json(const PlatoonRun& run) {
  nlohmann::ordered_json j;
  j["scenario"] = run.scenario.name;
  j["seed"] = run.scenario.seed;
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : run.events) {
    nlohmann::ordered_json x;
    x["t"] = std::strtod(format_sig6(e.t).c_str(), nullptr);
    x["vehicle_id"] = e.vehicle_id;
    x["event_kind"] = to_string(e.kind);
    j["events"].push_back(std::move(x));
  }
  return j.dump(2) + "\n";
}

}  // namespace wavesim
