#pragma once

#include <span>
#include <string>
#include <vector>

#include "wavesim/scenario.hpp"
#include "wavesim/trajectory.hpp"

namespace wavesim {

/// Lookahead for speed caps and red signals, m.
inline constexpr double kLookahead = 300.0;
/// Maximum leader acceleration while tracking its profile, m/s^2.
inline constexpr double kLeaderAccel = 1.5;

enum class EventKind { Collision, SignalStop, RedLightRun };

const char* to_string(EventKind kind) noexcept;

struct Event {
  double t = 0.0;
  std::string vehicle_id;
  EventKind kind = EventKind::Collision;
};

struct PlatoonRun {
  Scenario scenario;
  PlatoonLog log;
  std::vector<Event> events;
};

/// Deterministic fixed-step run. Identical scenarios give identical results.
PlatoonRun simulate(const Scenario& scenario);

/// Runs independent scenarios on up to `jobs` worker threads. Results keep input order.
std::vector<PlatoonRun> simulate_batch(std::span<const Scenario> scenarios, unsigned jobs);

/// DD followers re-simulated behind a recorded head trajectory, starting at equilibrium.
/// The returned log holds the head followed by the n followers.
PlatoonLog simulate_followers(const VehicleTrajectory& head, std::size_t n, const IdmParams& params,
                              double vehicle_length = kDefaultVehicleLength);

std::string events_to_json(const PlatoonRun& run);

}  // namespace wavesim
