#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavesim/controllers.hpp"
#include "wavesim/trajectory.hpp"

namespace wavesim {

enum class ProfileKind { Sinusoid, Trapezoid, StopAndGo };

struct LeaderProfile {
  ProfileKind kind = ProfileKind::Sinusoid;
  double v_min = 0.0;   // m/s
  double v_max = 0.0;   // m/s
  double period = 60.0; // s
  double duration = 0.0;  // s; 0 = unbounded, afterwards the profile holds v_min

  void validate() const;
};

/// Sinusoid: midpoint + half-amplitude * sin(2 pi t / period).
/// Trapezoid: quarters at v_min, ramp up, v_max, ramp down.
/// Stop-and-go: cruise [0, 0.3), ramp down [0.3, 0.5), dwell at v_min [0.5, 0.7), ramp up [0.7, 1).
double leader_speed(const LeaderProfile& profile, double t) noexcept;

struct Signal {
  double position = 0.0;  // m
  double cycle = 60.0;    // s
  double green_start = 0.0;
  double green_end = 30.0;

  void validate() const;
};

enum class SignalState { Green, Red };

/// Green iff (t mod cycle) lies in [green_start, green_end).
SignalState signal_state(const Signal& signal, double t) noexcept;

/// Every grid speed v_min + k*resolution <= v_max that reaches each signal ahead of
/// start_s while it is green.
std::vector<double> green_wave_speeds(std::span<const Signal> signals, double v_min, double v_max,
                                      double start_s, double start_t, double resolution);

struct SpeedCap {
  double from = 0.0;  // m
  double to = 0.0;    // m
  double cap = 0.0;   // m/s
};

enum class ControllerKind { DdIdm, AccCtg, DiInertia, Scripted };

const char* to_string(ControllerKind kind) noexcept;
const char* to_string(ProfileKind kind) noexcept;

struct ControllerSpec {
  ControllerKind kind = ControllerKind::DdIdm;
  IdmParams idm;
  AccParams acc;
  DiParams di;
  LeaderProfile script;     // speed trace tracked by scripted vehicles
  double noise_sd = 0.0;    // m/s^2, zero-mean acceleration noise

  void validate() const;
};

struct Scenario {
  std::string name;
  double loop_length = 0.0;  // m, 0 = open road
  LeaderProfile leader;
  std::vector<ControllerSpec> followers;
  std::vector<Signal> signals;
  std::vector<SpeedCap> speed_caps;
  double dt = kCanonicalDt;
  double duration = 600.0;
  std::vector<double> initial_gaps;  // empty = controller equilibrium
  std::uint64_t seed = 0;
  double vehicle_length = kDefaultVehicleLength;
  bool signal_compliance = true;  // false: vehicles ignore signals and only red-light runs are logged

  /// Throws Error(InvalidArgument) naming the offending field.
  void validate() const;
};

/// Names accepted by make_template.
std::vector<std::string> template_names();
/// Throws Error(InvalidArgument) for an unknown name.
Scenario make_template(std::string_view name);

}  // namespace wavesim
