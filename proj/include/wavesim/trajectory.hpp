#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavesim {

/// Sampling cadence shared by the simulator, ingestion and the energy model.
inline constexpr double kCanonicalDt = 0.1;
inline constexpr double kDefaultVehicleLength = 4.5;
/// Two sample times closer than this are considered equal.
inline constexpr double kTimeTolerance = 1e-9;

struct TrajectorySample {
  double t = 0.0;  // s
  double s = 0.0;  // m, cumulative chainage (never wrapped)
  double v = 0.0;  // m/s
  double a = 0.0;  // m/s^2, zero until derived
};

/// Uniformly sampled time series for one vehicle. Immutable once built.
class VehicleTrajectory {
 public:
  VehicleTrajectory() = default;
  /// Validates: dt > 0, at least one sample, uniform spacing within 1e-9 s,
  /// v >= 0 and s non-decreasing.
  VehicleTrajectory(std::string vehicle_id, double dt, std::vector<TrajectorySample> samples,
                    double vehicle_length = kDefaultVehicleLength);

  const std::string& vehicle_id() const noexcept { return vehicle_id_; }
  double dt() const noexcept { return dt_; }
  double vehicle_length() const noexcept { return vehicle_length_; }
  std::span<const TrajectorySample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }

  std::vector<double> speeds() const;
  std::vector<double> positions() const;
  std::vector<double> times() const;

 private:
  std::string vehicle_id_;
  double dt_ = kCanonicalDt;
  double vehicle_length_ = kDefaultVehicleLength;
  std::vector<TrajectorySample> samples_;
};

/// A platoon recording: index 0 is the head vehicle, index i+1 follows i.
class PlatoonLog {
 public:
  PlatoonLog() = default;
  /// Validates the shared time base (same dt, start time and length).
  PlatoonLog(double loop_length, std::vector<VehicleTrajectory> vehicles, std::string label = {});

  double loop_length() const noexcept { return loop_length_; }
  const std::vector<VehicleTrajectory>& vehicles() const noexcept { return vehicles_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return vehicles_.size(); }
  double dt() const;

  /// Index of the vehicle with the given id, or size() if absent.
  std::size_t index_of(std::string_view vehicle_id) const noexcept;

 private:
  double loop_length_ = 0.0;
  std::vector<VehicleTrajectory> vehicles_;
  std::string label_;
};

struct GapSeries {
  std::vector<double> t;
  std::vector<double> gap;                 // m, bumper to bumper
  std::vector<std::size_t> overlap_index;  // samples with gap < 0
};

/// Wraps a chainage difference into [0, loop_length) on a loop; identity on open road.
double wrap_distance(double difference, double loop_length) noexcept;

/// Parses `t,vehicle_id,s,v` CSV (any column order, extra columns ignored)
/// and resamples every vehicle onto a common 0.1 s grid over the shared time window.
PlatoonLog ingest_log(std::string_view csv_text, double loop_length,
                      double vehicle_length = kDefaultVehicleLength);

/// Writes the trajectory CSV with exact (shortest round-trip) numbers.
std::string write_log_csv(const PlatoonLog& log);

/// Linear resampling onto t_k = t_begin + k*dt for t_k <= t_end.
/// Grid points that coincide with source samples reproduce them exactly.
VehicleTrajectory resample(const VehicleTrajectory& trajectory, double dt, double t_begin,
                           double t_end);
VehicleTrajectory resample(const VehicleTrajectory& trajectory, double dt);

/// Central differences of speed in the interior, one-sided at both ends.
VehicleTrajectory derive_acceleration(const VehicleTrajectory& trajectory);
std::vector<double> central_difference(std::span<const double> values, double dt);

GapSeries gap_series(const VehicleTrajectory& follower, const VehicleTrajectory& leader,
                     double loop_length);

/// Head-to-tail span of the platoon at every sample.
std::vector<double> platoon_extension_series(const PlatoonLog& log);

struct LapWindow {
  int lap = 0;
  std::size_t begin = 0;  // first sample index
  std::size_t end = 0;    // one past the last sample index
};

/// Complete laps of a vehicle: lap k spans chainage [k*L, (k+1)*L).
/// Returns nothing on open road.
std::vector<LapWindow> complete_laps(const VehicleTrajectory& trajectory, double loop_length);

}  // namespace wavesim
