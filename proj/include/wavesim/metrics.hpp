#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavesim/energy.hpp"
#include "wavesim/safety.hpp"
#include "wavesim/trajectory.hpp"

namespace wavesim {

/// Names accepted by VehicleMetrics::get and by comparisons.
inline constexpr std::array<std::string_view, 11> kMetricFields = {
    "speed_mean",   "speed_sd", "gap_mean", "gap_sd",  "timegap_mean",   "timegap_sd",
    "min_ttc",      "pfs_mean", "energy",   "extension_mean", "extension_sd"};

/// Statistics of one vehicle over either the whole run (lap = -1) or one complete lap.
/// Within-run spreads use the population SD.
struct VehicleMetrics {
  std::string vehicle_id;
  int lap = -1;
  std::size_t samples = 0;
  double speed_mean = 0.0;
  double speed_sd = 0.0;
  // Following quantities; absent for the platoon head.
  std::optional<double> gap_mean;
  std::optional<double> gap_sd;
  std::optional<double> timegap_mean;
  std::optional<double> timegap_sd;
  std::optional<double> min_ttc;  // kTimeCap when never closing in
  std::optional<double> pfs_mean;
  std::size_t overlap_samples = 0;
  std::optional<double> energy;  // kWh/100km
  // Platoon span over the same time window; absent for single-vehicle logs.
  std::optional<double> extension_mean;
  std::optional<double> extension_sd;
  std::vector<std::string> notices;

  /// Throws Error(Schema) for an unknown field name.
  std::optional<double> get(std::string_view field) const;
};

struct PlatoonMetrics {
  std::optional<double> extension_mean;
  std::optional<double> extension_sd;
};

struct MetricsSummary {
  std::string label;
  double loop_length = 0.0;
  std::vector<VehicleMetrics> vehicles;  // whole run, platoon order
  std::vector<VehicleMetrics> laps;      // complete laps only, loop logs only
  PlatoonMetrics platoon;
  std::vector<std::string> notices;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Population mean and SD. Throws on an empty range.
MeanSd population_stats(std::span<const double> values);

/// Per-sample errors are recorded as notices on the affected record; the summary is never aborted.
MetricsSummary summarize_run(const PlatoonLog& log, const SafetyParams& sp, const EnergyParams& ep);

std::string metrics_to_json(const MetricsSummary& summary);
MetricsSummary metrics_from_json(std::string_view json_text);
/// One row per record; empty cells for absent values.
std::string metrics_to_csv(const MetricsSummary& summary);

}  // namespace wavesim
