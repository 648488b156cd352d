#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavesim/controllers.hpp"
#include "wavesim/energy.hpp"
#include "wavesim/safety.hpp"
#include "wavesim/stats.hpp"
#include "wavesim/trajectory.hpp"

namespace wavesim {

/// Six-panel driver report. All series share the time axis `t`.
struct EcdReport {
  std::string subject_id;
  std::vector<double> t;
  std::vector<double> speed;     // m/s
  std::vector<double> fuel;      // kW tractive power
  std::vector<double> distance;  // m, cumulative
  // Empty when the subject heads the platoon.
  std::vector<double> space_ideal;
  std::vector<double> space_actual;
  std::vector<double> front_gap;
  std::vector<double> front_threshold;
  // Span of the virtual followers; empty when none are requested.
  std::vector<double> rear_extension;
  std::vector<std::string> notices;
};

struct EcdOptions {
  std::size_t n_virtual = 8;
  double ideal_headway = 2.0;  // s, multiplier of v for the ideal distance
  IdmParams virtual_params;
};

/// Throws Error(InvalidArgument) when the subject is not in the log.
EcdReport ecd(const PlatoonLog& log, std::string_view subject, const SafetyParams& sp,
              const EnergyParams& ep, const EcdOptions& options = {});

std::string ecd_to_json(const EcdReport& report);

/// 3 x 2 grid: SPEED, FUEL, DISTANCE on top; SPACE_SAFETY, SAFETY_FRONT, SAFETY_REAR below.
std::string render_svg(const EcdReport& report);

/// Aligned text table: two decimals, p to three places without the leading zero.
std::string render_table(std::span<const ComparisonRow> rows);
std::string table_to_csv(std::span<const ComparisonRow> rows);
std::vector<ComparisonRow> table_from_csv(std::string_view csv);

/// "6.30 (24, .001)" style cell; p below .001 prints "<.001".
std::string format_t_cell(double t, int df, double p);

}  // namespace wavesim
