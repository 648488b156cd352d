#pragma once

#include <optional>

namespace wavesim {

/// Speeds below this count as standstill for time gaps and stop detection.
inline constexpr double kStandstillSpeed = 0.1;
/// Time gap and TTC value reported when the quantity is unbounded.
inline constexpr double kTimeCap = 1000.0;

struct SafetyParams {
  double tau = 0.75;        // s, ego reaction time
  double b_ego_comf = 3.0;  // m/s^2
  double b_ego_max = 6.0;   // m/s^2
  double b_lead_max = 6.0;  // m/s^2
  double d1 = 2.0;          // m, safety margin

  /// Throws Error(InvalidArgument) naming the offending field.
  void validate() const;
};

/// gap / v, or kTimeCap when the follower is at standstill.
double time_gap(double gap, double v_follower) noexcept;

/// Time to collision; empty when the follower is not closing in.
std::optional<double> ttc(double gap, double v_follower, double v_lead) noexcept;

double d_safe(double u_ego, double u_lead, const SafetyParams& p) noexcept;
double d_unsafe(double u_ego, double u_lead, const SafetyParams& p) noexcept;

/// Tailgating risk in [0, 1]: 1 at or inside the unsafe envelope, 0 beyond the safe one.
double pfs(double dist_lon, double u_ego, double u_lead, const SafetyParams& p) noexcept;

}  // namespace wavesim
