#pragma once

#include <functional>
#include <span>

#include "wavesim/trajectory.hpp"

namespace wavesim {

struct EnergyParams {
  static constexpr double kRotMassFactor = 1.03;
  static constexpr double kGravity = 9.81;  // m/s^2

  double mass = 1360.0;  // kg
  double f0 = 112.1;     // N
  double f1 = 0.655;     // N s/m
  double f2 = 0.03181;   // N s^2/m^2
  /// Road grade (rad) as a function of chainage; flat when empty.
  std::function<double(double)> grade;

  double grade_at(double s) const { return grade ? grade(s) : 0.0; }
  void validate() const;
};

/// Tractive power at the wheels in kW, never negative (no regeneration credit).
double tractive_power(double v, double a, double theta, const EnergyParams& p) noexcept;

/// Energy intensity in kWh/100km over samples [begin, end) of a trajectory whose
/// accelerations are already derived. Throws Error(Undefined) on zero distance.
double tractive_energy(std::span<const TrajectorySample> samples, double dt, const EnergyParams& p);

/// Derives accelerations and integrates the whole trajectory.
double tractive_energy(const VehicleTrajectory& trajectory, const EnergyParams& p);

/// Trapezoidal integral of uniformly spaced samples.
double trapezoid(std::span<const double> values, double dt) noexcept;

}  // namespace wavesim
