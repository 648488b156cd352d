#include "wavesim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wavesim/error.hpp"

namespace wavesim {

void EnergyParams::validate() const {
  if (!(std::isfinite(mass) && mass > 0.0))
    throw Error(ErrorKind::InvalidArgument, "energy params: mass must be > 0");
  if (!(f0 >= 0.0 && f1 >= 0.0 && f2 >= 0.0) || !std::isfinite(f0 + f1 + f2))
    throw Error(ErrorKind::InvalidArgument, "energy params: f0, f1, f2 must be >= 0");
}

double tractive_power(double v, double a, double theta, const EnergyParams& p) noexcept {
  const double force = p.f0 + p.f1 * v + p.f2 * v * v + EnergyParams::kRotMassFactor * p.mass * a +
                       p.mass * EnergyParams::kGravity * std::sin(theta);
  return std::max(0.0, force * v * 1e-3);
}

double trapezoid(std::span<const double> values, double dt) noexcept {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dt;
}

double tractive_energy(std::span<const TrajectorySample> samples, double dt, const EnergyParams& p) {
  std::vector<double> power(samples.size());
  std::vector<double> speed(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& x = samples[i];
    power[i] = tractive_power(x.v, x.a, p.grade_at(x.s), p);
    speed[i] = x.v;
  }
  const double distance = trapezoid(speed, dt);
  if (!(distance > 0.0))
    throw Error(ErrorKind::Undefined, "energy undefined: trajectory covers zero distance");
  return trapezoid(power, dt) / (0.036 * distance);
}

double tractive_energy(const VehicleTrajectory& trajectory, const EnergyParams& p) {
  if (trajectory.size() < 2)
    throw Error(ErrorKind::Undefined, "energy undefined: trajectory covers zero distance");
  const auto derived = derive_acceleration(trajectory);
  return tractive_energy(derived.samples(), derived.dt(), p);
}

}  // namespace wavesim
