#include "wavesim/safety.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavesim/error.hpp"

namespace wavesim {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, std::string("safety params: ") + what);
}

}  // namespace

void SafetyParams::validate() const {
  require(std::isfinite(tau) && tau >= 0.0, "tau must be >= 0");
  require(std::isfinite(b_ego_comf) && b_ego_comf > 0.0, "b_ego_comf must be > 0");
  require(std::isfinite(b_ego_max) && b_ego_max > b_ego_comf, "b_ego_max must exceed b_ego_comf");
  require(std::isfinite(b_lead_max) && b_lead_max > 0.0, "b_lead_max must be > 0");
  require(std::isfinite(d1) && d1 >= 0.0, "d1 must be >= 0");
}

double time_gap(double gap, double v_follower) noexcept {
  if (v_follower < kStandstillSpeed) return kTimeCap;
  return gap / v_follower;
}

std::optional<double> ttc(double gap, double v_follower, double v_lead) noexcept {
  if (!(v_follower > v_lead)) return std::nullopt;
  return gap / (v_follower - v_lead);
}

double d_safe(double u_ego, double u_lead, const SafetyParams& p) noexcept {
  return u_ego * p.tau + u_ego * u_ego / (2.0 * p.b_ego_comf) -
         u_lead * u_lead / (2.0 * p.b_lead_max) + p.d1;
}

double d_unsafe(double u_ego, double u_lead, const SafetyParams& p) noexcept {
  return u_ego * p.tau + u_ego * u_ego / (2.0 * p.b_ego_max) -
         u_lead * u_lead / (2.0 * p.b_lead_max);
}

double pfs(double dist_lon, double u_ego, double u_lead, const SafetyParams& p) noexcept {
  const double x = dist_lon - p.d1;
  if (x <= 0.0) return 1.0;
  const double safe = d_safe(u_ego, u_lead, p);
  const double unsafe = d_unsafe(u_ego, u_lead, p);
  if (x <= unsafe) return 1.0;
  if (x >= safe) return 0.0;
  const double r = (dist_lon - safe - p.d1) / (unsafe - safe);
  return std::clamp(r, 0.0, 1.0);
}

}  // namespace wavesim
