#pragma once

#include <cstddef>
#include <deque>

#include "wavesim/safety.hpp"

namespace wavesim {

/// Intelligent Driver Model, used for distance-keeping (DD) followers.
struct IdmParams {
  double v0 = 33.3;         // m/s, desired speed
  double T = 1.0;           // s, time headway
  double s0 = 2.0;          // m, jam distance
  double a_max = 1.5;       // m/s^2
  double b = 2.0;           // m/s^2, comfortable deceleration
  double b_max_phys = 8.0;  // m/s^2, emergency braking limit

  void validate() const;
};

/// Full IDM law clamped to [-b_max_phys, a_max]. gap <= 0 yields -b_max_phys.
double step_dd_idm(double v, double gap, double v_lead, const IdmParams& p) noexcept;
/// IDM without the free-road term; used for virtual obstacles.
double idm_interaction(double v, double gap, double v_lead, const IdmParams& p) noexcept;
/// Steady-state gap at speed v. Throws Error(Undefined) when v >= v0.
double idm_equilibrium_gap(double v, const IdmParams& p);

/// Constant-time-gap adaptive cruise control.
struct AccParams {
  double h = 0.6;           // s
  double d0 = 2.0;          // m
  double k_g = 0.5;         // 1/s^2
  double k_v = 0.5;         // 1/s
  double a_max = 2.0;       // m/s^2
  double b_max_phys = 8.0;  // m/s^2

  void validate() const;
};

double step_acc_ctg(double v, double gap, double v_lead, const AccParams& p) noexcept;
double acc_equilibrium_gap(double v, const AccParams& p) noexcept;

/// Inertia-keeping (DI) follower: holds the leader's trailing mean speed and lets the gap float.
struct DiParams {
  double window = 60.0;    // s
  double k_i = 0.4;        // 1/s
  double a_cap = 0.3;      // m/s^2
  double k_s = 0.8;        // 1/s
  double b_relax = 0.5;    // m/s^2
  double b_max_phys = 8.0; // m/s^2
  // Slow gap anchor that keeps the mean gap near a reference derived from the wave size.
  double anchor_time = 30.0;    // s
  double anchor_limit = 2.0;    // m/s
  double anchor_margin = 3.0;   // m
  double buffer_factor = 1.0;
  // Leader samples this close to a speed-cap zone are ignored by the trailing statistics.
  double exclusion_radius = 60.0;  // m
  SafetyParams safety;

  void validate() const;
};

struct DiSample {
  double t = 0.0;
  double v_lead = 0.0;
  double gap = 0.0;
  bool excluded = false;
};

/// Fixed-length trailing window of leader observations.
class DiHistory {
 public:
  DiHistory(double window, double dt);

  void push(const DiSample& sample);
  bool full() const noexcept { return samples_.size() >= capacity_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  double dt() const noexcept { return dt_; }
  const std::deque<DiSample>& samples() const noexcept { return samples_; }

 private:
  double dt_;
  std::size_t capacity_;
  std::deque<DiSample> samples_;
};

struct DiTarget {
  double mean_lead_speed = 0.0;  // trailing mean over non-excluded samples
  double buffer = 0.0;           // m, peak-to-peak leader displacement about its mean
  double anchor = 0.0;           // m/s
  double target = 0.0;           // m/s, u*
};

/// Target speed from the history. An empty history targets the current leader speed.
DiTarget di_target(const DiHistory& history, double v_lead, double gap, const DiParams& p);

double step_di(double v, double gap, double v_lead, const DiHistory& history, const DiParams& p);

}  // namespace wavesim
