#include "wavesim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavesim/error.hpp"

namespace wavesim {

namespace {

void require_positive(double x, const char* owner, const char* name) {
  if (!(std::isfinite(x) && x > 0.0))
    throw Error(ErrorKind::InvalidArgument,
                std::string(owner) + ": " + name + " must be strictly positive");
}

double idm_desired_gap(double v, double v_lead, const IdmParams& p) noexcept {
  return p.s0 + std::max(0.0, v * p.T + v * (v - v_lead) / (2.0 * std::sqrt(p.a_max * p.b)));
}

}  // namespace

void IdmParams::validate() const {
  require_positive(v0, "idm", "v0");
  require_positive(T, "idm", "T");
  require_positive(s0, "idm", "s0");
  require_positive(a_max, "idm", "a_max");
  require_positive(b, "idm", "b");
  require_positive(b_max_phys, "idm", "b_max_phys");
}

double step_dd_idm(double v, double gap, double v_lead, const IdmParams& p) noexcept {
  if (gap <= 0.0) return -p.b_max_phys;
  const double s_star = idm_desired_gap(v, v_lead, p);
  const double a = p.a_max * (1.0 - std::pow(v / p.v0, 4) - (s_star / gap) * (s_star / gap));
  return std::clamp(a, -p.b_max_phys, p.a_max);
}

double idm_interaction(double v, double gap, double v_lead, const IdmParams& p) noexcept {
  if (gap <= 0.0) return -p.b_max_phys;
  const double s_star = idm_desired_gap(v, v_lead, p);
  const double a = p.a_max * (1.0 - (s_star / gap) * (s_star / gap));
  return std::clamp(a, -p.b_max_phys, p.a_max);
}

double idm_equilibrium_gap(double v, const IdmParams& p) {
  const double r = 1.0 - std::pow(v / p.v0, 4);
  if (!(r > 0.0))
    throw Error(ErrorKind::Undefined, "no IDM equilibrium at or above the desired speed");
  return (p.s0 + v * p.T) / std::sqrt(r);
}

void AccParams::validate() const {
  require_positive(h, "acc", "h");
  if (!(std::isfinite(d0) && d0 >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "acc: d0 must be >= 0");
  require_positive(k_g, "acc", "k_g");
  require_positive(k_v, "acc", "k_v");
  require_positive(a_max, "acc", "a_max");
  require_positive(b_max_phys, "acc", "b_max_phys");
}

double step_acc_ctg(double v, double gap, double v_lead, const AccParams& p) noexcept {
  if (gap <= 0.0) return -p.b_max_phys;
  const double a = p.k_g * (gap - (p.d0 + p.h * v)) + p.k_v * (v_lead - v);
  return std::clamp(a, -p.b_max_phys, p.a_max);
}

double acc_equilibrium_gap(double v, const AccParams& p) noexcept { return p.d0 + p.h * v; }

void DiParams::validate() const {
  require_positive(window, "di", "window");
  require_positive(k_i, "di", "k_i");
  require_positive(a_cap, "di", "a_cap");
  require_positive(k_s, "di", "k_s");
  require_positive(b_relax, "di", "b_relax");
  require_positive(b_max_phys, "di", "b_max_phys");
  require_positive(anchor_time, "di", "anchor_time");
  require_positive(anchor_limit, "di", "anchor_limit");
  if (!(std::isfinite(anchor_margin) && anchor_margin >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "di: anchor_margin must be >= 0");
  if (!(std::isfinite(buffer_factor) && buffer_factor >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "di: buffer_factor must be >= 0");
  if (!(std::isfinite(exclusion_radius) && exclusion_radius >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "di: exclusion_radius must be >= 0");
  safety.validate();
}

DiHistory::DiHistory(double window, double dt) : dt_(dt) {
  if (!(window > 0.0) || !(dt > 0.0))
    throw Error(ErrorKind::InvalidArgument, "history window and dt must be positive");
  capacity_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / dt)));
}

void DiHistory::push(const DiSample& sample) {
  samples_.push_back(sample);
  while (samples_.size() > capacity_) samples_.pop_front();
}

DiTarget di_target(const DiHistory& history, double v_lead, double gap, const DiParams& p) {
  DiTarget out;
  if (history.empty()) {
    out.mean_lead_speed = v_lead;
    out.target = v_lead;
    return out;
  }
  double sum_v = 0.0;
  double last_gap = gap;
  std::size_t n = 0;
  for (const auto& x : history.samples()) {
    if (x.excluded) continue;
    sum_v += x.v_lead;
    last_gap = x.gap;
    ++n;
  }
  const double v_bar = n > 0 ? sum_v / static_cast<double>(n) : v_lead;

  // Leader displacement relative to steady motion at v_bar; ends at zero.
  double disp = 0.0;
  double disp_sum = 0.0;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& x : history.samples()) {
    if (x.excluded) continue;
    disp += (x.v_lead - v_bar) * history.dt();
    disp_sum += disp;
    lo = std::min(lo, disp);
    hi = std::max(hi, disp);
  }
  out.mean_lead_speed = v_bar;
  out.buffer = n > 1 ? hi - lo : 0.0;

  if (history.full()) {
    // Gap the follower would see behind a leader moving steadily at v_bar.
    const double g_smooth = last_gap + (n > 0 ? disp_sum / static_cast<double>(n) : 0.0);
    const double g_ref = d_safe(v_bar, 0.0, p.safety) + p.buffer_factor * out.buffer + p.anchor_margin;
    out.anchor = std::clamp((g_smooth - g_ref) / p.anchor_time, -p.anchor_limit, p.anchor_limit);
  }
  out.target = std::max(0.0, v_bar + out.anchor);
  return out;
}

double step_di(double v, double gap, double v_lead, const DiHistory& history, const DiParams& p) {
  if (gap <= 0.0) return -p.b_max_phys;
  const double u = di_target(history, v_lead, gap, p).target;
  double a = std::clamp(p.k_i * (u - v), -p.a_cap, p.a_cap);
  if (gap < d_safe(v, v_lead, p.safety)) a = std::min(a, p.k_s * (v_lead - v) - p.b_relax);
  return std::max(a, -p.b_max_phys);
}

}  // namespace wavesim
