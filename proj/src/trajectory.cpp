#include "wavesim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wavesim/error.hpp"
#include "wavesim/format.hpp"

namespace wavesim {

VehicleTrajectory::VehicleTrajectory(std::string vehicle_id, double dt,
                                     std::vector<TrajectorySample> samples, double vehicle_length)
    : vehicle_id_(std::move(vehicle_id)),
      dt_(dt),
      vehicle_length_(vehicle_length),
      samples_(std::move(samples)) {
  if (!(dt_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "trajectory dt must be positive");
  if (!(vehicle_length_ >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "vehicle length must be non-negative");
  if (samples_.empty())
    throw Error(ErrorKind::InvalidArgument, "trajectory '" + vehicle_id_ + "' has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& cur = samples_[i];
    if (!(cur.v >= 0.0))
      throw Error(ErrorKind::Data, "trajectory '" + vehicle_id_ + "': negative speed at sample " +
                                       std::to_string(i));
    if (i == 0) continue;
    const auto& prev = samples_[i - 1];
    if (std::abs((cur.t - prev.t) - dt_) > kTimeTolerance)
      throw Error(ErrorKind::Data, "trajectory '" + vehicle_id_ +
                                       "': non-uniform sample spacing at sample " +
                                       std::to_string(i));
    if (cur.s < prev.s)
      throw Error(ErrorKind::Data, "trajectory '" + vehicle_id_ +
                                       "': chainage decreases at sample " + std::to_string(i));
  }
}

std::vector<double> VehicleTrajectory::speeds() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const auto& x) { return x.v; });
  return out;
}

std::vector<double> VehicleTrajectory::positions() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const auto& x) { return x.s; });
  return out;
}

std::vector<double> VehicleTrajectory::times() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const auto& x) { return x.t; });
  return out;
}

PlatoonLog::PlatoonLog(double loop_length, std::vector<VehicleTrajectory> vehicles,
                       std::string label)
    : loop_length_(loop_length), vehicles_(std::move(vehicles)), label_(std::move(label)) {
  if (!(loop_length_ >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "loop length must be non-negative");
  for (std::size_t i = 1; i < vehicles_.size(); ++i) {
    const auto& a = vehicles_.front();
    const auto& b = vehicles_[i];
    if (std::abs(a.dt() - b.dt()) > kTimeTolerance || a.size() != b.size() ||
        std::abs(a.front().t - b.front().t) > kTimeTolerance)
      throw Error(ErrorKind::InvalidArgument,
                  "vehicles '" + a.vehicle_id() + "' and '" + b.vehicle_id() +
                      "' do not share a time base");
  }
}

double PlatoonLog::dt() const {
  if (vehicles_.empty()) throw Error(ErrorKind::InvalidArgument, "empty platoon log");
  return vehicles_.front().dt();
}

std::size_t PlatoonLog::index_of(std::string_view vehicle_id) const noexcept {
  for (std::size_t i = 0; i < vehicles_.size(); ++i)
    if (vehicles_[i].vehicle_id() == vehicle_id) return i;
  return vehicles_.size();
}

double wrap_distance(double difference, double loop_length) noexcept {
  if (loop_length <= 0.0) return difference;
  const double r = std::fmod(difference, loop_length);
  return r < 0.0 ? r + loop_length : r;
}

namespace {

struct RawSeries {
  std::vector<TrajectorySample> samples;
  std::size_t first_row = 0;
};

// Interpolates one grid point. `hint` only ever moves forward.
TrajectorySample interpolate(std::span<const TrajectorySample> src, double t, std::size_t& hint) {
  if (t <= src.front().t) return {t, src.front().s, src.front().v, src.front().a};
  if (t >= src.back().t) return {t, src.back().s, src.back().v, src.back().a};
  while (hint + 1 < src.size() && src[hint + 1].t <= t) ++hint;
  const auto& a = src[hint];
  if (a.t == t) return {t, a.s, a.v, a.a};
  const auto& b = src[hint + 1];
  const double w = (t - a.t) / (b.t - a.t);
  return {t, a.s + w * (b.s - a.s), a.v + w * (b.v - a.v), a.a + w * (b.a - a.a)};
}

std::vector<TrajectorySample> resample_samples(std::span<const TrajectorySample> src, double dt,
                                               double t_begin, double t_end) {
  std::vector<TrajectorySample> out;
  if (t_end < t_begin - kTimeTolerance) return out;
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_begin) / dt + 1e-6)) + 1;
  out.reserve(count);
  std::size_t hint = 0;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(interpolate(src, t_begin + static_cast<double>(k) * dt, hint));
  }
  // Chainage must stay monotone even when interpolating noisy input.
  for (std::size_t k = 1; k < out.size(); ++k) out[k].s = std::max(out[k].s, out[k - 1].s);
  return out;
}

}  // namespace

VehicleTrajectory resample(const VehicleTrajectory& trajectory, double dt, double t_begin,
                           double t_end) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "resample dt must be positive");
  auto samples = resample_samples(trajectory.samples(), dt, t_begin, t_end);
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty resampling window");
  return VehicleTrajectory(trajectory.vehicle_id(), dt, std::move(samples),
                           trajectory.vehicle_length());
}

VehicleTrajectory resample(const VehicleTrajectory& trajectory, double dt) {
  return resample(trajectory, dt, trajectory.front().t, trajectory.back().t);
}

PlatoonLog ingest_log(std::string_view csv_text, double loop_length, double vehicle_length) {
  auto lines = split(csv_text, '\n');
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw Error(ErrorKind::Schema, "empty file");

  const auto header = split(trim(lines[header_line]), ',');
  int col_t = -1, col_id = -1, col_s = -1, col_v = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = trim(header[c]);
    const int idx = static_cast<int>(c);
    if (name == "t") col_t = idx;
    else if (name == "vehicle_id") col_id = idx;
    else if (name == "s") col_s = idx;
    else if (name == "v") col_v = idx;
  }
  std::string missing;
  for (auto [col, name] : {std::pair{col_t, "t"}, {col_id, "vehicle_id"}, {col_s, "s"}, {col_v, "v"}})
    if (col < 0) missing += (missing.empty() ? "" : ", ") + std::string(name);
  if (!missing.empty()) throw Error(ErrorKind::Schema, "missing column: " + missing);
  const auto n_cols = static_cast<std::size_t>(std::max({col_t, col_id, col_s, col_v})) + 1;

  std::map<std::string, RawSeries, std::less<>> series;
  std::vector<std::string> first_seen;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    const auto line = trim(lines[li]);
    if (line.empty()) continue;
    const std::size_t row = li + 1;  // 1-based line number in the file
    const auto fields = split(line, ',');
    if (fields.size() < n_cols)
      throw Error(ErrorKind::Schema, "malformed row " + std::to_string(row) + ": expected " +
                                         std::to_string(header.size()) + " fields");
    TrajectorySample smp;
    if (!parse_double(fields[col_t], smp.t) || !parse_double(fields[col_s], smp.s) ||
        !parse_double(fields[col_v], smp.v) || !std::isfinite(smp.t) || !std::isfinite(smp.s) ||
        !std::isfinite(smp.v))
      throw Error(ErrorKind::Schema, "malformed row " + std::to_string(row) + ": bad number");
    if (smp.v < 0.0)
      throw Error(ErrorKind::Data, "row " + std::to_string(row) + ": negative speed");
    const std::string id(trim(fields[col_id]));
    if (id.empty())
      throw Error(ErrorKind::Schema, "malformed row " + std::to_string(row) + ": empty vehicle_id");
    auto it = series.find(id);
    if (it == series.end()) {
      it = series.emplace(id, RawSeries{}).first;
      it->second.first_row = row;
      first_seen.push_back(id);
    }
    auto& raw = it->second.samples;
    if (!raw.empty() && !(smp.t > raw.back().t))
      throw Error(ErrorKind::Data, "vehicle '" + id + "': time not strictly increasing at row " +
                                       std::to_string(row));
    raw.push_back(smp);
  }
  if (series.empty()) throw Error(ErrorKind::Schema, "empty file: no data rows");

  double t_begin = -INFINITY, t_end = INFINITY;
  for (const auto& [id, raw] : series) {
    t_begin = std::max(t_begin, raw.samples.front().t);
    t_end = std::min(t_end, raw.samples.back().t);
  }
  if (t_end < t_begin - kTimeTolerance)
    throw Error(ErrorKind::Data, "vehicles do not overlap in time");

  struct Ranked {
    VehicleTrajectory trajectory;
    double mean_s;
  };
  std::vector<Ranked> ranked;
  for (const auto& id : first_seen) {
    const auto& raw = series.find(id)->second.samples;
    auto samples = resample_samples(raw, kCanonicalDt, t_begin, t_end);
    double mean_s = 0.0;
    for (const auto& x : samples) mean_s += x.s;
    mean_s /= static_cast<double>(samples.size());
    ranked.push_back({VehicleTrajectory(id, kCanonicalDt, std::move(samples), vehicle_length), mean_s});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.mean_s != b.mean_s) return a.mean_s > b.mean_s;
    return a.trajectory.vehicle_id() < b.trajectory.vehicle_id();
  });
  std::vector<VehicleTrajectory> vehicles;
  vehicles.reserve(ranked.size());
  for (auto& r : ranked) vehicles.push_back(std::move(r.trajectory));
  return PlatoonLog(loop_length, std::move(vehicles));
}

std::string write_log_csv(const PlatoonLog& log) {
  std::string out = "t,vehicle_id,s,v\n";
  for (const auto& veh : log.vehicles()) {
    for (const auto& x : veh.samples()) {
      out += format_shortest(x.t);
      out += ',';
      out += veh.vehicle_id();
      out += ',';
      out += format_shortest(x.s);
      out += ',';
      out += format_shortest(x.v);
      out += '\n';
    }
  }
  return out;
}

std::vector<double> central_difference(std::span<const double> values, double dt) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "differentiation needs at least 2 samples");
  std::vector<double> d(n);
  d[0] = (values[1] - values[0]) / dt;
  d[n - 1] = (values[n - 1] - values[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
  return d;
}

VehicleTrajectory derive_acceleration(const VehicleTrajectory& trajectory) {
  if (trajectory.size() < 2)
    throw Error(ErrorKind::InvalidArgument,
                "trajectory '" + trajectory.vehicle_id() + "' has a single sample");
  const auto v = trajectory.speeds();
  const auto a = central_difference(v, trajectory.dt());
  std::vector<TrajectorySample> samples(trajectory.samples().begin(), trajectory.samples().end());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].a = a[i];
  return VehicleTrajectory(trajectory.vehicle_id(), trajectory.dt(), std::move(samples),
                           trajectory.vehicle_length());
}

GapSeries gap_series(const VehicleTrajectory& follower, const VehicleTrajectory& leader,
                     double loop_length) {
  if (follower.size() != leader.size() ||
      std::abs(follower.front().t - leader.front().t) > kTimeTolerance ||
      std::abs(follower.dt() - leader.dt()) > kTimeTolerance)
    throw Error(ErrorKind::InvalidArgument, "gap_series needs a shared time base");
  GapSeries out;
  out.t.reserve(follower.size());
  out.gap.reserve(follower.size());
  for (std::size_t i = 0; i < follower.size(); ++i) {
    const double g =
        wrap_distance(leader[i].s - follower[i].s, loop_length) - leader.vehicle_length();
    out.t.push_back(follower[i].t);
    out.gap.push_back(g);
    if (g < 0.0) out.overlap_index.push_back(i);
  }
  return out;
}

std::vector<double> platoon_extension_series(const PlatoonLog& log) {
  if (log.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "platoon extension needs at least 2 vehicles");
  const auto& vs = log.vehicles();
  std::vector<double> out(vs.front().size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double span = 0.0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
      span += wrap_distance(vs[i][k].s - vs[i + 1][k].s, log.loop_length());
    out[k] = span;
  }
  return out;
}

std::vector<LapWindow> complete_laps(const VehicleTrajectory& trajectory, double loop_length) {
  std::vector<LapWindow> laps;
  if (loop_length <= 0.0) return laps;
  const auto samples = trajectory.samples();
  const double s0 = samples.front().s;
  const double s1 = samples.back().s;
  const auto first = static_cast<long>(std::ceil(s0 / loop_length));
  const auto last = static_cast<long>(std::floor(s1 / loop_length));  // exclusive lap bound
  for (long k = first; k < last; ++k) {
    const double lo = static_cast<double>(k) * loop_length;
    const double hi = static_cast<double>(k + 1) * loop_length;
    const auto b = std::lower_bound(samples.begin(), samples.end(), lo,
                                    [](const TrajectorySample& x, double s) { return x.s < s; });
    const auto e = std::lower_bound(b, samples.end(), hi,
                                    [](const TrajectorySample& x, double s) { return x.s < s; });
    if (e - b < 2) continue;
    laps.push_back({static_cast<int>(k), static_cast<std::size_t>(b - samples.begin()),
                    static_cast<std::size_t>(e - samples.begin())});
  }
  return laps;
}

}  // namespace wavesim
