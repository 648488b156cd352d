#include "wavesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "json.hpp"

#include "wavesim/error.hpp"
#include "wavesim/format.hpp"

namespace wavesim {

using nlohmann::json;

std::optional<double> VehicleMetrics::get(std::string_view field) const {
  if (field == "speed_mean") return speed_mean;
  if (field == "speed_sd") return speed_sd;
  if (field == "gap_mean") return gap_mean;
  if (field == "gap_sd") return gap_sd;
  if (field == "timegap_mean") return timegap_mean;
  if (field == "timegap_sd") return timegap_sd;
  if (field == "min_ttc") return min_ttc;
  if (field == "pfs_mean") return pfs_mean;
  if (field == "energy") return energy;
  if (field == "extension_mean") return extension_mean;
  if (field == "extension_sd") return extension_sd;
  throw Error(ErrorKind::Schema, "unknown metric '" + std::string(field) + "'");
}

MeanSd population_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "statistics of an empty series");
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

namespace {

struct VehicleContext {
  VehicleTrajectory derived;  // accelerations filled in
  std::optional<GapSeries> gaps;
};

VehicleMetrics measure(const PlatoonLog& log, const std::vector<VehicleContext>& ctx,
                       const std::vector<double>& extension, std::size_t i, std::size_t b,
                       std::size_t e, int lap, const SafetyParams& sp, const EnergyParams& ep) {
  const auto& traj = ctx[i].derived;
  VehicleMetrics m;
  m.vehicle_id = traj.vehicle_id();
  m.lap = lap;
  m.samples = e - b;

  const auto all_speeds = traj.speeds();
  std::vector<double> v(all_speeds.begin() + static_cast<long>(b),
                        all_speeds.begin() + static_cast<long>(e));
  const auto speed = population_stats(v);
  m.speed_mean = speed.mean;
  m.speed_sd = speed.sd;

  if (ctx[i].gaps) {
    const auto& leader = log.vehicles()[i - 1];
    std::vector<double> gap(ctx[i].gaps->gap.begin() + static_cast<long>(b),
                            ctx[i].gaps->gap.begin() + static_cast<long>(e));
    std::vector<double> tg(gap.size());
    std::vector<double> risk(gap.size());
    double min_ttc = kTimeCap;
    for (std::size_t k = 0; k < gap.size(); ++k) {
      const double vf = v[k];
      const double vl = leader[b + k].v;
      tg[k] = time_gap(gap[k], vf);
      risk[k] = pfs(gap[k], vf, vl, sp);
      if (gap[k] < 0.0) ++m.overlap_samples;
      if (auto x = ttc(gap[k], vf, vl)) min_ttc = std::min(min_ttc, std::max(0.0, *x));
    }
    const auto g = population_stats(gap);
    const auto t = population_stats(tg);
    m.gap_mean = g.mean;
    m.gap_sd = g.sd;
    m.timegap_mean = t.mean;
    m.timegap_sd = t.sd;
    m.min_ttc = min_ttc;
    m.pfs_mean = population_stats(risk).mean;
    if (m.overlap_samples > 0)
      m.notices.push_back(std::to_string(m.overlap_samples) + " samples with negative gap");
  }

  try {
    m.energy = tractive_energy(traj.samples().subspan(b, e - b), traj.dt(), ep);
  } catch (const Error& err) {
    m.notices.emplace_back(err.what());
  }

  if (!extension.empty()) {
    const auto ext = population_stats(
        std::span<const double>(extension).subspan(b, e - b));
    m.extension_mean = ext.mean;
    m.extension_sd = ext.sd;
  }
  return m;
}

// Values are rounded to six significant digits before they reach a text format.
double sig6(double x) { return std::strtod(format_sig6(x).c_str(), nullptr); }

void put(json& j, const char* key, const std::optional<double>& x) {
  if (x) j[key] = sig6(*x);
}

json record_to_json(const VehicleMetrics& m) {
  json j;
  j["vehicle_id"] = m.vehicle_id;
  j["lap"] = m.lap;
  j["samples"] = m.samples;
  j["speed_mean"] = sig6(m.speed_mean);
  j["speed_sd"] = sig6(m.speed_sd);
  put(j, "gap_mean", m.gap_mean);
  put(j, "gap_sd", m.gap_sd);
  put(j, "timegap_mean", m.timegap_mean);
  put(j, "timegap_sd", m.timegap_sd);
  put(j, "min_ttc", m.min_ttc);
  put(j, "pfs_mean", m.pfs_mean);
  put(j, "energy", m.energy);
  put(j, "extension_mean", m.extension_mean);
  put(j, "extension_sd", m.extension_sd);
  if (m.gap_mean) j["overlap_samples"] = m.overlap_samples;
  if (!m.notices.empty()) j["notices"] = m.notices;
  return j;
}

std::optional<double> opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorKind::Schema, std::string("metric '") + key + "' is not a number");
  return it->get<double>();
}

VehicleMetrics record_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, "metrics record is not an object");
  VehicleMetrics m;
  if (!j.contains("vehicle_id") || !j["vehicle_id"].is_string())
    throw Error(ErrorKind::Schema, "metrics record without vehicle_id");
  m.vehicle_id = j["vehicle_id"].get<std::string>();
  m.lap = j.value("lap", -1);
  m.samples = j.value("samples", std::size_t{0});
  auto speed_mean = opt(j, "speed_mean");
  auto speed_sd = opt(j, "speed_sd");
  if (!speed_mean || !speed_sd)
    throw Error(ErrorKind::Schema, "metrics record '" + m.vehicle_id + "' lacks speed fields");
  m.speed_mean = *speed_mean;
  m.speed_sd = *speed_sd;
  m.gap_mean = opt(j, "gap_mean");
  m.gap_sd = opt(j, "gap_sd");
  m.timegap_mean = opt(j, "timegap_mean");
  m.timegap_sd = opt(j, "timegap_sd");
  m.min_ttc = opt(j, "min_ttc");
  m.pfs_mean = opt(j, "pfs_mean");
  m.energy = opt(j, "energy");
  m.extension_mean = opt(j, "extension_mean");
  m.extension_sd = opt(j, "extension_sd");
  m.overlap_samples = j.value("overlap_samples", std::size_t{0});
  if (j.contains("notices")) m.notices = j["notices"].get<std::vector<std::string>>();
  return m;
}

}  // namespace

MetricsSummary summarize_run(const PlatoonLog& log, const SafetyParams& sp, const EnergyParams& ep) {
  sp.validate();
  ep.validate();
  if (log.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty platoon log");

  MetricsSummary out;
  out.label = log.label();
  out.loop_length = log.loop_length();

  std::vector<VehicleContext> ctx;
  ctx.reserve(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& traj = log.vehicles()[i];
    VehicleContext c{traj.size() >= 2 ? derive_acceleration(traj) : traj, std::nullopt};
    if (i > 0) c.gaps = gap_series(traj, log.vehicles()[i - 1], log.loop_length());
    ctx.push_back(std::move(c));
  }

  std::vector<double> extension;
  if (log.size() >= 2) {
    extension = platoon_extension_series(log);
    const auto ext = population_stats(extension);
    out.platoon.extension_mean = ext.mean;
    out.platoon.extension_sd = ext.sd;
  } else {
    out.notices.emplace_back("platoon fields omitted: log has a single vehicle");
  }

  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto n = log.vehicles()[i].size();
    out.vehicles.push_back(measure(log, ctx, extension, i, 0, n, -1, sp, ep));
    for (const auto& lap : complete_laps(log.vehicles()[i], log.loop_length()))
      out.laps.push_back(measure(log, ctx, extension, i, lap.begin, lap.end, lap.lap, sp, ep));
  }
  return out;
}

std::string metrics_to_json(const MetricsSummary& summary) {
  json j;
  j["sd_convention"] = "population";
  j["label"] = summary.label;
  j["loop_length"] = sig6(summary.loop_length);
  j["vehicles"] = json::array();
  for (const auto& m : summary.vehicles) j["vehicles"].push_back(record_to_json(m));
  j["laps"] = json::array();
  for (const auto& m : summary.laps) j["laps"].push_back(record_to_json(m));
  json platoon = json::object();
  put(platoon, "extension_mean", summary.platoon.extension_mean);
  put(platoon, "extension_sd", summary.platoon.extension_sd);
  j["platoon"] = platoon;
  if (!summary.notices.empty()) j["notices"] = summary.notices;
  return j.dump(2) + "\n";
}

MetricsSummary metrics_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("metrics JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vehicles") || !j["vehicles"].is_array())
    throw Error(ErrorKind::Schema, "metrics JSON: missing 'vehicles' array");
  MetricsSummary s;
  try {
    s.label = j.value("label", std::string{});
    s.loop_length = j.value("loop_length", 0.0);
    for (const auto& r : j["vehicles"]) s.vehicles.push_back(record_from_json(r));
    if (j.contains("laps"))
      for (const auto& r : j["laps"]) s.laps.push_back(record_from_json(r));
    if (j.contains("platoon")) {
      s.platoon.extension_mean = opt(j["platoon"], "extension_mean");
      s.platoon.extension_sd = opt(j["platoon"], "extension_sd");
    }
    if (j.contains("notices")) s.notices = j["notices"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("metrics JSON: ") + e.what());
  }
  return s;
}

std::string metrics_to_csv(const MetricsSummary& summary) {
  std::string out = "label,vehicle_id,lap";
  for (auto f : kMetricFields) {
    out += ',';
    out += f;
  }
  out += '\n';
  auto row = [&](const VehicleMetrics& m) {
    out += summary.label + ',' + m.vehicle_id + ',' + std::to_string(m.lap);
    for (auto f : kMetricFields) {
      out += ',';
      if (auto x = m.get(f)) out += format_sig6(*x);
    }
    out += '\n';
  };
  for (const auto& m : summary.vehicles) row(m);
  for (const auto& m : summary.laps) row(m);
  return out;
}

}  // namespace wavesim
