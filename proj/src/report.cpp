#include "wavesim/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "wavesim/error.hpp"
#include "wavesim/format.hpp"
#include "wavesim/simulation.hpp"

namespace wavesim {

EcdReport ecd(const PlatoonLog& log, std::string_view subject, const SafetyParams& sp,
              const EnergyParams& ep, const EcdOptions& options) {
  sp.validate();
  ep.validate();
  const std::size_t idx = log.index_of(subject);
  if (idx == log.size())
    throw Error(ErrorKind::InvalidArgument, "vehicle '" + std::string(subject) + "' not in log");
  const auto& raw = log.vehicles()[idx];
  if (raw.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "vehicle '" + std::string(subject) + "' has a single sample");
  const auto traj = derive_acceleration(raw);

  EcdReport r;
  r.subject_id = traj.vehicle_id();
  const std::size_t n = traj.size();
  r.t.reserve(n);
  r.speed.reserve(n);
  r.fuel.reserve(n);
  r.distance.reserve(n);
  double dist = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& x = traj[k];
    if (k > 0) dist += 0.5 * (traj[k - 1].v + x.v) * traj.dt();
    r.t.push_back(x.t);
    r.speed.push_back(x.v);
    r.fuel.push_back(tractive_power(x.v, x.a, ep.grade_at(x.s), ep));
    r.distance.push_back(dist);
  }

  if (idx == 0) {
    r.notices.emplace_back("subject leads the platoon: SPACE_SAFETY and SAFETY_FRONT omitted");
  } else {
    const auto& leader = log.vehicles()[idx - 1];
    const auto gaps = gap_series(traj, leader, log.loop_length());
    r.front_gap = gaps.gap;
    r.space_actual = gaps.gap;
    r.space_ideal.reserve(n);
    r.front_threshold.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      r.space_ideal.push_back(options.ideal_headway * traj[k].v);
      r.front_threshold.push_back(d_safe(traj[k].v, leader[k].v, sp));
    }
  }

  if (options.n_virtual > 0) {
    const auto tail = simulate_followers(raw, options.n_virtual, options.virtual_params,
                                         raw.vehicle_length());
    r.rear_extension = platoon_extension_series(tail);
  }
  return r;
}

namespace {

using nlohmann::ordered_json;

ordered_json series(const std::vector<double>& xs) {
  auto arr = ordered_json::array();
  for (double x : xs) arr.push_back(std::strtod(format_sig6(x).c_str(), nullptr));
  return arr;
}

struct Panel {
  const char* id;
  const char* title;
  const char* unit;
  std::vector<std::pair<const std::vector<double>*, const char*>> lines;  // series, style
};

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 220.0;
constexpr double kPadL = 52.0;
constexpr double kPadR = 12.0;
constexpr double kPadT = 28.0;
constexpr double kPadB = 30.0;

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void draw_panel(std::ostringstream& out, const Panel& p, const std::vector<double>& t, int col, int row) {
  const double x0 = col * kPanelW;
  const double y0 = row * kPanelH;
  const double pw = kPanelW - kPadL - kPadR;
  const double ph = kPanelH - kPadT - kPadB;
  out << "<g id=\"" << p.id << "\" class=\"panel\" transform=\"translate(" << format_fixed(x0, 0)
      << "," << format_fixed(y0, 0) << ")\">\n";
  out << "<text x=\"" << format_fixed(kPadL, 0) << "\" y=\"18\" class=\"title\">" << p.title
      << " (" << p.unit << ")</text>\n";
  out << "<rect x=\"" << format_fixed(kPadL, 0) << "\" y=\"" << format_fixed(kPadT, 0)
      << "\" width=\"" << format_fixed(pw, 0) << "\" height=\"" << format_fixed(ph, 0)
      << "\" class=\"frame\"/>\n";

  bool any = false;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& [s, style] : p.lines) {
    for (double v : *s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      any = true;
    }
  }
  if (!any) {
    out << "<text x=\"" << format_fixed(kPadL + pw / 2, 1) << "\" y=\""
        << format_fixed(kPadT + ph / 2, 1) << "\" class=\"na\">not available</text>\n</g>\n";
    return;
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double t0 = t.front();
  const double t1 = t.back() > t0 ? t.back() : t0 + 1.0;
  out << "<text x=\"" << format_fixed(kPadL - 4, 0) << "\" y=\"" << format_fixed(kPadT + 4, 0)
      << "\" class=\"tick\">" << format_sig6(hi) << "</text>\n";
  out << "<text x=\"" << format_fixed(kPadL - 4, 0) << "\" y=\"" << format_fixed(kPadT + ph, 0)
      << "\" class=\"tick\">" << format_sig6(lo) << "</text>\n";
  out << "<text x=\"" << format_fixed(kPadL, 0) << "\" y=\"" << format_fixed(kPadT + ph + 16, 0)
      << "\" class=\"axis\">" << format_sig6(t0) << "</text>\n";
  out << "<text x=\"" << format_fixed(kPadL + pw, 0) << "\" y=\"" << format_fixed(kPadT + ph + 16, 0)
      << "\" class=\"axis end\">" << format_sig6(t1) << " s</text>\n";
  for (const auto& [s, style] : p.lines) {
    out << "<polyline class=\"" << style << "\" points=\"";
    for (std::size_t k = 0; k < s->size(); ++k) {
      const double x = kPadL + pw * (t[k] - t0) / (t1 - t0);
      const double y = kPadT + ph * (hi - (*s)[k]) / (hi - lo);
      if (k) out << ' ';
      out << format_fixed(x, 2) << ',' << format_fixed(y, 2);
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
}

std::string fixed2(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_fixed(x, 2);
}

}  // namespace

std::string ecd_to_json(const EcdReport& r) {
  ordered_json j;
  j["subject_id"] = r.subject_id;
  j["t"] = series(r.t);
  ordered_json panels;
  panels["SPEED"] = series(r.speed);
  panels["FUEL"] = series(r.fuel);
  panels["DISTANCE"] = series(r.distance);
  if (!r.front_gap.empty()) {
    panels["SPACE_SAFETY"] = {{"ideal", series(r.space_ideal)}, {"actual", series(r.space_actual)}};
    panels["SAFETY_FRONT"] = {{"gap", series(r.front_gap)}, {"threshold", series(r.front_threshold)}};
  }
  panels["SAFETY_REAR"] = series(r.rear_extension);
  j["panels"] = panels;
  j["notices"] = r.notices;
  return j.dump() + "\n";
}

std::string render_svg(const EcdReport& r) {
  if (r.t.empty()) throw Error(ErrorKind::InvalidArgument, "empty report");
  const std::vector<Panel> panels = {
      {"speed", "SPEED", "m/s", {{&r.speed, "series"}}},
      {"fuel", "FUEL", "kW", {{&r.fuel, "series"}}},
      {"distance", "DISTANCE", "m", {{&r.distance, "series"}}},
      {"space-safety", "SPACE SAFETY", "m", {{&r.space_ideal, "reference"}, {&r.space_actual, "series"}}},
      {"safety-front", "SAFETY FRONT", "m", {{&r.front_threshold, "threshold"}, {&r.front_gap, "series"}}},
      {"safety-rear", "SAFETY REAR", "m", {{&r.rear_extension, "series"}}},
  };
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(3 * kPanelW, 0)
      << "\" height=\"" << format_fixed(2 * kPanelH + 30, 0) << "\" viewBox=\"0 0 "
      << format_fixed(3 * kPanelW, 0) << " " << format_fixed(2 * kPanelH + 30, 0) << "\">\n";
  out << "<style>"
         ".frame{fill:none;stroke:#999;stroke-width:1}"
         ".series{fill:none;stroke:#1f4e9a;stroke-width:1.2}"
         ".reference{fill:none;stroke:#2e9a3c;stroke-width:1.2;stroke-dasharray:5 3}"
         ".threshold{fill:none;stroke:#c0392b;stroke-width:1.2;stroke-dasharray:5 3}"
         ".title{font:bold 13px sans-serif}"
         ".tick{font:10px sans-serif;text-anchor:end}"
         ".axis{font:10px sans-serif}.end{text-anchor:end}"
         ".na{font:12px sans-serif;fill:#888;text-anchor:middle}"
         "</style>\n";
  out << "<text x=\"8\" y=\"" << format_fixed(2 * kPanelH + 20, 0) << "\" class=\"axis\">"
      << xml_escape(r.subject_id) << "</text>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    draw_panel(out, panels[i], r.t, static_cast<int>(i % 3), static_cast<int>(i / 3));
  out << "</svg>\n";
  return out.str();
}

std::string format_t_cell(double t, int df, double p) {
  std::string ps;
  if (p < 0.001) {
    ps = "<.001";
  } else if (p >= 1.0) {
    ps = "1.000";
  } else {
    ps = format_fixed(p, 3);
    if (ps.rfind("0.", 0) == 0) ps.erase(0, 1);
  }
  return fixed2(t) + " (" + std::to_string(df) + ", " + ps + ")";
}

std::string render_table(std::span<const ComparisonRow> rows) {
  if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "no comparison rows");
  std::vector<std::array<std::string, 5>> cells;
  cells.push_back({"Variable", "Pretest M (SD)", "Posttest M (SD)", "Paired t (df, p)", "Cohen d"});
  for (const auto& r : rows) {
    cells.push_back({r.variable, fixed2(r.pre_mean) + " (" + fixed2(r.pre_sd) + ")",
                     fixed2(r.post_mean) + " (" + fixed2(r.post_sd) + ")",
                     format_t_cell(r.t, r.df, r.p), fixed2(r.cohen_d)});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : cells)
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < 5; ++c) {
      const auto& s = cells[i][c];
      const std::string pad(width[c] - s.size(), ' ');
      line += c == 0 ? s + pad : pad + s;
      if (c + 1 < 5) line += "  ";
    }
    out += line + "\n";
    if (i == 0) out += std::string(line.size(), '-') + "\n";
  }
  return out;
}

std::string table_to_csv(std::span<const ComparisonRow> rows) {
  std::string out = "variable,pre_mean,pre_sd,post_mean,post_sd,t,df,p,cohen_d\n";
  for (const auto& r : rows) {
    out += r.variable + ',' + format_sig6(r.pre_mean) + ',' + format_sig6(r.pre_sd) + ',' +
           format_sig6(r.post_mean) + ',' + format_sig6(r.post_sd) + ',' + format_sig6(r.t) + ',' +
           std::to_string(r.df) + ',' + format_sig6(r.p) + ',' + format_sig6(r.cohen_d) + '\n';
  }
  return out;
}

std::vector<ComparisonRow> table_from_csv(std::string_view csv) {
  auto lines = split(csv, '\n');
  if (lines.empty() || trim(lines[0]) != "variable,pre_mean,pre_sd,post_mean,post_sd,t,df,p,cohen_d")
    throw Error(ErrorKind::Schema, "comparison CSV: unexpected header");
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    ComparisonRow r;
    double df = 0.0;
    const bool ok = f.size() == 9 && parse_double(f[1], r.pre_mean) && parse_double(f[2], r.pre_sd) &&
                    parse_double(f[3], r.post_mean) && parse_double(f[4], r.post_sd) &&
                    parse_double(f[5], r.t) && parse_double(f[6], df) && parse_double(f[7], r.p) &&
                    parse_double(f[8], r.cohen_d);
    if (!ok) throw Error(ErrorKind::Schema, "comparison CSV: malformed row " + std::to_string(i + 1));
    r.variable = std::string(f[0]);
    r.df = static_cast<int>(df);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wavesim
