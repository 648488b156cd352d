#include "wavesim/config.hpp"

#include <boost/property_tree/info_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>

#include "wavesim/error.hpp"
#include "wavesim/format.hpp"

namespace wavesim {

namespace pt = boost::property_tree;

namespace {

pt::ptree read_tree(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_info(in, tree);
  } catch (const pt::info_parser_error& e) {
    throw Error(ErrorKind::Schema, "config line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Read access to one section that remembers its path and rejects stray keys.
class Section {
 public:
  Section(const pt::ptree& node, std::string path) : node_(node), path_(std::move(path)) {}

  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, child] : node_) {
      if (!ok.count(key)) throw Error(ErrorKind::Schema, "unknown key '" + join(path_, key) + "'");
    }
    if (!node_.data().empty())
      throw Error(ErrorKind::Schema, "section '" + path_ + "' must not carry a value");
  }

  bool has(const char* key) const { return node_.count(key) > 0; }

  void unique(const char* key) const {
    if (node_.count(key) > 1) throw Error(ErrorKind::Schema, "duplicate key '" + join(path_, key) + "'");
  }

  std::string text(const char* key, const std::string& fallback) const {
    unique(key);
    auto it = node_.find(key);
    if (it == node_.not_found()) return fallback;
    if (!it->second.empty())
      throw Error(ErrorKind::Schema, "key '" + join(path_, key) + "' must be a value, not a section");
    return it->second.data();
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const auto raw = text(key, "");
    double x = 0.0;
    if (!parse_double(trim(raw), x) || !std::isfinite(x))
      throw Error(ErrorKind::Schema, "key '" + join(path_, key) + "': not a number: '" + raw + "'");
    return x;
  }

  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto raw = text(key, "");
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw Error(ErrorKind::Schema, "key '" + join(path_, key) + "': expected true or false");
  }

  std::uint64_t integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto raw = text(key, "");
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), x);
    if (ec != std::errc{} || ptr != raw.data() + raw.size())
      throw Error(ErrorKind::Schema, "key '" + join(path_, key) + "': expected a non-negative integer");
    return x;
  }

  Section child(const char* key) const {
    unique(key);
    auto it = node_.find(key);
    static const pt::ptree empty;
    return Section(it == node_.not_found() ? empty : it->second, join(path_, key));
  }

  std::vector<Section> children(const char* key) const {
    std::vector<Section> out;
    std::size_t i = 0;
    for (const auto& [k, child] : node_) {
      if (k != key) continue;
      out.emplace_back(child, join(path_, k) + "[" + std::to_string(++i) + "]");
    }
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  const pt::ptree& node_;
  std::string path_;
};

std::string num(double x) { return format_shortest(x); }

ProfileKind profile_kind(const std::string& s, const std::string& path) {
  if (s == "sinusoid") return ProfileKind::Sinusoid;
  if (s == "trapezoid") return ProfileKind::Trapezoid;
  if (s == "stop_and_go") return ProfileKind::StopAndGo;
  throw Error(ErrorKind::Schema, "key '" + path + ".kind': unknown profile '" + s + "'");
}

ControllerKind controller_kind(const std::string& s, const std::string& path) {
  for (auto k : {ControllerKind::DdIdm, ControllerKind::AccCtg, ControllerKind::DiInertia,
                 ControllerKind::Scripted})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::Schema, "key '" + path + ".kind': unknown controller '" + s + "'");
}

LeaderProfile read_profile(Section sec) {
  sec.allow({"kind", "v_min", "v_max", "period", "duration"});
  LeaderProfile p;
  p.kind = profile_kind(sec.text("kind", "sinusoid"), sec.path());
  p.v_min = sec.number("v_min", p.v_min);
  p.v_max = sec.number("v_max", p.v_max);
  p.period = sec.number("period", p.period);
  p.duration = sec.number("duration", p.duration);
  return p;
}

SafetyParams read_safety(Section sec) {
  sec.allow({"tau", "b_ego_comf", "b_ego_max", "b_lead_max", "d1"});
  SafetyParams p;
  p.tau = sec.number("tau", p.tau);
  p.b_ego_comf = sec.number("b_ego_comf", p.b_ego_comf);
  p.b_ego_max = sec.number("b_ego_max", p.b_ego_max);
  p.b_lead_max = sec.number("b_lead_max", p.b_lead_max);
  p.d1 = sec.number("d1", p.d1);
  return p;
}

IdmParams read_idm(Section sec) {
  sec.allow({"v0", "T", "s0", "a_max", "b", "b_max_phys"});
  IdmParams p;
  p.v0 = sec.number("v0", p.v0);
  p.T = sec.number("T", p.T);
  p.s0 = sec.number("s0", p.s0);
  p.a_max = sec.number("a_max", p.a_max);
  p.b = sec.number("b", p.b);
  p.b_max_phys = sec.number("b_max_phys", p.b_max_phys);
  return p;
}

AccParams read_acc(Section sec) {
  sec.allow({"h", "d0", "k_g", "k_v", "a_max", "b_max_phys"});
  AccParams p;
  p.h = sec.number("h", p.h);
  p.d0 = sec.number("d0", p.d0);
  p.k_g = sec.number("k_g", p.k_g);
  p.k_v = sec.number("k_v", p.k_v);
  p.a_max = sec.number("a_max", p.a_max);
  p.b_max_phys = sec.number("b_max_phys", p.b_max_phys);
  return p;
}

DiParams read_di(Section sec) {
  sec.allow({"window", "k_i", "a_cap", "k_s", "b_relax", "b_max_phys", "anchor_time",
             "anchor_limit", "anchor_margin", "buffer_factor", "exclusion_radius", "safety"});
  DiParams p;
  p.window = sec.number("window", p.window);
  p.k_i = sec.number("k_i", p.k_i);
  p.a_cap = sec.number("a_cap", p.a_cap);
  p.k_s = sec.number("k_s", p.k_s);
  p.b_relax = sec.number("b_relax", p.b_relax);
  p.b_max_phys = sec.number("b_max_phys", p.b_max_phys);
  p.anchor_time = sec.number("anchor_time", p.anchor_time);
  p.anchor_limit = sec.number("anchor_limit", p.anchor_limit);
  p.anchor_margin = sec.number("anchor_margin", p.anchor_margin);
  p.buffer_factor = sec.number("buffer_factor", p.buffer_factor);
  p.exclusion_radius = sec.number("exclusion_radius", p.exclusion_radius);
  p.safety = read_safety(sec.child("safety"));
  return p;
}

ControllerSpec read_follower(Section sec) {
  sec.allow({"kind", "noise_sd", "idm", "acc", "di", "script"});
  ControllerSpec c;
  c.kind = controller_kind(sec.text("kind", "DD_IDM"), sec.path());
  c.noise_sd = sec.number("noise_sd", 0.0);
  const char* own = nullptr;
  switch (c.kind) {
    case ControllerKind::DdIdm: own = "idm"; c.idm = read_idm(sec.child("idm")); break;
    case ControllerKind::AccCtg: own = "acc"; c.acc = read_acc(sec.child("acc")); break;
    case ControllerKind::DiInertia: own = "di"; c.di = read_di(sec.child("di")); break;
    case ControllerKind::Scripted: own = "script"; c.script = read_profile(sec.child("script")); break;
  }
  for (const char* other : {"idm", "acc", "di", "script"})
    if (std::string(other) != own && sec.has(other))
      throw Error(ErrorKind::Schema, "key '" + join(sec.path(), other) + "' does not apply to " +
                                         to_string(c.kind));
  return c;
}

Signal read_signal(Section sec) {
  sec.allow({"position", "cycle", "green_start", "green_end"});
  Signal s;
  s.position = sec.number("position", s.position);
  s.cycle = sec.number("cycle", s.cycle);
  s.green_start = sec.number("green_start", s.green_start);
  s.green_end = sec.number("green_end", s.green_end);
  return s;
}

void put(std::ostringstream& out, int indent, const char* key, const std::string& value) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << key << ' ' << value << '\n';
}

void open(std::ostringstream& out, int indent, const char* key) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad << key << '\n' << pad << "{\n";
}

void close(std::ostringstream& out, int indent) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "}\n";
}

void write_profile(std::ostringstream& out, int d, const char* key, const LeaderProfile& p) {
  open(out, d, key);
  put(out, d + 1, "kind", to_string(p.kind));
  put(out, d + 1, "v_min", num(p.v_min));
  put(out, d + 1, "v_max", num(p.v_max));
  put(out, d + 1, "period", num(p.period));
  put(out, d + 1, "duration", num(p.duration));
  close(out, d);
}

void write_safety(std::ostringstream& out, int d, const SafetyParams& p) {
  open(out, d, "safety");
  put(out, d + 1, "tau", num(p.tau));
  put(out, d + 1, "b_ego_comf", num(p.b_ego_comf));
  put(out, d + 1, "b_ego_max", num(p.b_ego_max));
  put(out, d + 1, "b_lead_max", num(p.b_lead_max));
  put(out, d + 1, "d1", num(p.d1));
  close(out, d);
}

void write_follower(std::ostringstream& out, const ControllerSpec& c) {
  open(out, 0, "follower");
  put(out, 1, "kind", to_string(c.kind));
  put(out, 1, "noise_sd", num(c.noise_sd));
  switch (c.kind) {
    case ControllerKind::DdIdm:
      open(out, 1, "idm");
      put(out, 2, "v0", num(c.idm.v0));
      put(out, 2, "T", num(c.idm.T));
      put(out, 2, "s0", num(c.idm.s0));
      put(out, 2, "a_max", num(c.idm.a_max));
      put(out, 2, "b", num(c.idm.b));
      put(out, 2, "b_max_phys", num(c.idm.b_max_phys));
      close(out, 1);
      break;
    case ControllerKind::AccCtg:
      open(out, 1, "acc");
      put(out, 2, "h", num(c.acc.h));
      put(out, 2, "d0", num(c.acc.d0));
      put(out, 2, "k_g", num(c.acc.k_g));
      put(out, 2, "k_v", num(c.acc.k_v));
      put(out, 2, "a_max", num(c.acc.a_max));
      put(out, 2, "b_max_phys", num(c.acc.b_max_phys));
      close(out, 1);
      break;
    case ControllerKind::DiInertia:
      open(out, 1, "di");
      put(out, 2, "window", num(c.di.window));
      put(out, 2, "k_i", num(c.di.k_i));
      put(out, 2, "a_cap", num(c.di.a_cap));
      put(out, 2, "k_s", num(c.di.k_s));
      put(out, 2, "b_relax", num(c.di.b_relax));
      put(out, 2, "b_max_phys", num(c.di.b_max_phys));
      put(out, 2, "anchor_time", num(c.di.anchor_time));
      put(out, 2, "anchor_limit", num(c.di.anchor_limit));
      put(out, 2, "anchor_margin", num(c.di.anchor_margin));
      put(out, 2, "buffer_factor", num(c.di.buffer_factor));
      put(out, 2, "exclusion_radius", num(c.di.exclusion_radius));
      write_safety(out, 2, c.di.safety);
      close(out, 1);
      break;
    case ControllerKind::Scripted:
      write_profile(out, 1, "script", c.script);
      break;
  }
  close(out, 0);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const auto tree = read_tree(text);
  Section root(tree, "");
  root.allow({"name", "loop_length", "dt", "duration", "seed", "vehicle_length",
              "signal_compliance", "leader", "follower", "signal", "cap", "initial_gaps"});
  Scenario s;
  s.name = root.text("name", "");
  s.loop_length = root.number("loop_length", s.loop_length);
  s.dt = root.number("dt", s.dt);
  s.duration = root.number("duration", s.duration);
  s.seed = root.integer("seed", s.seed);
  s.vehicle_length = root.number("vehicle_length", s.vehicle_length);
  s.signal_compliance = root.flag("signal_compliance", s.signal_compliance);
  if (!root.has("leader")) throw Error(ErrorKind::Schema, "missing section 'leader'");
  s.leader = read_profile(root.child("leader"));
  for (auto& f : root.children("follower")) s.followers.push_back(read_follower(f));
  for (auto& sig : root.children("signal")) s.signals.push_back(read_signal(sig));
  for (auto& c : root.children("cap")) {
    c.allow({"from", "to", "cap"});
    s.speed_caps.push_back({c.number("from", 0.0), c.number("to", 0.0), c.number("cap", 0.0)});
  }
  if (root.has("initial_gaps")) {
    auto gaps = root.child("initial_gaps");
    gaps.allow({"gap"});
    std::size_t k = 0;
    for (const auto& [key, child] : tree.get_child("initial_gaps")) {
      double x = 0.0;
      const auto path = "initial_gaps.gap[" + std::to_string(++k) + "]";
      if (!child.empty() || !parse_double(trim(child.data()), x))
        throw Error(ErrorKind::Schema, "key '" + path + "': not a number");
      s.initial_gaps.push_back(x);
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, std::string("invalid scenario: ") + e.what());
  }
  return s;
}

std::string scenario_to_config(const Scenario& s) {
  std::ostringstream out;
  put(out, 0, "name", s.name.empty() ? "\"\"" : s.name);
  put(out, 0, "loop_length", num(s.loop_length));
  put(out, 0, "dt", num(s.dt));
  put(out, 0, "duration", num(s.duration));
  put(out, 0, "seed", std::to_string(s.seed));
  put(out, 0, "vehicle_length", num(s.vehicle_length));
  put(out, 0, "signal_compliance", s.signal_compliance ? "true" : "false");
  write_profile(out, 0, "leader", s.leader);
  for (const auto& f : s.followers) write_follower(out, f);
  for (const auto& c : s.speed_caps) {
    open(out, 0, "cap");
    put(out, 1, "from", num(c.from));
    put(out, 1, "to", num(c.to));
    put(out, 1, "cap", num(c.cap));
    close(out, 0);
  }
  for (const auto& sig : s.signals) {
    open(out, 0, "signal");
    put(out, 1, "position", num(sig.position));
    put(out, 1, "cycle", num(sig.cycle));
    put(out, 1, "green_start", num(sig.green_start));
    put(out, 1, "green_end", num(sig.green_end));
    close(out, 0);
  }
  if (!s.initial_gaps.empty()) {
    open(out, 0, "initial_gaps");
    for (double g : s.initial_gaps) put(out, 1, "gap", num(g));
    close(out, 0);
  }
  return out.str();
}

AnalysisParams parse_params(std::string_view text) {
  const auto tree = read_tree(text);
  Section root(tree, "");
  root.allow({"safety", "energy"});
  AnalysisParams p;
  p.safety = read_safety(root.child("safety"));
  auto e = root.child("energy");
  e.allow({"mass", "f0", "f1", "f2", "grade"});
  p.energy.mass = e.number("mass", p.energy.mass);
  p.energy.f0 = e.number("f0", p.energy.f0);
  p.energy.f1 = e.number("f1", p.energy.f1);
  p.energy.f2 = e.number("f2", p.energy.f2);
  const double grade = e.number("grade", 0.0);
  if (grade != 0.0) p.energy.grade = [grade](double) { return grade; };
  try {
    p.safety.validate();
    p.energy.validate();
  } catch (const Error& err) {
    throw Error(ErrorKind::Schema, std::string("invalid params: ") + err.what());
  }
  return p;
}

std::string params_to_config(const AnalysisParams& p) {
  std::ostringstream out;
  write_safety(out, 0, p.safety);
  open(out, 0, "energy");
  put(out, 1, "mass", num(p.energy.mass));
  put(out, 1, "f0", num(p.energy.f0));
  put(out, 1, "f1", num(p.energy.f1));
  put(out, 1, "f2", num(p.energy.f2));
  put(out, 1, "grade", num(p.energy.grade_at(0.0)));
  close(out, 0);
  return out.str();
}

std::vector<Signal> parse_signals(std::string_view text) {
  const auto tree = read_tree(text);
  Section root(tree, "");
  root.allow({"signal"});
  std::vector<Signal> out;
  for (auto& sec : root.children("signal")) {
    out.push_back(read_signal(sec));
    try {
      out.back().validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::Schema, sec.path() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace wavesim
