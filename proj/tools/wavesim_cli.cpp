// wavesim command-line front end. Talks to the library only through the C API.
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavesim/wavesim.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitData = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(wavesim_status s) {
  switch (s) {
    case WAVESIM_OK: return kExitOk;
    case WAVESIM_INVALID_ARGUMENT:
    case WAVESIM_SCHEMA:
    case WAVESIM_IO: return kExitInput;
    case WAVESIM_DATA:
    case WAVESIM_UNDEFINED: return kExitData;
    default: return kExitInternal;
  }
}

void check(wavesim_status s, const std::string& context) {
  if (s != WAVESIM_OK) throw Failure{exit_code(s), context + ": " + wavesim_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { wavesim_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
};
using Scenario = Handle<wavesim_scenario, wavesim_scenario_free>;
using Run = Handle<wavesim_run, wavesim_run_free>;
using Log = Handle<wavesim_log, wavesim_log_free>;
using Params = Handle<wavesim_params, wavesim_params_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInput, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Failure{kExitInternal, "sha256 failed"};
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Failure{kExitInput, "cannot create output directory '" + dir.string() + "'"};
}

/// Writes through a temporary file and renames it into place.
void write_atomic(const fs::path& path, const std::string& data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitInput, "cannot write '" + path.string() + "'"};
    out << data;
    out.flush();
    if (!out) throw Failure{kExitInput, "cannot write '" + path.string() + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Failure{kExitInput, "cannot write '" + path.string() + "': " + ec.message()};
}

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> args) {
    j_["command"] = std::move(command);
    j_["arguments"] = std::move(args);
    j_["tool_version"] = wavesim_version();
    j_["config_paths"] = ordered_json::array();
    j_["seed"] = nullptr;
    j_["inputs"] = ordered_json::array();
    j_["outputs"] = ordered_json::array();
  }
  void config(const std::string& path) { j_["config_paths"].push_back(path); }
  void seed(std::uint64_t s) { j_["seed"] = s; }
  void input(const std::string& path, const std::string& content) {
    j_["inputs"].push_back({{"path", path}, {"sha256", sha256(content)}});
  }
  /// Records and writes an output file.
  void output(const fs::path& path, const std::string& content) {
    write_atomic(path, content);
    j_["outputs"].push_back({{"path", path.string()}, {"sha256", sha256(content)}});
  }
  void write(const fs::path& path) const { write_atomic(path, j_.dump(2) + "\n"); }

 private:
  ordered_json j_;
};

Params load_params(const std::string& flag, Manifest* manifest) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("WAVESIM_PARAMS"); env && *env) path = env;
  }
  Params p;
  if (path.empty()) {
    check(wavesim_params_default(&p.p), "params");
    return p;
  }
  const auto text = read_file(path);
  if (manifest) {
    manifest->config(path);
    manifest->input(path, text);
  }
  check(wavesim_params_parse(text.c_str(), &p.p), path);
  return p;
}

Log load_log(const std::string& path, double loop_length, Manifest* manifest) {
  const auto text = read_file(path);
  if (manifest) manifest->input(path, text);
  Log log;
  check(wavesim_log_parse(text.c_str(), loop_length, 4.5, &log.p), path);
  return log;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::vector<std::string> scenarios;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("simulate", argv);
  std::vector<Scenario> scenarios;
  for (const auto& path : a.scenarios) {
    const auto text = read_file(path);
    manifest.config(path);
    manifest.input(path, text);
    Scenario s;
    check(wavesim_scenario_parse(text.c_str(), &s.p), path);
    if (a.seed) check(wavesim_scenario_set_seed(s.p, *a.seed), path);
    scenarios.push_back(std::move(s));
  }
  if (a.seed) manifest.seed(*a.seed);

  std::vector<const wavesim_scenario*> raw;
  for (const auto& s : scenarios) raw.push_back(s.p);
  std::vector<wavesim_run*> runs(raw.size(), nullptr);
  check(wavesim_simulate_batch(raw.data(), raw.size(), a.jobs, runs.data()), "simulate");
  std::vector<Run> owned(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) owned[i].p = runs[i];

  const fs::path out(a.out);
  make_dir(out);
  for (std::size_t i = 0; i < owned.size(); ++i) {
    fs::path dir = out;
    if (owned.size() > 1) {
      dir = out / fs::path(a.scenarios[i]).stem();
      make_dir(dir);
    }
    CString csv;
    CString events;
    CString config;
    check(wavesim_run_log_csv(owned[i].p, &csv.p), a.scenarios[i]);
    check(wavesim_run_events_json(owned[i].p, &events.p), a.scenarios[i]);
    check(wavesim_scenario_to_config(scenarios[i].p, &config.p), a.scenarios[i]);
    manifest.output(dir / "log.csv", csv.str());
    manifest.output(dir / "events.json", events.str());
    manifest.output(dir / "scenario.cfg", config.str());
  }
  manifest.write(out / "manifest.json");
  return kExitOk;
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::string log;
  double loop_length = 0.0;
  std::string params;
  std::string out;
  std::string label;
};

void print_notices(const std::string& json_text) {
  const auto j = ordered_json::parse(json_text);
  if (j.contains("notices"))
    for (const auto& n : j["notices"]) std::cerr << "notice: " << n.get<std::string>() << "\n";
  for (const char* section : {"vehicles", "laps"}) {
    if (!j.contains(section)) continue;
    for (const auto& r : j[section]) {
      if (!r.contains("notices")) continue;
      for (const auto& n : r["notices"])
        std::cerr << "notice: " << r["vehicle_id"].get<std::string>() << " lap "
                  << r["lap"].get<int>() << ": " << n.get<std::string>() << "\n";
    }
  }
}

int cmd_analyze(const AnalyzeArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("analyze", argv);
  auto params = load_params(a.params, &manifest);
  auto log = load_log(a.log, a.loop_length, &manifest);
  const std::string label = a.label.empty() ? fs::path(a.log).stem().string() : a.label;
  CString json;
  CString csv;
  check(wavesim_analyze(log.p, params.p, label.c_str(), &json.p, &csv.p), a.log);
  print_notices(json.str());
  if (a.out.empty()) {
    std::cout << json.str();
    return kExitOk;
  }
  const fs::path out(a.out);
  make_dir(out);
  const auto stem = fs::path(a.log).stem().string();
  manifest.output(out / (stem + ".json"), json.str());
  manifest.output(out / (stem + ".csv"), csv.str());
  manifest.write(out / (stem + ".manifest.json"));
  return kExitOk;
}

// compare -------------------------------------------------------------------

struct CompareArgs {
  std::string pre;
  std::string post;
  std::string vars = "speed_mean,speed_sd,gap_mean,gap_sd,timegap_mean,timegap_sd,min_ttc,pfs_mean,energy";
  std::string vehicles;
  std::string csv;
};

struct MetricsDir {
  std::vector<std::string> names;
  std::vector<std::string> texts;
};

MetricsDir read_metrics_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Failure{kExitInput, "not a directory: '" + dir + "'"};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    if (name == "manifest.json" || name.ends_with(".manifest.json") || name == "events.json") continue;
    files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  MetricsDir out;
  for (const auto& f : files) {
    out.names.push_back(f.stem().string());
    out.texts.push_back(read_file(f.string()));
  }
  if (out.names.empty()) throw Failure{kExitInput, "no metrics files in '" + dir + "'"};
  return out;
}

int cmd_compare(const CompareArgs& a) {
  const auto pre = read_metrics_dir(a.pre);
  const auto post = read_metrics_dir(a.post);
  auto ptrs = [](const std::vector<std::string>& v) {
    std::vector<const char*> out;
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
  };
  const auto pre_n = ptrs(pre.names);
  const auto pre_j = ptrs(pre.texts);
  const auto post_n = ptrs(post.names);
  const auto post_j = ptrs(post.texts);
  CString text;
  CString csv;
  CString warnings;
  check(wavesim_compare(pre_n.data(), pre_j.data(), pre_n.size(), post_n.data(), post_j.data(),
                        post_n.size(), a.vars.c_str(), a.vehicles.empty() ? nullptr : a.vehicles.c_str(),
                        &text.p, &csv.p, &warnings.p),
        "compare");
  std::istringstream w(warnings.str());
  std::size_t count = 0;
  for (std::string line; std::getline(w, line);) {
    std::cerr << "warning: " << line << "\n";
    ++count;
  }
  if (count) std::cerr << count << " warning(s)\n";
  std::cout << text.str();
  if (!a.csv.empty()) write_atomic(a.csv, csv.str());
  return kExitOk;
}

// ecd -----------------------------------------------------------------------

struct EcdArgs {
  std::string log;
  std::string vehicle;
  std::string out;
  double loop_length = 0.0;
  std::string params;
  std::size_t n_virtual = 8;
};

int cmd_ecd(const EcdArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("ecd", argv);
  auto params = load_params(a.params, &manifest);
  auto log = load_log(a.log, a.loop_length, &manifest);
  CString json;
  CString svg;
  check(wavesim_ecd(log.p, a.vehicle.c_str(), params.p, a.n_virtual, &json.p, &svg.p), a.log);
  const auto j = ordered_json::parse(json.str());
  for (const auto& n : j["notices"]) std::cerr << "notice: " << n.get<std::string>() << "\n";
  const fs::path out(a.out);
  make_dir(out);
  manifest.output(out / ("ecd_" + a.vehicle + ".json"), json.str());
  manifest.output(out / ("ecd_" + a.vehicle + ".svg"), svg.str());
  manifest.write(out / ("ecd_" + a.vehicle + ".manifest.json"));
  return kExitOk;
}

// greenwave -----------------------------------------------------------------

struct GreenwaveArgs {
  std::string signals;
  double vmin = 0.0;
  double vmax = 0.0;
  double resolution = 0.5;
  double start_s = 0.0;
  double start_t = 0.0;
};

std::string sig6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int cmd_greenwave(const GreenwaveArgs& a) {
  const auto text = read_file(a.signals);
  double* speeds = nullptr;
  std::size_t count = 0;
  check(wavesim_greenwave(text.c_str(), a.vmin, a.vmax, a.start_s, a.start_t, a.resolution, &speeds,
                          &count),
        a.signals);
  std::unique_ptr<double, void (*)(double*)> guard(speeds, wavesim_doubles_free);
  if (count == 0) std::cerr << "notice: no constant speed passes every signal on green\n";
  for (std::size_t i = 0; i < count; ++i) std::cout << sig6(speeds[i]) << "\n";
  return kExitOk;
}

// template ------------------------------------------------------------------

int cmd_template(const std::string& name, bool list, const std::string& out) {
  if (list || name.empty()) {
    CString names;
    check(wavesim_template_names(&names.p), "template");
    std::cout << names.str();
    return kExitOk;
  }
  Scenario s;
  check(wavesim_scenario_template(name.c_str(), &s.p), "template");
  CString config;
  check(wavesim_scenario_to_config(s.p, &config.p), name);
  if (out.empty()) {
    std::cout << config.str();
  } else {
    write_atomic(out, config.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Car-following platoon simulation and trajectory analytics"};
  app.set_version_flag("--version", std::string(wavesim_version()));
  app.require_subcommand(1);
  std::vector<std::string> args(argv + 1, argv + argc);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run scenario files and write logs");
  simulate->add_option("--scenario", sim.scenarios, "Scenario config file (repeatable)")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--jobs", sim.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Summarize a trajectory log");
  analyze->add_option("--log", an.log, "Trajectory CSV")->required();
  analyze->add_option("--loop-length", an.loop_length, "Loop length in m (0 = open road)");
  analyze->add_option("--params", an.params, "Analysis params file");
  analyze->add_option("--out", an.out, "Output directory (default: JSON on stdout)");
  analyze->add_option("--label", an.label, "Summary label (default: log file stem)");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Paired comparison of metrics directories");
  compare->add_option("--pre", cmp.pre, "Directory of pretest metrics JSON")->required();
  compare->add_option("--post", cmp.post, "Directory of posttest metrics JSON")->required();
  compare->add_option("--vars", cmp.vars, "Comma separated metric names");
  compare->add_option("--vehicles", cmp.vehicles, "Comma separated vehicle ids to keep");
  compare->add_option("--csv", cmp.csv, "Also write the table as CSV");

  EcdArgs ec;
  auto* ecd = app.add_subcommand("ecd", "Six-panel report for one vehicle");
  ecd->add_option("--log", ec.log, "Trajectory CSV")->required();
  ecd->add_option("--vehicle", ec.vehicle, "Subject vehicle id")->required();
  ecd->add_option("--out", ec.out, "Output directory")->required();
  ecd->add_option("--loop-length", ec.loop_length, "Loop length in m (0 = open road)");
  ecd->add_option("--params", ec.params, "Analysis params file");
  ecd->add_option("--virtual", ec.n_virtual, "Number of virtual followers");

  GreenwaveArgs gw;
  auto* greenwave = app.add_subcommand("greenwave", "Constant speeds that pass every signal on green");
  greenwave->add_option("--signals", gw.signals, "Signal plan file")->required();
  greenwave->add_option("--vmin", gw.vmin, "Lowest candidate speed, m/s")->required();
  greenwave->add_option("--vmax", gw.vmax, "Highest candidate speed, m/s")->required();
  greenwave->add_option("--resolution", gw.resolution, "Grid step, m/s");
  greenwave->add_option("--start-s", gw.start_s, "Start position, m");
  greenwave->add_option("--start-t", gw.start_t, "Start time, s");

  std::string tmpl_name;
  std::string tmpl_out;
  bool tmpl_list = false;
  auto* tmpl = app.add_subcommand("template", "Print a built-in scenario as a config file");
  tmpl->add_option("name", tmpl_name, "Template name");
  tmpl->add_option("--out", tmpl_out, "Write to this file instead of stdout");
  tmpl->add_flag("--list", tmpl_list, "List template names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*simulate) return cmd_simulate(sim, args);
    if (*analyze) return cmd_analyze(an, args);
    if (*compare) return cmd_compare(cmp);
    if (*ecd) return cmd_ecd(ec, args);
    if (*greenwave) return cmd_greenwave(gw);
    if (*tmpl) return cmd_template(tmpl_name, tmpl_list, tmpl_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
