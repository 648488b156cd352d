#include "wavesim/wavesim.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "wavesim/config.hpp"
#include "wavesim/error.hpp"
#include "wavesim/format.hpp"
#include "wavesim/metrics.hpp"
#include "wavesim/report.hpp"
#include "wavesim/simulation.hpp"
#include "wavesim/stats.hpp"

struct wavesim_scenario {
  wavesim::Scenario value;
};
struct wavesim_run {
  wavesim::PlatoonRun value;
};
struct wavesim_log {
  wavesim::PlatoonLog value;
};
struct wavesim_params {
  wavesim::AnalysisParams value;
};

namespace {

thread_local std::string g_last_error;

wavesim_status to_status(wavesim::ErrorKind kind) {
  switch (kind) {
    case wavesim::ErrorKind::InvalidArgument: return WAVESIM_INVALID_ARGUMENT;
    case wavesim::ErrorKind::Schema: return WAVESIM_SCHEMA;
    case wavesim::ErrorKind::Data: return WAVESIM_DATA;
    case wavesim::ErrorKind::Undefined: return WAVESIM_UNDEFINED;
    case wavesim::ErrorKind::Io: return WAVESIM_IO;
  }
  return WAVESIM_INTERNAL;
}

template <class F>
wavesim_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return WAVESIM_OK;
  } catch (const wavesim::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return WAVESIM_INTERNAL;
}

void need(const void* p, const char* name) {
  if (!p) throw wavesim::Error(wavesim::ErrorKind::InvalidArgument, std::string(name) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::vector<std::string> list(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  for (auto part : wavesim::split(csv, ',')) {
    auto item = wavesim::trim(part);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

wavesim::ObservationSet gather(const char* const* names, const char* const* json, size_t n,
                               const std::vector<std::string>& vehicles) {
  wavesim::ObservationSet out;
  for (size_t i = 0; i < n; ++i) {
    need(names[i], "group name");
    need(json[i], "metrics json");
    wavesim::MetricsSummary summary;
    try {
      summary = wavesim::metrics_from_json(json[i]);
    } catch (const wavesim::Error& e) {
      throw wavesim::Error(e.kind(), std::string(names[i]) + ": " + e.what());
    }
    for (auto& [key, rec] : wavesim::observations(summary, names[i])) {
      if (!vehicles.empty() &&
          std::find(vehicles.begin(), vehicles.end(), std::get<1>(key)) == vehicles.end())
        continue;
      if (!out.emplace(key, rec).second)
        throw wavesim::Error(wavesim::ErrorKind::Data, std::string("duplicate group '") + names[i] + "'");
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* wavesim_version(void) { return WAVESIM_VERSION_STRING; }

const char* wavesim_last_error(void) { return g_last_error.c_str(); }

const char* wavesim_status_name(wavesim_status status) {
  switch (status) {
    case WAVESIM_OK: return "ok";
    case WAVESIM_INVALID_ARGUMENT: return "invalid argument";
    case WAVESIM_SCHEMA: return "schema error";
    case WAVESIM_DATA: return "data error";
    case WAVESIM_UNDEFINED: return "undefined";
    case WAVESIM_IO: return "io error";
    case WAVESIM_INTERNAL: return "internal error";
  }
  return "unknown";
}

void wavesim_string_free(char* s) { std::free(s); }
void wavesim_doubles_free(double* values) { std::free(values); }

wavesim_status wavesim_scenario_parse(const char* text, wavesim_scenario** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new wavesim_scenario{wavesim::parse_scenario(text)};
  });
}

wavesim_status wavesim_scenario_template(const char* name, wavesim_scenario** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = new wavesim_scenario{wavesim::make_template(name)};
  });
}

wavesim_status wavesim_template_names(char** out) {
  return guard([&] {
    need(out, "out");
    std::string s;
    for (const auto& n : wavesim::template_names()) s += n + "\n";
    *out = dup(s);
  });
}

wavesim_status wavesim_scenario_set_seed(wavesim_scenario* scenario, uint64_t seed) {
  return guard([&] {
    need(scenario, "scenario");
    scenario->value.seed = seed;
  });
}

wavesim_status wavesim_scenario_seed(const wavesim_scenario* scenario, uint64_t* seed) {
  return guard([&] {
    need(scenario, "scenario");
    need(seed, "seed");
    *seed = scenario->value.seed;
  });
}

wavesim_status wavesim_scenario_to_config(const wavesim_scenario* scenario, char** out) {
  return guard([&] {
    need(scenario, "scenario");
    need(out, "out");
    *out = dup(wavesim::scenario_to_config(scenario->value));
  });
}

void wavesim_scenario_free(wavesim_scenario* scenario) { delete scenario; }

wavesim_status wavesim_simulate(const wavesim_scenario* scenario, wavesim_run** out) {
  return guard([&] {
    need(scenario, "scenario");
    need(out, "out");
    *out = new wavesim_run{wavesim::simulate(scenario->value)};
  });
}

wavesim_status wavesim_simulate_batch(const wavesim_scenario* const* scenarios, size_t n,
                                      unsigned jobs, wavesim_run** out_runs) {
  return guard([&] {
    need(scenarios, "scenarios");
    need(out_runs, "out_runs");
    std::vector<wavesim::Scenario> batch;
    batch.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      need(scenarios[i], "scenario");
      batch.push_back(scenarios[i]->value);
    }
    auto runs = wavesim::simulate_batch(batch, jobs);
    for (size_t i = 0; i < n; ++i) out_runs[i] = new wavesim_run{std::move(runs[i])};
  });
}

wavesim_status wavesim_run_log_csv(const wavesim_run* run, char** out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    *out = dup(wavesim::write_log_csv(run->value.log));
  });
}

wavesim_status wavesim_run_events_json(const wavesim_run* run, char** out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    *out = dup(wavesim::events_to_json(run->value));
  });
}

wavesim_status wavesim_run_log(const wavesim_run* run, wavesim_log** out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    *out = new wavesim_log{run->value.log};
  });
}

void wavesim_run_free(wavesim_run* run) { delete run; }

wavesim_status wavesim_params_default(wavesim_params** out) {
  return guard([&] {
    need(out, "out");
    *out = new wavesim_params{};
  });
}

wavesim_status wavesim_params_parse(const char* text, wavesim_params** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new wavesim_params{wavesim::parse_params(text)};
  });
}

void wavesim_params_free(wavesim_params* params) { delete params; }

wavesim_status wavesim_log_parse(const char* csv, double loop_length, double vehicle_length,
                                 wavesim_log** out) {
  return guard([&] {
    need(csv, "csv");
    need(out, "out");
    *out = new wavesim_log{wavesim::ingest_log(csv, loop_length, vehicle_length)};
  });
}

wavesim_status wavesim_log_vehicle_count(const wavesim_log* log, size_t* count) {
  return guard([&] {
    need(log, "log");
    need(count, "count");
    *count = log->value.size();
  });
}

void wavesim_log_free(wavesim_log* log) { delete log; }

wavesim_status wavesim_analyze(const wavesim_log* log, const wavesim_params* params,
                               const char* label, char** json, char** csv) {
  return guard([&] {
    need(log, "log");
    need(params, "params");
    need(json, "json");
    auto summary = wavesim::summarize_run(log->value, params->value.safety, params->value.energy);
    if (label) summary.label = label;
    *json = dup(wavesim::metrics_to_json(summary));
    if (csv) *csv = dup(wavesim::metrics_to_csv(summary));
  });
}

wavesim_status wavesim_compare(const char* const* pre_names, const char* const* pre_json,
                               size_t n_pre, const char* const* post_names,
                               const char* const* post_json, size_t n_post, const char* variables,
                               const char* vehicles, char** text, char** csv, char** warnings) {
  return guard([&] {
    need(variables, "variables");
    need(text, "text");
    if (n_pre) {
      need(pre_names, "pre_names");
      need(pre_json, "pre_json");
    }
    if (n_post) {
      need(post_names, "post_names");
      need(post_json, "post_json");
    }
    const auto vars = list(variables);
    const auto ids = list(vehicles);
    const auto pre = gather(pre_names, pre_json, n_pre, ids);
    const auto post = gather(post_names, post_json, n_post, ids);
    const auto result = wavesim::compare(pre, post, vars);
    *text = dup("Comparison (paired t)\n" + wavesim::render_table(result.rows));
    if (csv) *csv = dup(wavesim::table_to_csv(result.rows));
    if (warnings) {
      std::string w;
      for (const auto& m : result.warnings) w += m + "\n";
      *warnings = dup(w);
    }
  });
}

wavesim_status wavesim_ecd(const wavesim_log* log, const char* vehicle, const wavesim_params* params,
                           size_t n_virtual, char** json, char** svg) {
  return guard([&] {
    need(log, "log");
    need(vehicle, "vehicle");
    need(params, "params");
    wavesim::EcdOptions options;
    options.n_virtual = n_virtual;
    const auto report =
        wavesim::ecd(log->value, vehicle, params->value.safety, params->value.energy, options);
    if (json) *json = dup(wavesim::ecd_to_json(report));
    if (svg) *svg = dup(wavesim::render_svg(report));
  });
}

wavesim_status wavesim_greenwave(const char* signals, double v_min, double v_max, double start_s,
                                 double start_t, double resolution, double** speeds, size_t* count) {
  return guard([&] {
    need(signals, "signals");
    need(speeds, "speeds");
    need(count, "count");
    const auto plan = wavesim::parse_signals(signals);
    const auto feasible =
        wavesim::green_wave_speeds(plan, v_min, v_max, start_s, start_t, resolution);
    double* buf = static_cast<double*>(std::malloc((feasible.size() + 1) * sizeof(double)));
    if (!buf) throw std::bad_alloc();
    std::copy(feasible.begin(), feasible.end(), buf);
    *speeds = buf;
    *count = feasible.size();
  });
}

}  // extern "C"
