#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "wavesim/wavesim.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  wavesim_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(wavesim_version()), 0u);
  EXPECT_STREQ(wavesim_status_name(WAVESIM_DATA), "data error");
}

TEST(CApi, TemplateSimulateAnalyze) {
  wavesim_scenario* sc = nullptr;
  ASSERT_EQ(wavesim_scenario_template("module1_waves", &sc), WAVESIM_OK);
  ASSERT_EQ(wavesim_scenario_set_seed(sc, 9), WAVESIM_OK);
  uint64_t seed = 0;
  EXPECT_EQ(wavesim_scenario_seed(sc, &seed), WAVESIM_OK);
  EXPECT_EQ(seed, 9u);

  wavesim_run* run = nullptr;
  ASSERT_EQ(wavesim_simulate(sc, &run), WAVESIM_OK);
  char* csv = nullptr;
  ASSERT_EQ(wavesim_run_log_csv(run, &csv), WAVESIM_OK);
  const auto text = take(csv);
  EXPECT_EQ(text.rfind("t,vehicle_id,s,v\n", 0), 0u);

  wavesim_log* log = nullptr;
  ASSERT_EQ(wavesim_run_log(run, &log), WAVESIM_OK);
  size_t n = 0;
  EXPECT_EQ(wavesim_log_vehicle_count(log, &n), WAVESIM_OK);
  EXPECT_EQ(n, 6u);

  wavesim_params* params = nullptr;
  ASSERT_EQ(wavesim_params_default(&params), WAVESIM_OK);
  char *json = nullptr, *mcsv = nullptr;
  ASSERT_EQ(wavesim_analyze(log, params, "pre", &json, &mcsv), WAVESIM_OK);
  const auto js = take(json);
  take(mcsv);
  EXPECT_NE(js.find("\"speed_sd\""), std::string::npos);

  const char* names[] = {"a"};
  const char* docs[] = {js.c_str()};
  char *table = nullptr, *tcsv = nullptr, *warn = nullptr;
  ASSERT_EQ(wavesim_compare(names, docs, 1, names, docs, 1, "speed_sd,gap_mean", nullptr, &table, &tcsv,
                            &warn),
            WAVESIM_OK);
  EXPECT_NE(take(table).find("speed_sd"), std::string::npos);
  take(tcsv);
  take(warn);

  char *ej = nullptr, *svg = nullptr;
  ASSERT_EQ(wavesim_ecd(log, "v2", params, 2, &ej, &svg), WAVESIM_OK);
  EXPECT_NE(take(svg).find("</svg>"), std::string::npos);
  take(ej);

  wavesim_params_free(params);
  wavesim_log_free(log);
  wavesim_run_free(run);
  wavesim_scenario_free(sc);
}

TEST(CApi, ErrorCodes) {
  wavesim_scenario* sc = nullptr;
  EXPECT_EQ(wavesim_scenario_template("nope", &sc), WAVESIM_INVALID_ARGUMENT);
  EXPECT_EQ(sc, nullptr);
  EXPECT_NE(std::string(wavesim_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(wavesim_scenario_parse("leader { v_max 10 }\nwhat 1\n", &sc), WAVESIM_SCHEMA);
  EXPECT_NE(std::string(wavesim_last_error()).find("what"), std::string::npos);
  EXPECT_EQ(wavesim_scenario_parse(nullptr, &sc), WAVESIM_INVALID_ARGUMENT);
  EXPECT_EQ(wavesim_simulate(nullptr, nullptr), WAVESIM_INVALID_ARGUMENT);

  wavesim_log* log = nullptr;
  EXPECT_EQ(wavesim_log_parse("t,vehicle_id,s\n0,a,0\n", 0, 4.5, &log), WAVESIM_SCHEMA);
  EXPECT_EQ(wavesim_log_parse("t,vehicle_id,s,v\n0,a,0,1\n0,a,1,1\n", 0, 4.5, &log), WAVESIM_DATA);

  const char* names[] = {"a"};
  const char* bad[] = {"{not json"};
  char *t = nullptr, *c = nullptr, *w = nullptr;
  EXPECT_EQ(wavesim_compare(names, bad, 1, names, bad, 1, "speed_sd", nullptr, &t, &c, &w), WAVESIM_SCHEMA);
}

TEST(CApi, Greenwave) {
  double* v = nullptr;
  size_t n = 0;
  ASSERT_EQ(wavesim_greenwave("signal { position 300 }\n", 5, 20, 0, 0, 1, &v, &n), WAVESIM_OK);
  bool has15 = false, has8 = false;
  for (size_t i = 0; i < n; ++i) has15 |= v[i] == 15.0, has8 |= v[i] == 8.0;
  EXPECT_TRUE(has15);
  EXPECT_FALSE(has8);
  wavesim_doubles_free(v);
  EXPECT_EQ(wavesim_greenwave("", 5, 4, 0, 0, 1, &v, &n), WAVESIM_INVALID_ARGUMENT);
}

TEST(CApi, Batch) {
  wavesim_scenario *a = nullptr, *b = nullptr;
  ASSERT_EQ(wavesim_scenario_template("ecd_dd", &a), WAVESIM_OK);
  ASSERT_EQ(wavesim_scenario_template("ecd_di", &b), WAVESIM_OK);
  const wavesim_scenario* both[] = {a, b};
  wavesim_run* runs[2] = {nullptr, nullptr};
  ASSERT_EQ(wavesim_simulate_batch(both, 2, 2, runs), WAVESIM_OK);
  char *x = nullptr, *y = nullptr;
  wavesim_run_log_csv(runs[0], &x);
  wavesim_run_log_csv(runs[1], &y);
  EXPECT_NE(take(x), take(y));
  wavesim_run_free(runs[0]);
  wavesim_run_free(runs[1]);
  wavesim_scenario_free(a);
  wavesim_scenario_free(b);
}
