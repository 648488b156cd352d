#include <gtest/gtest.h>

#include "wavesim/config.hpp"
#include "wavesim/error.hpp"

using namespace wavesim;

namespace {

std::string schema_message(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

}  // namespace

TEST(ScenarioConfig, TemplatesRoundTrip) {
  for (const auto& name : template_names()) {
    auto s = make_template(name);
    s.seed = 12345678901234ULL;
    const auto text = scenario_to_config(s);
    const auto back = parse_scenario(text);
    EXPECT_EQ(scenario_to_config(back), text) << name;
    EXPECT_EQ(back.followers.size(), s.followers.size());
    EXPECT_EQ(back.seed, s.seed);
    EXPECT_EQ(back.initial_gaps, s.initial_gaps);
    EXPECT_DOUBLE_EQ(back.leader.v_max, s.leader.v_max);
  }
}

TEST(ScenarioConfig, MinimalDefaults) {
  const auto s = parse_scenario("leader { v_min 5 v_max 15 }\nfollower { }\nfollower { kind ACC_CTG }\n");
  EXPECT_EQ(s.followers.size(), 2u);
  EXPECT_EQ(s.followers[0].kind, ControllerKind::DdIdm);
  EXPECT_EQ(s.followers[1].kind, ControllerKind::AccCtg);
  EXPECT_DOUBLE_EQ(s.dt, 0.1);
  EXPECT_DOUBLE_EQ(s.loop_length, 0.0);
}

TEST(ScenarioConfig, NestedOverrides) {
  const auto s = parse_scenario(
      "leader { kind stop_and_go v_min 0 v_max 12 }\n"
      "follower { kind DI_INERTIA di { k_i 0.2 safety { tau 1.0 } } }\n"
      "initial_gaps { gap 40 }\n");
  EXPECT_DOUBLE_EQ(s.followers[0].di.k_i, 0.2);
  EXPECT_DOUBLE_EQ(s.followers[0].di.safety.tau, 1.0);
  EXPECT_EQ(s.leader.kind, ProfileKind::StopAndGo);
  ASSERT_EQ(s.initial_gaps.size(), 1u);
  EXPECT_DOUBLE_EQ(s.initial_gaps[0], 40.0);
}

TEST(ScenarioConfig, UnknownKeyNamesPath) {
  const auto msg = schema_message("leader { v_max 10 }\nfollower { }\nfollower { idm { vv0 3 } }\n");
  EXPECT_NE(msg.find("follower[2].idm.vv0"), std::string::npos) << msg;
  EXPECT_NE(schema_message("leader { v_max 10 }\nbogus 1\n").find("'bogus'"), std::string::npos);
}

TEST(ScenarioConfig, Rejections) {
  EXPECT_NE(schema_message("leader { v_max ten }\n").find("leader.v_max"), std::string::npos);
  EXPECT_NE(schema_message("dt 0.1\n").find("leader"), std::string::npos);
  EXPECT_NE(schema_message("leader { v_max 10 }\nfollower { kind DD_IDM acc { h 1 } }\n")
                .find("follower[1].acc"),
            std::string::npos);
  EXPECT_NE(schema_message("leader { v_max 10 }\nfollower { kind WHAT }\n").find("WHAT"),
            std::string::npos);
  EXPECT_NE(schema_message("leader { v_max 10 }\ndt -1\n").find("invalid scenario"), std::string::npos);
  EXPECT_NE(schema_message("leader { v_max 10 \n").find("config line"), std::string::npos);
  EXPECT_NE(schema_message("leader { v_max 10 }\nsignal_compliance maybe\n").find("true or false"),
            std::string::npos);
}

TEST(Params, DefaultsAndOverrides) {
  const auto d = parse_params("");
  EXPECT_DOUBLE_EQ(d.safety.tau, 0.75);
  EXPECT_DOUBLE_EQ(d.energy.mass, 1360.0);
  const auto p = parse_params("safety { d1 3 }\nenergy { mass 1500 grade 0.02 }\n");
  EXPECT_DOUBLE_EQ(p.safety.d1, 3.0);
  EXPECT_DOUBLE_EQ(p.energy.mass, 1500.0);
  EXPECT_DOUBLE_EQ(p.energy.grade_at(100.0), 0.02);
  const auto back = parse_params(params_to_config(p));
  EXPECT_EQ(params_to_config(back), params_to_config(p));
  EXPECT_THROW(parse_params("safety { tau -1 }\n"), Error);
  EXPECT_THROW(parse_params("energy { drag 1 }\n"), Error);
}

TEST(Signals, ParseList) {
  EXPECT_TRUE(parse_signals("").empty());
  const auto s = parse_signals("signal { position 300 }\nsignal { position 500 green_start 10 green_end 40 }\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].cycle, 60.0);
  EXPECT_DOUBLE_EQ(s[1].green_start, 10.0);
  EXPECT_THROW(parse_signals("signal { position 1 colour red }\n"), Error);
  EXPECT_THROW(parse_signals("signal { position 1 green_end 90 }\n"), Error);
}
