#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wavesim/energy.hpp"
#include "wavesim/safety.hpp"
#include "wavesim/scenario.hpp"

namespace wavesim {

/// Scenario files use the INFO tree syntax:
///
///   name demo
///   loop_length 0
///   leader { kind sinusoid  v_min 5  v_max 15  period 60 }
///   follower { kind DD_IDM  idm { v0 33.3 } }
///   signal { position 300  cycle 60  green_start 0  green_end 30 }
///
/// Unknown keys are rejected with their full path. Errors are Error(Schema).
Scenario parse_scenario(std::string_view text);
/// Writes every field so parse_scenario(scenario_to_config(s)) reproduces s.
std::string scenario_to_config(const Scenario& scenario);

struct AnalysisParams {
  SafetyParams safety;
  EnergyParams energy;
};

/// `safety { ... }` and `energy { ... }` sections, both optional.
AnalysisParams parse_params(std::string_view text);
std::string params_to_config(const AnalysisParams& params);

/// A list of `signal { ... }` sections; empty text is an empty plan.
std::vector<Signal> parse_signals(std::string_view text);

}  // namespace wavesim
