#pragma once

// Run configuration: a flat key = value file with bracketed sections.
//
//   # comment
//   [solver]
//   method = automatic          # automatic | direct | iterative | eigen
//   reduce_blocks = true
//
//   [scenario sweep_a]
//   preset = fig3               # optional: start from a canonical figure
//   id = custom
//   k_list = 1, 2
//   n_list = 0, 0.5
//   axis = cooperativity        # cooperativity | lambda_over_gamma | bath_n
//   grid = log 0.1 100 40       # log LO HI N | linear LO HI N | values V1, V2, ...
//   lambda = 3
//
// All rates are in units of gamma. Unknown keys and sections are errors.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "negtemp/dynamics.hpp"
#include "negtemp/sweeps.hpp"

namespace negtemp {

struct NamedScenario {
    std::string name;
    ScenarioConfig config;
};

struct RunConfig {
    SolverOptions solver;
    std::vector<NamedScenario> scenarios;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Inverse of parse_run_config for a single scenario section.
std::string format_scenario_section(const NamedScenario& s);

} // namespace negtemp
