#pragma once

#include <croc/config.hpp>

#include <string>

namespace croc {

// One scenario family executed end to end with its artifacts on disk.
struct ScenarioOutcome {
    std::string name;
    std::string summary;  // one line for the terminal
    bool fell = false;    // any run ended with no support
};

// Runs one of {stability, displacement, fault, stand, swim} and writes its
// artifacts under out_dir: per-run subdirectories with series.csv, a root
// report.json embedding the config echo, and scenario-specific extras
// (frames.csv for stability, midline.csv for swim). Output is byte-identical
// across repeated runs with the same config. Unknown names throw ConfigError;
// unwritable directories throw Error.
ScenarioOutcome run_scenario_family(const std::string& name, const Config& config,
                                    const std::string& out_dir);

} // namespace croc
