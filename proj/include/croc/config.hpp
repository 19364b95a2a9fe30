#pragma once

#include <croc/sim.hpp>

#include <string>

namespace croc {

// Everything a run needs, loadable from one JSON document. Absent keys keep
// their defaults; unknown keys are rejected so typos cannot silently revert a
// value to its default.
struct Config {
    RobotModel model;
    GaitParams gait;
    StandParams stand;
    SwimWaveParams swim;
    SimParams sim;

    void validate() const;  // throws ConfigError with the offending field
};

Config default_config();

// Parse JSON text over the defaults. Throws ConfigError on malformed JSON,
// unknown keys, wrong arity, or values the validators reject.
Config parse_config(const std::string& text);

// Load from a file path. Throws ConfigError when the file cannot be read.
Config load_config(const std::string& path);

// Canonical JSON echo (sorted keys, two-space indent, trailing newline).
// parse_config(config_json(c)) reproduces c exactly; the echo of a loaded
// config is byte-stable across runs.
std::string config_json(const Config& config);

} // namespace croc
