#pragma once

#include <filesystem>
#include <string>

#include "netbandit/harness.hpp"

namespace netbandit {

// Config files are flat INI-style text:
//
//   # comment
//   [network]
//   n = 100
//
// Sections: network, reward, agent, oracle, experiment. Unknown sections or
// keys are errors. Missing keys keep their defaults.

/// Throws ConfigError naming `source`, the line and the key on failure.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Throws ConfigError naming the path when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace netbandit
