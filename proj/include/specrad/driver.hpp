#pragma once

#include <string>
#include <utility>
#include <vector>

namespace specrad::cli {

// Outcome of one CLI invocation. Artifacts are (filename, content) pairs the
// binary writes under --output; the summary is a JSON record embedding the
// resolved configuration. Same arguments (including seed) produce
// byte-identical artifacts.
struct RunResult {
    int exit_code = 0;
    std::string table;  // human-readable rendering
    std::string summary_json;
    std::vector<std::pair<std::string, std::string>> artifacts;
};

RunResult run(const std::vector<std::string>& args);

}  // namespace specrad::cli
