#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gwlab/config.hpp"

namespace gwlab::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kZeroVariance = 3,
  kCriteriaDisagree = 4,
};

/// Each command writes its artifacts into config.out_dir and returns their
/// file names (relative to out_dir). The manifest is written by run().
std::vector<std::string> cmd_eval(const RunConfig& config);
std::vector<std::string> cmd_density(const RunConfig& config);
std::vector<std::string> cmd_lyapunov(const RunConfig& config);
std::vector<std::string> cmd_variance(const RunConfig& config);
std::vector<std::string> cmd_classify(const RunConfig& config);
std::vector<std::string> cmd_clt(const RunConfig& config);
std::vector<std::string> cmd_lil(const RunConfig& config);
std::vector<std::string> cmd_zygmund(const RunConfig& config);
std::vector<std::string> cmd_residual(const RunConfig& config);

/// Writes manifest_<command>.json (config hash, version, timestamp, outputs, workers).
void write_manifest(const RunConfig& config, const std::string& command, const std::vector<std::string>& outputs);

/// Full command line: parses, resolves the config, dispatches, and maps
/// errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gwlab::cli
