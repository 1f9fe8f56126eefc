#pragma once

#include <ostream>

#include <json.hpp>

#include "copmaint/mc_oracle.hpp"
#include "copmaint/optimizers.hpp"

namespace copmaint::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kError = 1, kStrictFailure = 2, kCapability = 3 };

/// Stable machine-readable records.
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const PolicyResult& r);
nlohmann::json to_json(const SimEstimate& e);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copmaint::cli
