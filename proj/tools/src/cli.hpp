#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace nlx::cli {

// Stable exit-code contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,  // also an infeasible continuation start
  kExitConfig = 2,
  kExitStepLimit = 3,
  kExitConstraintHit = 4,
};

int exit_code_for(BranchStatus s) noexcept;

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "0.1", "0.1:0.9:0.2" (inclusive range; empty if start > stop) and comma lists thereof.
std::vector<double> parse_values(const std::vector<std::string>& items);

inline const std::vector<std::string> kAllChecks{"residual", "stability", "corollary", "estimates",
                                                 "monotonicity"};

struct VerifyOutcome {
  json report;
  bool pass = true;
};

// Runs the selected checks on every `stride`-th record (the last record is always included).
VerifyOutcome verify_branch(const BranchConfig& config, const Branch& branch,
                            const std::vector<std::string>& checks, std::optional<double> t,
                            std::size_t stride = 1);

}  // namespace nlx::cli
