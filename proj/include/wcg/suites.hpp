#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wcg/feasibility.hpp"

namespace wcg {

enum class CheckStatus { Pass, Fail, Undecided };
std::string to_string(CheckStatus s);

struct SuiteCheck {
  std::string claim;
  std::string expected;
  std::string computed;
  CheckStatus status = CheckStatus::Fail;
};

struct SuiteResult {
  std::string id;
  std::string summary;
  std::vector<SuiteCheck> checks;
  double runtime_ms = 0;

  /// Fail if any check fails, else Undecided if any is undecided, else Pass.
  CheckStatus status() const;
};

struct SuiteOptions {
  SearchLimits limits;
  std::uint64_t seed = 2024;
};

struct SuiteInfo {
  std::string id;
  std::string summary;
};

std::vector<SuiteInfo> list_suites();
/// Throws std::invalid_argument for an unknown id.
SuiteResult run_suite(const std::string& id, const SuiteOptions& options = {});

}  // namespace wcg
