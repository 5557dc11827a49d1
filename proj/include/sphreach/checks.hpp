// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_CHECKS_HPP
#define SPHREACH_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sphreach {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool fast = false;                 ///< skip the Monte Carlo checks
  std::int64_t mc_samples = 20000;
  std::uint64_t seed = 20240611;
  int threads = 0;
};

/// Cross-module consistency suite. Every check runs even if an earlier one
/// fails; a check that throws is reported as failed with the message.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace sphreach

#endif  // SPHREACH_CHECKS_HPP
