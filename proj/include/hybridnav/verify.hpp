/*
 * Copyright (C) 2026 The hybridnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef HYBRIDNAV__VERIFY_HPP
#define HYBRIDNAV__VERIFY_HPP

#include <hybridnav/config.hpp>

#include <string>
#include <vector>

namespace hybridnav {

//==============================================================================
/// One invariant check. `value` is the measured quantity and `limit` the
/// bound it is compared against; `counterexample` is a JSON object (empty
/// when the check passed).
struct Check
{
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string counterexample;
};

struct SuiteReport
{
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  const Check* first_failure() const;
};

enum class Suite
{
  Geometry,
  Gradient,
  Lyapunov,
  Coverage,
  All
};

/// Throws Error(ConfigError) for unknown names.
Suite parse_suite(const std::string& name);

/// Diamond radii, target membership, obstacle exclusion and the partition
/// of the plane into O and the diamond, on random samples.
SuiteReport verify_geometry(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed);

/// Analytic gradients against central differences in both regions.
SuiteReport verify_gradient(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed);

/// Nominal runs with exact perception: flow decrease, jump contraction,
/// termination, jump counts and clearance. Every second run starts inside
/// both regions in the mode with the larger potential, past the jump
/// threshold.
SuiteReport verify_lyapunov(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed);

/// Fits the scenario's perception map and checks the certified bound on
/// uniform samples of the coverage region.
SuiteReport verify_coverage(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed);

std::vector<SuiteReport> run_verify(const Config& config, Suite suite);

} // namespace hybridnav

#endif // HYBRIDNAV__VERIFY_HPP
