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

#ifndef HYBRIDNAV__CONFIG_HPP
#define HYBRIDNAV__CONFIG_HPP

#include <hybridnav/baseline.hpp>
#include <hybridnav/scenarios.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hybridnav {

//==============================================================================
struct EmitFlags
{
  bool csv = true;
  bool svg = false;
  bool levelsets = false;
};

/// Parses a comma separated list such as "csv,svg". Throws
/// Error(ConfigError) on unknown names.
EmitFlags parse_emit(const std::string& list);

struct SweepConfig
{
  std::size_t seeds = 100;
};

struct VerifyConfig
{
  std::size_t geometry_samples = 10000;
  std::size_t gradient_points = 1000;
  double fd_step = 1e-5;
  double gradient_tolerance = 1e-5;
  double min_boundary_distance = 0.01;
  double max_boundary_distance = 10.0;
  std::size_t lyapunov_runs = 20;
  std::size_t max_jumps = 10;
  std::size_t coverage_samples = 10000;
};

struct LevelsetConfig
{
  /// Grid nodes along x; the y count follows the aspect ratio.
  std::size_t resolution = 161;
  /// Contour values; empty picks a default ladder from the field.
  std::vector<double> levels;
};

//==============================================================================
/// A complete, validated run configuration.
struct Config
{
  static constexpr int schema_version = 1;

  Scenario scenario;
  std::filesystem::path output = "out";
  std::uint64_t seed = 0;
  EmitFlags emit;
  SweepConfig sweep;
  VerifyConfig verify;
  DemoConfig adversarial;
  LevelsetConfig levelsets;
};

/// Parses a JSON document. Unknown keys, wrong types, a missing or
/// unsupported schema_version and invalid parameters all throw
/// Error(ConfigError).
Config parse_config(const std::string& text);

/// Reads and parses a file; an unreadable file throws Error(IoError).
Config load_config(const std::filesystem::path& path);

/// Serializes the resolved configuration, defaults included. Parsing the
/// result gives back an equivalent Config.
std::string to_json(const Config& config, int indent = 2);

} // namespace hybridnav

#endif // HYBRIDNAV__CONFIG_HPP
