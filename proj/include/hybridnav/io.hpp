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

#ifndef HYBRIDNAV__IO_HPP
#define HYBRIDNAV__IO_HPP

#include <hybridnav/hybrid.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace hybridnav {

//==============================================================================
/// Shortest round-trip free formatting: 17 significant digits, '.' decimal
/// separator regardless of locale, "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double value);

/// Columns: t,j,x,y,q,est_x,est_y,V1,V2,event
void write_arc_csv(std::ostream& out, const HybridArc& arc);
void write_arc_csv(const std::filesystem::path& path, const HybridArc& arc);

//==============================================================================
/// V_1 and V_2 sampled on a regular grid of nodes. Node (i, k) sits at
/// x = view.x_min + i*dx, y = view.y_min + k*dy.
struct LevelGrid
{
  Rect view;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> v1;
  std::vector<double> v2;

  double dx() const { return view.width()/static_cast<double>(nx - 1); }
  double dy() const { return view.height()/static_cast<double>(ny - 1); }
  Point2 node(std::size_t i, std::size_t k) const;
  double value(Mode q, std::size_t i, std::size_t k) const;
};

LevelGrid sample_levels(
  const PotentialField& field, const Rect& view, std::size_t resolution);

struct Segment
{
  Point2 a;
  Point2 b;
};

/// Marching-squares segments of {V_q = level}. Cells touching an infinite
/// node are skipped.
std::vector<Segment> contour(const LevelGrid& grid, Mode q, double level);

/// Quadratically spaced levels between the smallest finite value and the
/// 90th percentile of finite values on the grid.
std::vector<double> default_levels(const LevelGrid& grid, std::size_t count = 12);

/// Columns: x,y,V1,V2
void write_levelset_grid_csv(const std::filesystem::path& path, const LevelGrid& grid);

/// Columns: q,level,x0,y0,x1,y1
void write_contours_csv(
  const std::filesystem::path& path,
  const LevelGrid& grid,
  const std::vector<double>& levels);

//==============================================================================
struct SvgTrace
{
  const HybridArc* arc = nullptr;
  std::string label;
  /// Overrides the per-mode colors.
  std::string color;
};

/// Trajectories over the level sets, with the obstacle, the diamond and the
/// target drawn on top.
void write_svg(
  const std::filesystem::path& path,
  const PotentialField& field,
  const LevelGrid& grid,
  const std::vector<double>& levels,
  const std::vector<SvgTrace>& traces);

//==============================================================================
/// positions.csv (i,x,y), observations.bin (float32 little endian,
/// size() x dim() row-major) and training.json (shapes and render settings).
/// Returns the written paths.
std::vector<std::filesystem::path> write_training_set(
  const std::filesystem::path& dir, const TrainingSet& set);

//==============================================================================
struct ManifestEntry
{
  std::string path;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

/// Hashes each file; `path` in the result is relative to `root`.
std::vector<ManifestEntry> manifest(
  const std::filesystem::path& root,
  const std::vector<std::filesystem::path>& files);

/// Writes `text` to `path`, creating parent directories. Throws
/// Error(IoError).
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace hybridnav

#endif // HYBRIDNAV__IO_HPP
