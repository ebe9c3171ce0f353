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

#ifndef HYBRIDNAV__PERCEPTION_HPP
#define HYBRIDNAV__PERCEPTION_HPP

#include <hybridnav/geometry.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace hybridnav {

//==============================================================================
/// Axis-aligned world rectangle [x_min, x_max] x [y_min, y_max].
struct Rect
{
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool contains(const Point2& p) const
  {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

//==============================================================================
/// Static content of the rendered world.
struct Scene
{
  Obstacle obstacle;
  Point2 target;
};

//==============================================================================
struct RenderSpec
{
  Rect extent;
  int width = 25;
  int height = 15;

  /// Standard deviation of the agent blob, in cells.
  double blob_sigma = 1.0;

  /// Blob support radius, in standard deviations.
  double blob_cutoff = 3.0;

  void validate() const;
};

//==============================================================================
/// Three channel image stored row-major with interleaved channels:
/// index = (row*width + col)*3 + channel. Row 0 is the top (y_max) edge.
///
/// channel 0: agent, channel 1: obstacle, channel 2: target marker.
struct Observation
{
  static constexpr int channels = 3;

  int width = 0;
  int height = 0;
  Rect extent;
  std::vector<float> data;

  float at(int row, int col, int channel) const
  {
    return data[static_cast<std::size_t>((row*width + col)*channels + channel)];
  }
};

/// Deterministic synthetic camera. Throws Error(OutOfExtent) if the agent
/// is outside the render window.
Observation render(
  const Scene& scene,
  const Point2& agent,
  const RenderSpec& spec,
  std::span<const Rect> occlusions = {});

//==============================================================================
/// Labeled observations on a regular grid. Sample i sits at grid cell
/// (i % nx, i / nx).
struct TrainingSet
{
  Scene scene;
  RenderSpec spec;
  std::vector<Rect> occlusions;
  Rect region;
  double spacing = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<Point2> positions;
  std::vector<float> observations;

  std::size_t size() const { return positions.size(); }
  std::size_t dim() const
  {
    return static_cast<std::size_t>(spec.width*spec.height*Observation::channels);
  }

  std::span<const float> observation(std::size_t i) const
  {
    return {observations.data() + i*dim(), dim()};
  }
};

/// Grid coordinates covering [lo, hi] with pitch `spacing`; both endpoints
/// are always included.
std::vector<double> grid_axis(double lo, double hi, double spacing);

TrainingSet collect_training_data(
  const Scene& scene,
  const Rect& region,
  double spacing,
  const RenderSpec& spec,
  std::vector<Rect> occlusions = {});

//==============================================================================
enum class PredictionMode
{
  NearestNeighbor,
  LocalLinear
};

//==============================================================================
/// Data-fit estimator from observations to positions.
///
/// Nearest-neighbor queries run against an inverted index over the nonzero
/// training intensities, so cost scales with the overlap between the query
/// and the training images rather than with the full image size.
class PerceptionMap
{
public:
  static constexpr std::size_t local_linear_neighbors = 4;

  /// Throws Error(InsufficientData) for an empty set, or for fewer than
  /// three non-collinear samples in local-linear mode.
  static PerceptionMap fit(TrainingSet training, PredictionMode mode);

  Point2 predict(std::span<const float> observation) const;
  Point2 predict(const Observation& observation) const
  {
    return predict(std::span<const float>(observation.data));
  }

  /// F(p) = l(h(p)) - p, with h the training render process.
  Vec2 residual(const Point2& p) const;

  /// Residual at training sample i, using the stored observation.
  Vec2 training_residual(std::size_t i) const;

  /// Estimated Lipschitz constant of the residual, anchored at training
  /// samples (see fit()).
  double lipschitz() const { return _lipschitz; }

  PredictionMode mode() const { return _mode; }
  const TrainingSet& training() const { return *_training; }

private:
  PerceptionMap() = default;

  void build_index();
  double estimate_lipschitz() const;
  std::vector<double> squared_distances(std::span<const float> obs) const;

  std::shared_ptr<const TrainingSet> _training;
  PredictionMode _mode = PredictionMode::NearestNeighbor;
  double _lipschitz = 0.0;

  std::vector<double> _norms;
  std::vector<std::size_t> _column_offsets;
  std::vector<std::uint32_t> _column_samples;
  std::vector<float> _column_values;
};

//==============================================================================
/// Union of balls {p_d} + r*B that pass |F(p_d)| + L*r <= epsilon.
struct CoverageRegion
{
  double epsilon = 0.0;
  double lipschitz = 0.0;
  double radius = 0.0;

  /// Largest left-hand side over all training balls, included or not.
  double max_lhs = 0.0;

  std::vector<Point2> centers;
  std::vector<std::size_t> indices;

  bool contains(const Point2& p) const;
  bool empty() const { return centers.empty(); }
  Rect bounds() const;
};

CoverageRegion coverage(
  const PerceptionMap& map, double lipschitz, double epsilon);

/// Smallest epsilon for which every training ball passes with the map's
/// estimated Lipschitz constant.
double certified_epsilon(const PerceptionMap& map);

//==============================================================================
struct BoundCheck
{
  double max_error = 0.0;
  Point2 worst;
  std::size_t samples = 0;
  bool passed = false;
};

/// Uniformly samples `n` positions in the region (restricted to the render
/// extent) and reports the largest |l(h(p)) - p|.
BoundCheck verify_bound(
  const PerceptionMap& map,
  const Scene& scene,
  const CoverageRegion& region,
  std::size_t n,
  double epsilon,
  std::uint64_t seed);

//==============================================================================
struct ErrorModel
{
  double sigma = 0.0;
  double dropout = 0.0;
  std::vector<Rect> occlusions;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EstimateResult
{
  Point2 position;
  bool dropped = false;
};

//==============================================================================
/// Runtime position sensor: render, predict, then perturb. One instance per
/// simulation run; it owns its random stream.
///
/// Without a map the prediction is the true position (exact perception).
class PerceptionSensor
{
public:
  PerceptionSensor(
    std::shared_ptr<const PerceptionMap> map,
    Scene scene,
    ErrorModel model);

  /// With probability `dropout` returns `prev` unchanged (zero-order hold);
  /// a first-call dropout falls back to a fresh prediction. A position
  /// outside the render window also holds `prev`, and throws
  /// Error(OutOfExtent) when there is nothing to hold.
  EstimateResult estimate(
    const Point2& p_true, const std::optional<Point2>& prev);

  const ErrorModel& model() const { return _model; }

private:
  std::shared_ptr<const PerceptionMap> _map;
  Scene _scene;
  ErrorModel _model;
  std::mt19937_64 _rng;
};

} // namespace hybridnav

#endif // HYBRIDNAV__PERCEPTION_HPP
