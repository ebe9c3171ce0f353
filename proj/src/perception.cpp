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

#include <hybridnav/perception.hpp>
#include <hybridnav/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hybridnav {

namespace {

//==============================================================================
bool occluded(std::span<const Rect> occlusions, const Point2& p)
{
  return std::any_of(occlusions.begin(), occlusions.end(),
    [&](const Rect& r) { return r.contains(p); });
}

//==============================================================================
constexpr std::array<Vec2, 8> kProbeDirections = {
  Vec2{1.0, 0.0}, Vec2{0.70710678118654752, 0.70710678118654752},
  Vec2{0.0, 1.0}, Vec2{-0.70710678118654752, 0.70710678118654752},
  Vec2{-1.0, 0.0}, Vec2{-0.70710678118654752, -0.70710678118654752},
  Vec2{0.0, -1.0}, Vec2{0.70710678118654752, -0.70710678118654752}};

constexpr std::array<double, 2> kProbeFractions = {0.5, 1.0};

} // anonymous namespace

//==============================================================================
void RenderSpec::validate() const
{
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidParameter, "render resolution must be >= 1");
  if (!(extent.width() > 0.0 && extent.height() > 0.0))
    throw Error(ErrorCode::InvalidParameter, "render extent must be non-empty");
  if (!(blob_sigma > 0.0) || !(blob_cutoff > 0.0))
    throw Error(ErrorCode::InvalidParameter, "blob parameters must be > 0");
}

//==============================================================================
Observation render(
  const Scene& scene,
  const Point2& agent,
  const RenderSpec& spec,
  std::span<const Rect> occlusions)
{
  if (!spec.extent.contains(agent))
  {
    std::ostringstream msg;
    msg << "agent (" << agent.x << ", " << agent.y << ") outside render window";
    throw Error(ErrorCode::OutOfExtent, msg.str());
  }

  const int W = spec.width;
  const int H = spec.height;
  const double cw = spec.extent.width()/W;
  const double ch = spec.extent.height()/H;

  Observation obs;
  obs.width = W;
  obs.height = H;
  obs.extent = spec.extent;
  obs.data.assign(static_cast<std::size_t>(W*H*Observation::channels), 0.0f);

  auto cell_center = [&](int row, int col) {
    return Point2{
      spec.extent.x_min + (col + 0.5)*cw,
      spec.extent.y_max - (row + 0.5)*ch};
  };
  auto at = [&](int row, int col, int c) -> float& {
    return obs.data[static_cast<std::size_t>((row*W + col)*Observation::channels + c)];
  };

  // Agent blob, in cell units.
  const double ac = (agent.x - spec.extent.x_min)/cw - 0.5;
  const double ar = (spec.extent.y_max - agent.y)/ch - 0.5;
  const double reach = spec.blob_sigma*spec.blob_cutoff;
  const double inv_two_var = 1.0/(2.0*spec.blob_sigma*spec.blob_sigma);
  const int r0 = std::max(0, static_cast<int>(std::ceil(ar - reach)));
  const int r1 = std::min(H - 1, static_cast<int>(std::floor(ar + reach)));
  const int c0 = std::max(0, static_cast<int>(std::ceil(ac - reach)));
  const int c1 = std::min(W - 1, static_cast<int>(std::floor(ac + reach)));
  for (int row = r0; row <= r1; ++row)
  {
    for (int col = c0; col <= c1; ++col)
    {
      const double d2 = (row - ar)*(row - ar) + (col - ac)*(col - ac);
      if (d2 <= reach*reach)
        at(row, col, 0) = static_cast<float>(std::exp(-d2*inv_two_var));
    }
  }

  // Obstacle disk, by cell center. A disk smaller than a cell still marks
  // the cell holding its center.
  bool any_obstacle = false;
  for (int row = 0; row < H; ++row)
  {
    for (int col = 0; col < W; ++col)
    {
      if (scene.obstacle.contains(cell_center(row, col)))
      {
        at(row, col, 1) = 1.0f;
        any_obstacle = true;
      }
    }
  }

  auto cell_of = [&](const Point2& p, int& row, int& col) {
    if (!spec.extent.contains(p))
      return false;
    col = std::clamp(static_cast<int>((p.x - spec.extent.x_min)/cw), 0, W - 1);
    row = std::clamp(static_cast<int>((spec.extent.y_max - p.y)/ch), 0, H - 1);
    return true;
  };

  int row = 0;
  int col = 0;
  if (!any_obstacle && cell_of(scene.obstacle.center, row, col))
    at(row, col, 1) = 1.0f;

  if (cell_of(scene.target, row, col))
    at(row, col, 2) = 1.0f;

  if (!occlusions.empty())
  {
    for (int rr = 0; rr < H; ++rr)
    {
      for (int cc = 0; cc < W; ++cc)
      {
        if (!occluded(occlusions, cell_center(rr, cc)))
          continue;
        for (int c = 0; c < Observation::channels; ++c)
          at(rr, cc, c) = 0.0f;
      }
    }
  }

  return obs;
}

//==============================================================================
std::vector<double> grid_axis(double lo, double hi, double spacing)
{
  if (!(spacing > 0.0))
    throw Error(ErrorCode::InvalidParameter, "grid spacing must be > 0");
  if (hi < lo)
    throw Error(ErrorCode::InvalidParameter, "empty grid interval");

  std::vector<double> axis;
  const double tol = 1e-9*std::max(1.0, hi - lo);
  for (std::size_t i = 0;; ++i)
  {
    const double v = lo + static_cast<double>(i)*spacing;
    if (v >= hi - tol)
      break;
    axis.push_back(v);
  }
  axis.push_back(hi);
  return axis;
}

//==============================================================================
TrainingSet collect_training_data(
  const Scene& scene,
  const Rect& region,
  double spacing,
  const RenderSpec& spec,
  std::vector<Rect> occlusions)
{
  spec.validate();
  const std::vector<double> xs = grid_axis(region.x_min, region.x_max, spacing);
  const std::vector<double> ys = grid_axis(region.y_min, region.y_max, spacing);

  TrainingSet set;
  set.scene = scene;
  set.spec = spec;
  set.occlusions = std::move(occlusions);
  set.region = region;
  set.spacing = spacing;
  set.nx = xs.size();
  set.ny = ys.size();
  set.positions.reserve(xs.size()*ys.size());
  set.observations.reserve(xs.size()*ys.size()*set.dim());

  for (const double y : ys)
  {
    for (const double x : xs)
    {
      const Point2 p{x, y};
      const Observation obs = render(scene, p, spec, set.occlusions);
      set.positions.push_back(p);
      set.observations.insert(
        set.observations.end(), obs.data.begin(), obs.data.end());
    }
  }
  return set;
}

//==============================================================================
PerceptionMap PerceptionMap::fit(TrainingSet training, PredictionMode mode)
{
  if (training.size() == 0)
    throw Error(ErrorCode::InsufficientData, "training set is empty");

  if (mode == PredictionMode::LocalLinear)
  {
    bool spread = false;
    const Point2& a = training.positions.front();
    for (std::size_t i = 1; i < training.size() && !spread; ++i)
    {
      for (std::size_t j = i + 1; j < training.size() && !spread; ++j)
      {
        const Vec2 u = training.positions[i] - a;
        const Vec2 v = training.positions[j] - a;
        spread = std::abs(u.cross(v)) > 1e-12*(1.0 + u.squared_norm() + v.squared_norm());
      }
    }
    if (!spread)
    {
      throw Error(ErrorCode::InsufficientData,
        "local-linear mode needs three non-collinear samples");
    }
  }

  if (training.observations.size() != training.size()*training.dim())
    throw Error(ErrorCode::InvalidParameter, "observation matrix size mismatch");

  PerceptionMap map;
  map._training = std::make_shared<const TrainingSet>(std::move(training));
  map._mode = mode;
  map.build_index();
  map._lipschitz = map.estimate_lipschitz();
  return map;
}

//==============================================================================
void PerceptionMap::build_index()
{
  const TrainingSet& t = *_training;
  const std::size_t n = t.size();
  const std::size_t dim = t.dim();

  _norms.assign(n, 0.0);
  std::vector<std::size_t> counts(dim + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto obs = t.observation(i);
    for (std::size_t f = 0; f < dim; ++f)
    {
      const double v = obs[f];
      if (v != 0.0)
      {
        _norms[i] += v*v;
        ++counts[f + 1];
      }
    }
  }

  _column_offsets.assign(dim + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), _column_offsets.begin());
  _column_samples.resize(_column_offsets.back());
  _column_values.resize(_column_offsets.back());

  std::vector<std::size_t> cursor(_column_offsets.begin(), _column_offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto obs = t.observation(i);
    for (std::size_t f = 0; f < dim; ++f)
    {
      if (obs[f] == 0.0f)
        continue;
      const std::size_t k = cursor[f]++;
      _column_samples[k] = static_cast<std::uint32_t>(i);
      _column_values[k] = obs[f];
    }
  }
}

//==============================================================================
std::vector<double> PerceptionMap::squared_distances(
  std::span<const float> obs) const
{
  const std::size_t dim = _training->dim();
  if (obs.size() != dim)
    throw Error(ErrorCode::InvalidParameter, "observation size mismatch");

  std::vector<double> acc(_norms.size(), 0.0);
  double query_norm = 0.0;
  for (std::size_t f = 0; f < dim; ++f)
  {
    const double q = obs[f];
    if (q == 0.0)
      continue;
    query_norm += q*q;
    for (std::size_t k = _column_offsets[f]; k < _column_offsets[f + 1]; ++k)
      acc[_column_samples[k]] += q*static_cast<double>(_column_values[k]);
  }

  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] = std::max(0.0, query_norm + _norms[i] - 2.0*acc[i]);
  return acc;
}

//==============================================================================
Point2 PerceptionMap::predict(std::span<const float> observation) const
{
  const std::vector<double> d2 = squared_distances(observation);
  const auto& pos = _training->positions;

  if (_mode == PredictionMode::NearestNeighbor || pos.size() == 1)
  {
    const auto best = std::min_element(d2.begin(), d2.end());
    return pos[static_cast<std::size_t>(best - d2.begin())];
  }

  const std::size_t k = std::min(local_linear_neighbors, pos.size());
  std::vector<std::size_t> order(pos.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
    [&](std::size_t a, std::size_t b) {
      return d2[a] < d2[b] || (d2[a] == d2[b] && a < b);
    });

  if (d2[order[0]] <= 0.0)
    return pos[order[0]];

  Vec2 sum;
  double wsum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
  {
    const double w = 1.0/std::sqrt(d2[order[i]]);
    sum += w*pos[order[i]];
    wsum += w;
  }
  return sum/wsum;
}

//==============================================================================
Vec2 PerceptionMap::residual(const Point2& p) const
{
  const TrainingSet& t = *_training;
  const Observation obs = render(t.scene, p, t.spec, t.occlusions);
  return predict(obs) - p;
}

//==============================================================================
Vec2 PerceptionMap::training_residual(std::size_t i) const
{
  return predict(_training->observation(i)) - _training->positions[i];
}

//==============================================================================
double PerceptionMap::estimate_lipschitz() const
{
  // The difference quotient of F between two training samples vanishes for
  // any interpolating map, so quotients are also taken at probe points
  // between and around the samples, anchored at the sample they belong to.
  const TrainingSet& t = *_training;
  const double r = t.spacing;

  std::vector<Vec2> at_sample(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    at_sample[i] = training_residual(i);

  double lip = 0.0;
  auto consider = [&](const Vec2& fa, const Point2& a, const Vec2& fb, const Point2& b) {
    const double dist = (a - b).norm();
    if (dist > 0.0)
      lip = std::max(lip, (fa - fb).norm()/dist);
  };

  for (std::size_t iy = 0; iy < t.ny; ++iy)
  {
    for (std::size_t ix = 0; ix < t.nx; ++ix)
    {
      const std::size_t i = iy*t.nx + ix;
      if (ix + 1 < t.nx)
        consider(at_sample[i], t.positions[i], at_sample[i + 1], t.positions[i + 1]);
      if (iy + 1 < t.ny)
        consider(at_sample[i], t.positions[i], at_sample[i + t.nx], t.positions[i + t.nx]);
    }
  }

  for (std::size_t i = 0; i < t.size(); ++i)
  {
    for (const Vec2& dir : kProbeDirections)
    {
      for (const double f : kProbeFractions)
      {
        const Point2 p = t.positions[i] + (f*r)*dir;
        if (!t.spec.extent.contains(p))
          continue;
        consider(residual(p), p, at_sample[i], t.positions[i]);
      }
    }
  }
  return lip;
}

//==============================================================================
bool CoverageRegion::contains(const Point2& p) const
{
  const double r2 = radius*radius;
  return std::any_of(centers.begin(), centers.end(),
    [&](const Point2& c) { return (p - c).squared_norm() <= r2; });
}

//==============================================================================
Rect CoverageRegion::bounds() const
{
  Rect b{
    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point2& c : centers)
  {
    b.x_min = std::min(b.x_min, c.x - radius);
    b.x_max = std::max(b.x_max, c.x + radius);
    b.y_min = std::min(b.y_min, c.y - radius);
    b.y_max = std::max(b.y_max, c.y + radius);
  }
  return b;
}

//==============================================================================
CoverageRegion coverage(
  const PerceptionMap& map, double lipschitz, double epsilon)
{
  if (!(lipschitz >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "Lipschitz constant must be >= 0");
  if (!(epsilon >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "epsilon must be >= 0");

  const TrainingSet& t = map.training();
  CoverageRegion region;
  region.epsilon = epsilon;
  region.lipschitz = lipschitz;
  region.radius = t.spacing;
  for (std::size_t i = 0; i < t.size(); ++i)
  {
    const double lhs = map.training_residual(i).norm() + lipschitz*t.spacing;
    region.max_lhs = std::max(region.max_lhs, lhs);
    if (lhs <= epsilon)
    {
      region.centers.push_back(t.positions[i]);
      region.indices.push_back(i);
    }
  }
  return region;
}

//==============================================================================
double certified_epsilon(const PerceptionMap& map)
{
  return coverage(map, map.lipschitz(), 0.0).max_lhs;
}

//==============================================================================
BoundCheck verify_bound(
  const PerceptionMap& map,
  const Scene& scene,
  const CoverageRegion& region,
  std::size_t n,
  double epsilon,
  std::uint64_t seed)
{
  BoundCheck check;
  check.passed = true;
  if (region.empty() || n == 0)
    return check;

  const TrainingSet& t = map.training();
  Rect box = region.bounds();
  box.x_min = std::max(box.x_min, t.spec.extent.x_min);
  box.x_max = std::min(box.x_max, t.spec.extent.x_max);
  box.y_min = std::max(box.y_min, t.spec.extent.y_min);
  box.y_max = std::min(box.y_max, t.spec.extent.y_max);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uy(box.y_min, box.y_max);

  while (check.samples < n)
  {
    const Point2 p{ux(rng), uy(rng)};
    if (!region.contains(p))
      continue;
    const Observation obs = render(scene, p, t.spec, t.occlusions);
    const double err = (map.predict(obs) - p).norm();
    if (err > check.max_error || check.samples == 0)
    {
      check.max_error = err;
      check.worst = p;
    }
    ++check.samples;
  }
  check.passed = check.max_error <= epsilon;
  return check;
}

//==============================================================================
void ErrorModel::validate() const
{
  if (!(sigma >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "noise sigma must be >= 0");
  if (!(dropout >= 0.0 && dropout <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "dropout must be in [0, 1]");
}

//==============================================================================
PerceptionSensor::PerceptionSensor(
  std::shared_ptr<const PerceptionMap> map,
  Scene scene,
  ErrorModel model)
: _map(std::move(map)),
  _scene(scene),
  _model(std::move(model)),
  _rng(_model.seed)
{
  _model.validate();
}

//==============================================================================
EstimateResult PerceptionSensor::estimate(
  const Point2& p_true, const std::optional<Point2>& prev)
{
  // One uniform draw per call keeps the stream aligned whatever happens.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(_rng);
  if (u < _model.dropout && prev)
    return {*prev, true};

  Point2 predicted = p_true;
  if (_map)
  {
    const TrainingSet& t = _map->training();
    if (!t.spec.extent.contains(p_true))
    {
      if (prev)
        return {*prev, true};
      render(_scene, p_true, t.spec);  // throws OutOfExtent
    }
    predicted = _map->predict(render(_scene, p_true, t.spec, _model.occlusions));
  }

  if (_model.sigma > 0.0)
  {
    std::normal_distribution<double> noise(0.0, _model.sigma);
    const double nx = noise(_rng);
    const double ny = noise(_rng);
    predicted += Vec2{nx, ny};
  }
  return {predicted, false};
}

} // namespace hybridnav
