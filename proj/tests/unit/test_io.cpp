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

#include <hybridnav/io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace hybridnav;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("hybridnav_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PotentialField default_field()
{
  return PotentialField(
    Covering::build({0.0, 0.0}, 4.0, {20.0, 0.0}, 0.5), BarrierParams{1.0});
}

} // namespace

//==============================================================================
TEST(FormatDouble, Literals)
{
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-3.0), "-3");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(FormatDoubleProperty, RoundTrips)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  for (int i = 0; i < 5000; ++i)
  {
    const double v = std::ldexp(mant(rng), expo(rng));
    ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

//==============================================================================
TEST(ArcCsv, HeaderAndRows)
{
  HybridArc arc;
  ArcSample s;
  s.state = {{1.5, -2.0}, Mode::Two};
  s.estimate = {1.0, -2.0};
  s.v1 = kInfinity;
  s.v2 = 3.25;
  arc.samples.push_back(s);
  s.time = {0.01, 1};
  s.event = Event::Jump;
  s.state.q = Mode::One;
  arc.samples.push_back(s);

  std::ostringstream out;
  write_arc_csv(out, arc);
  EXPECT_EQ(out.str(),
    "t,j,x,y,q,est_x,est_y,V1,V2,event\n"
    "0,0,1.5,-2,2,1,-2,inf,3.25,flow\n"
    "0.01,1,1.5,-2,1,1,-2,inf,3.25,jump\n");
}

//==============================================================================
TEST(LevelGrid, SamplesBothFields)
{
  const PotentialField f = default_field();
  const LevelGrid g = sample_levels(f, Rect{-40.0, 40.0, -40.0, 40.0}, 81);
  EXPECT_EQ(g.nx, 81u);
  EXPECT_EQ(g.ny, 81u);
  EXPECT_DOUBLE_EQ(g.dx(), 1.0);
  EXPECT_EQ(g.node(40, 40), Point2(0.0, 0.0));
  EXPECT_EQ(g.value(Mode::One, 40, 40), kInfinity);
  // (20, 0) is node (60, 40).
  EXPECT_DOUBLE_EQ(g.value(Mode::Two, 60, 40), 0.0);
  // (0, -30): only O_1, far from the barrier.
  EXPECT_DOUBLE_EQ(g.value(Mode::One, 40, 10), 400.0 + 900.0);
}

TEST(Contour, CircleAwayFromTheObstacle)
{
  const PotentialField f = default_field();
  const LevelGrid g = sample_levels(f, Rect{10.0, 30.0, -10.0, 10.0}, 201);
  // V = |p - p_T|^2 around the target: the 25 level is a circle of radius 5.
  const std::vector<Segment> segs = contour(g, Mode::One, 25.0);
  ASSERT_FALSE(segs.empty());
  for (const Segment& s : segs)
  {
    for (const Point2& p : {s.a, s.b})
    {
      const double r = distance(p, {20.0, 0.0});
      ASSERT_NEAR(r, 5.0, 0.02);
    }
  }
}

TEST(Contour, SkipsInfiniteCells)
{
  const PotentialField f = default_field();
  const LevelGrid g = sample_levels(f, Rect{-15.0, 15.0, -15.0, 15.0}, 61);
  for (const Segment& s : contour(g, Mode::One, 600.0))
  {
    ASSERT_TRUE(s.a.is_finite());
    ASSERT_FALSE(f.covering().in_diamond(0.5*(s.a + s.b)));
  }
}

TEST(DefaultLevels, Increasing)
{
  const LevelGrid g = sample_levels(default_field(), Rect{-45.0, 30.0, -25.0, 20.0}, 41);
  const std::vector<double> lv = default_levels(g, 10);
  ASSERT_EQ(lv.size(), 10u);
  for (std::size_t i = 1; i < lv.size(); ++i)
    ASSERT_GT(lv[i], lv[i - 1]);
}

//==============================================================================
TEST(Files, LevelsetAndSvgOutputs)
{
  const fs::path dir = scratch("levels");
  const PotentialField f = default_field();
  const LevelGrid g = sample_levels(f, Rect{-45.0, 30.0, -25.0, 20.0}, 31);
  write_levelset_grid_csv(dir / "grid.csv", g);
  write_contours_csv(dir / "contours.csv", g, {100.0, 400.0});

  const std::string grid = slurp(dir / "grid.csv");
  EXPECT_EQ(grid.rfind("x,y,V1,V2\n", 0), 0u);
  // 31 nodes along x; 75 x 45 keeps 19 along y.
  EXPECT_EQ(g.ny, 19u);
  EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), static_cast<long>(1 + g.nx*g.ny));
  EXPECT_EQ(slurp(dir / "contours.csv").rfind("q,level,x0,y0,x1,y1\n", 0), 0u);

  HybridArc arc;
  ArcSample s;
  s.state = {{-12.0, 2.0}, Mode::Two};
  arc.samples = {s, s};
  arc.samples[1].state.p = {20.0, 0.0};
  write_svg(dir / "plot.svg", f, g, {100.0}, {{&arc, "run", ""}});
  const std::string svg = slurp(dir / "plot.svg");
  EXPECT_EQ(svg.rfind("<svg ", 0), 0u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Files, TrainingSetLayout)
{
  const fs::path dir = scratch("training");
  const Scene scene{{{0.0, 0.0}, 4.0}, {20.0, 0.0}};
  const RenderSpec spec{{-45.0, 30.0, -25.0, 20.0}, 25, 15, 1.0, 3.0};
  const TrainingSet t = collect_training_data(scene, Rect{-45.0, -43.0, -25.0, -24.0}, 1.0, spec);
  const auto files = write_training_set(dir, t);
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(fs::file_size(dir / "observations.bin"), t.size()*t.dim()*sizeof(float));
  const std::string pos = slurp(dir / "positions.csv");
  EXPECT_EQ(std::count(pos.begin(), pos.end(), '\n'), 1 + static_cast<long>(t.size()));
}

//==============================================================================
TEST(Sha256, KnownDigests)
{
  const fs::path dir = scratch("sha");
  write_text(dir / "abc.txt", "abc");
  write_text(dir / "empty.txt", "");
  EXPECT_EQ(sha256_file(dir / "abc.txt"),
    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_file(dir / "empty.txt"),
    "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  const auto m = manifest(dir, {dir / "abc.txt"});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].path, "abc.txt");
  EXPECT_EQ(m[0].bytes, 3u);
}

TEST(WriteText, CreatesParents)
{
  const fs::path dir = scratch("parents");
  write_text(dir / "a" / "b" / "c.txt", "x");
  EXPECT_EQ(slurp(dir / "a" / "b" / "c.txt"), "x");
}
