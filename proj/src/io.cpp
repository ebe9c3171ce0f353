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
#include <hybridnav/error.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace hybridnav {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = {})
{
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out)
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path)
{
  out.close();
  if (!out)
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

//==============================================================================
// Two decimals are plenty for pixel coordinates.
std::string pixel(double v)
{
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

//==============================================================================
// World to SVG pixel mapping with y pointing up.
struct Canvas
{
  Rect view;
  double scale = 1.0;
  double margin = 20.0;

  double width() const { return view.width()*scale + 2.0*margin; }
  double height() const { return view.height()*scale + 2.0*margin; }
  double px(double x) const { return margin + (x - view.x_min)*scale; }
  double py(double y) const { return margin + (view.y_max - y)*scale; }
  std::string pt(const Point2& p) const
  {
    return pixel(px(p.x)) + ","
      + pixel(py(p.y));
  }
};

const char* mode_color(Mode q)
{
  return q == Mode::One ? "#1f77b4" : "#d62728";
}

const char* contour_color(Mode q)
{
  return q == Mode::One ? "#9ecae1" : "#fcae91";
}

} // anonymous namespace

//==============================================================================
std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0.0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(
    buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

//==============================================================================
void write_arc_csv(std::ostream& out, const HybridArc& arc)
{
  out << "t,j,x,y,q,est_x,est_y,V1,V2,event\n";
  for (const ArcSample& s : arc.samples)
  {
    out << format_double(s.time.t) << ',' << s.time.j << ','
        << format_double(s.state.p.x) << ',' << format_double(s.state.p.y) << ','
        << static_cast<int>(s.state.q) << ','
        << format_double(s.estimate.x) << ',' << format_double(s.estimate.y) << ','
        << format_double(s.v1) << ',' << format_double(s.v2) << ','
        << to_string(s.event) << '\n';
  }
}

//==============================================================================
void write_arc_csv(const fs::path& path, const HybridArc& arc)
{
  std::ofstream out = open_out(path, std::ios::binary);
  write_arc_csv(out, arc);
  close_checked(out, path);
}

//==============================================================================
Point2 LevelGrid::node(std::size_t i, std::size_t k) const
{
  return {
    view.x_min + static_cast<double>(i)*dx(),
    view.y_min + static_cast<double>(k)*dy()};
}

//==============================================================================
double LevelGrid::value(Mode q, std::size_t i, std::size_t k) const
{
  const std::vector<double>& v = q == Mode::One ? v1 : v2;
  return v[k*nx + i];
}

//==============================================================================
LevelGrid sample_levels(
  const PotentialField& field, const Rect& view, std::size_t resolution)
{
  if (resolution < 2)
    throw Error(ErrorCode::InvalidParameter, "level grid needs >= 2 nodes per axis");
  if (!(view.width() > 0.0 && view.height() > 0.0))
    throw Error(ErrorCode::InvalidParameter, "level grid view is empty");

  LevelGrid g;
  g.view = view;
  const double aspect = view.height()/view.width();
  g.nx = resolution;
  g.ny = std::max<std::size_t>(2, static_cast<std::size_t>(
    std::lround(static_cast<double>(resolution - 1)*aspect)) + 1);
  g.v1.resize(g.nx*g.ny);
  g.v2.resize(g.nx*g.ny);
  for (std::size_t k = 0; k < g.ny; ++k)
  {
    for (std::size_t i = 0; i < g.nx; ++i)
    {
      const Point2 p = g.node(i, k);
      g.v1[k*g.nx + i] = field.value(Mode::One, p);
      g.v2[k*g.nx + i] = field.value(Mode::Two, p);
    }
  }
  return g;
}

//==============================================================================
std::vector<Segment> contour(const LevelGrid& grid, Mode q, double level)
{
  std::vector<Segment> out;
  if (grid.nx < 2 || grid.ny < 2)
    return out;

  auto lerp = [&](const Point2& a, const Point2& b, double va, double vb) {
    const double s = (level - va)/(vb - va);
    return a + s*(b - a);
  };

  for (std::size_t k = 0; k + 1 < grid.ny; ++k)
  {
    for (std::size_t i = 0; i + 1 < grid.nx; ++i)
    {
      // Corners counter-clockwise from the lower left.
      const std::array<Point2, 4> p = {
        grid.node(i, k), grid.node(i + 1, k),
        grid.node(i + 1, k + 1), grid.node(i, k + 1)};
      const std::array<double, 4> v = {
        grid.value(q, i, k), grid.value(q, i + 1, k),
        grid.value(q, i + 1, k + 1), grid.value(q, i, k + 1)};
      if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
        continue;

      int mask = 0;
      for (int c = 0; c < 4; ++c)
        mask |= (v[c] > level ? 1 : 0) << c;
      if (mask == 0 || mask == 15)
        continue;

      std::vector<Point2> cuts;
      for (int e = 0; e < 4; ++e)
      {
        const int a = e;
        const int b = (e + 1)%4;
        if ((v[a] > level) != (v[b] > level))
          cuts.push_back(lerp(p[a], p[b], v[a], v[b]));
      }

      if (cuts.size() == 2)
      {
        out.push_back({cuts[0], cuts[1]});
      }
      else if (cuts.size() == 4)
      {
        // Saddle cell: resolve with the center average.
        const double center = 0.25*(v[0] + v[1] + v[2] + v[3]);
        if ((center > level) == (v[0] > level))
        {
          out.push_back({cuts[0], cuts[1]});
          out.push_back({cuts[2], cuts[3]});
        }
        else
        {
          out.push_back({cuts[3], cuts[0]});
          out.push_back({cuts[1], cuts[2]});
        }
      }
    }
  }
  return out;
}

//==============================================================================
std::vector<double> default_levels(const LevelGrid& grid, std::size_t count)
{
  std::vector<double> finite;
  for (const auto* v : {&grid.v1, &grid.v2})
    for (const double x : *v)
      if (std::isfinite(x))
        finite.push_back(x);
  if (finite.empty() || count == 0)
    return {};

  std::sort(finite.begin(), finite.end());
  const double lo = finite.front();
  const double hi = finite[static_cast<std::size_t>(0.9*static_cast<double>(finite.size() - 1))];
  std::vector<double> levels;
  for (std::size_t i = 1; i <= count; ++i)
  {
    const double s = static_cast<double>(i)/static_cast<double>(count);
    levels.push_back(lo + (hi - lo)*s*s);
  }
  return levels;
}

//==============================================================================
void write_levelset_grid_csv(const fs::path& path, const LevelGrid& grid)
{
  std::ofstream out = open_out(path, std::ios::binary);
  out << "x,y,V1,V2\n";
  for (std::size_t k = 0; k < grid.ny; ++k)
  {
    for (std::size_t i = 0; i < grid.nx; ++i)
    {
      const Point2 p = grid.node(i, k);
      out << format_double(p.x) << ',' << format_double(p.y) << ','
          << format_double(grid.value(Mode::One, i, k)) << ','
          << format_double(grid.value(Mode::Two, i, k)) << '\n';
    }
  }
  close_checked(out, path);
}

//==============================================================================
void write_contours_csv(
  const fs::path& path, const LevelGrid& grid, const std::vector<double>& levels)
{
  std::ofstream out = open_out(path, std::ios::binary);
  out << "q,level,x0,y0,x1,y1\n";
  for (const Mode q : {Mode::One, Mode::Two})
  {
    for (const double level : levels)
    {
      for (const Segment& s : contour(grid, q, level))
      {
        out << static_cast<int>(q) << ',' << format_double(level) << ','
            << format_double(s.a.x) << ',' << format_double(s.a.y) << ','
            << format_double(s.b.x) << ',' << format_double(s.b.y) << '\n';
      }
    }
  }
  close_checked(out, path);
}

//==============================================================================
void write_svg(
  const fs::path& path,
  const PotentialField& field,
  const LevelGrid& grid,
  const std::vector<double>& levels,
  const std::vector<SvgTrace>& traces)
{
  Canvas c;
  c.view = grid.view;
  c.scale = 900.0/std::max(grid.view.width(), grid.view.height());

  std::ofstream out = open_out(path, std::ios::binary);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_double(std::round(c.width())) << "\" height=\""
      << format_double(std::round(c.height())) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Mode q : {Mode::One, Mode::Two})
  {
    out << "<g stroke=\"" << contour_color(q) << "\" stroke-width=\"0.8\" fill=\"none\">\n";
    for (const double level : levels)
    {
      const std::vector<Segment> segs = contour(grid, q, level);
      if (segs.empty())
        continue;
      out << "<path d=\"";
      for (const Segment& s : segs)
        out << 'M' << c.pt(s.a) << 'L' << c.pt(s.b);
      out << "\"/>\n";
    }
    out << "</g>\n";
  }

  const Covering& cov = field.covering();
  const auto corners = cov.diamond_vertices();
  out << "<polygon points=\"";
  for (std::size_t i = 0; i < corners.size(); ++i)
    out << (i ? " " : "") << c.pt(corners[i]);
  out << "\" fill=\"#eeeeee\" stroke=\"#777777\" stroke-dasharray=\"4 3\"/>\n";

  const Obstacle& obs = cov.obstacle();
  out << "<circle cx=\"" << pixel(c.px(obs.center.x))
      << "\" cy=\"" << pixel(c.py(obs.center.y))
      << "\" r=\"" << pixel(obs.radius*c.scale)
      << "\" fill=\"#555555\"/>\n";

  for (const SvgTrace& trace : traces)
  {
    if (!trace.arc || trace.arc->samples.empty())
      continue;
    const auto& samples = trace.arc->samples;
    out << "<g fill=\"none\" stroke-width=\"1.6\">";
    if (!trace.label.empty())
      out << "<title>" << trace.label << "</title>";
    out << '\n';

    std::size_t start = 0;
    for (std::size_t i = 1; i <= samples.size(); ++i)
    {
      if (i < samples.size() && samples[i].state.q == samples[start].state.q)
        continue;
      const std::string color = trace.color.empty()
        ? mode_color(samples[start].state.q) : trace.color;
      out << "<polyline stroke=\"" << color << "\" points=\"";
      const std::size_t end = std::min(i, samples.size() - 1);
      for (std::size_t k = start; k <= end; ++k)
        out << (k == start ? "" : " ") << c.pt(samples[k].state.p);
      out << "\"/>\n";
      start = i;
    }

    for (const ArcSample& s : samples)
    {
      if (s.event == Event::Jump)
      {
        out << "<circle cx=\"" << pixel(c.px(s.state.p.x))
            << "\" cy=\"" << pixel(c.py(s.state.p.y))
            << "\" r=\"3\" fill=\"black\"/>\n";
      }
    }
    out << "</g>\n";
  }

  for (const SvgTrace& trace : traces)
  {
    if (!trace.arc || trace.arc->samples.empty())
      continue;
    const Point2& t = trace.arc->back().target;
    out << "<path d=\"M" << c.pt(t + Vec2{-0.3, 0.0}) << "L" << c.pt(t + Vec2{0.3, 0.0})
        << "M" << c.pt(t + Vec2{0.0, -0.3}) << "L" << c.pt(t + Vec2{0.0, 0.3})
        << "\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  close_checked(out, path);
}

//==============================================================================
std::vector<fs::path> write_training_set(const fs::path& dir, const TrainingSet& set)
{
  fs::create_directories(dir);
  std::vector<fs::path> written;

  const fs::path positions = dir/"positions.csv";
  {
    std::ofstream out = open_out(positions, std::ios::binary);
    out << "i,x,y\n";
    for (std::size_t i = 0; i < set.size(); ++i)
    {
      out << i << ',' << format_double(set.positions[i].x) << ','
          << format_double(set.positions[i].y) << '\n';
    }
    close_checked(out, positions);
  }
  written.push_back(positions);

  const fs::path observations = dir/"observations.bin";
  {
    std::ofstream out = open_out(observations, std::ios::binary);
    static_assert(sizeof(float) == 4);
    if constexpr (std::endian::native == std::endian::little)
    {
      out.write(reinterpret_cast<const char*>(set.observations.data()),
        static_cast<std::streamsize>(set.observations.size()*sizeof(float)));
    }
    else
    {
      for (const float f : set.observations)
      {
        auto bytes = std::bit_cast<std::array<char, 4>>(f);
        std::reverse(bytes.begin(), bytes.end());
        out.write(bytes.data(), 4);
      }
    }
    close_checked(out, observations);
  }
  written.push_back(observations);

  const nlohmann::json meta = {
    {"samples", set.size()},
    {"dim", set.dim()},
    {"dtype", "float32-le"},
    {"layout", "row-major samples x (height*width*channels)"},
    {"grid", {{"nx", set.nx}, {"ny", set.ny}, {"spacing", set.spacing}}},
    {"region", {{"x", {set.region.x_min, set.region.x_max}},
                {"y", {set.region.y_min, set.region.y_max}}}},
    {"render", {
      {"width", set.spec.width}, {"height", set.spec.height},
      {"channels", Observation::channels},
      {"extent", {{"x", {set.spec.extent.x_min, set.spec.extent.x_max}},
                  {"y", {set.spec.extent.y_min, set.spec.extent.y_max}}}},
      {"blob_sigma", set.spec.blob_sigma}}}};
  const fs::path meta_path = dir/"training.json";
  write_text(meta_path, meta.dump(2) + "\n");
  written.push_back(meta_path);
  return written;
}

//==============================================================================
std::string sha256_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
    EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 initialization failed");

  std::array<char, 1 << 16> buf;
  while (in)
  {
    in.read(buf.data(), buf.size());
    const std::streamsize n = in.gcount();
    if (n > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(n));
  }

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2*len);
  for (unsigned int i = 0; i < len; ++i)
  {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

//==============================================================================
std::vector<ManifestEntry> manifest(
  const fs::path& root, const std::vector<fs::path>& files)
{
  std::vector<ManifestEntry> out;
  out.reserve(files.size());
  for (const fs::path& f : files)
  {
    ManifestEntry e;
    e.path = fs::relative(f, root).generic_string();
    e.bytes = fs::file_size(f);
    e.sha256 = sha256_file(f);
    out.push_back(std::move(e));
  }
  return out;
}

//==============================================================================
void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out = open_out(path, std::ios::binary);
  out << text;
  close_checked(out, path);
}

} // namespace hybridnav
