#include "tplec/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>

namespace tplec {

Rect make_rect(Coord x1, Coord y1, Coord x2, Coord y2) {
  Rect r{{std::min(x1, x2), std::min(y1, y2)}, {std::max(x1, x2), std::max(y1, y2)}};
  if (!r.valid()) {
    throw InvalidShape("zero-area rectangle");
  }
  return r;
}

Rect inflate(const Rect& r, Coord d) {
  return {{r.lo.x - d, r.lo.y - d}, {r.hi.x + d, r.hi.y + d}};
}

Rect bounding_box(const Rect& a, const Rect& b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
          {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

Rect bounding_box(std::span<const Rect> rects) {
  if (rects.empty()) {
    return {};
  }
  Rect box = rects.front();
  for (const Rect& r : rects.subspan(1)) {
    box = bounding_box(box, r);
  }
  return box;
}

OverlapKind rect_overlap_kind(const Rect& a, const Rect& b) {
  if (interiors_intersect(a, b)) {
    return OverlapKind::type2;
  }
  if (closures_intersect(a, b)) {
    return OverlapKind::type1;
  }
  return OverlapKind::none;
}

Gap rect_gap(const Rect& a, const Rect& b) {
  const Coord dx = std::max<Coord>({0, b.lo.x - a.hi.x, a.lo.x - b.hi.x});
  const Coord dy = std::max<Coord>({0, b.lo.y - a.hi.y, a.lo.y - b.hi.y});
  return {dx, dy};
}

namespace {

// Smallest s with s*s >= v.
Coord ceil_sqrt(Coord v) {
  if (v <= 0) {
    return 0;
  }
  auto s = static_cast<Coord>(std::sqrt(static_cast<long double>(v)));
  while (s * s < v) {
    ++s;
  }
  while (s > 0 && (s - 1) * (s - 1) >= v) {
    --s;
  }
  return s;
}

}  // namespace

Coord gap_distance(Gap g, Metric metric) {
  if (metric == Metric::chebyshev) {
    return std::max(g.dx, g.dy);
  }
  return ceil_sqrt(g.dx * g.dx + g.dy * g.dy);
}

bool gap_within(Gap g, Coord d, Metric metric) {
  if (metric == Metric::chebyshev) {
    return g.dx <= d && g.dy <= d;
  }
  return g.dx <= d && g.dy <= d && g.dx * g.dx + g.dy * g.dy <= d * d;
}

Coord rects_distance(std::span<const Rect> a, std::span<const Rect> b, Metric metric) {
  Coord best = std::numeric_limits<Coord>::max();
  for (const Rect& ra : a) {
    for (const Rect& rb : b) {
      best = std::min(best, gap_distance(rect_gap(ra, rb), metric));
    }
  }
  return best;
}

Coord BoundaryEdge::span_lo() const {
  return orientation() == Orientation::vertical ? std::min(from.y, to.y) : std::min(from.x, to.x);
}

Coord BoundaryEdge::span_hi() const {
  return orientation() == Orientation::vertical ? std::max(from.y, to.y) : std::max(from.x, to.x);
}

namespace {

struct CellGrid {
  std::vector<Coord> xs;
  std::vector<Coord> ys;
  std::vector<char> covered;  // (xs.size()-1) * (ys.size()-1), row-major in x

  bool at(std::ptrdiff_t i, std::ptrdiff_t j) const {
    if (i < 0 || j < 0 || i + 1 >= static_cast<std::ptrdiff_t>(xs.size()) ||
        j + 1 >= static_cast<std::ptrdiff_t>(ys.size())) {
      return false;
    }
    return covered[static_cast<std::size_t>(i) * (ys.size() - 1) + static_cast<std::size_t>(j)] != 0;
  }
};

CellGrid rasterize(std::span<const Rect> rects) {
  CellGrid g;
  for (const Rect& r : rects) {
    g.xs.push_back(r.lo.x);
    g.xs.push_back(r.hi.x);
    g.ys.push_back(r.lo.y);
    g.ys.push_back(r.hi.y);
  }
  std::sort(g.xs.begin(), g.xs.end());
  g.xs.erase(std::unique(g.xs.begin(), g.xs.end()), g.xs.end());
  std::sort(g.ys.begin(), g.ys.end());
  g.ys.erase(std::unique(g.ys.begin(), g.ys.end()), g.ys.end());
  if (g.xs.size() < 2 || g.ys.size() < 2) {
    return g;
  }
  const std::size_t ny = g.ys.size() - 1;
  g.covered.assign((g.xs.size() - 1) * ny, 0);
  for (const Rect& r : rects) {
    const auto i0 = std::lower_bound(g.xs.begin(), g.xs.end(), r.lo.x) - g.xs.begin();
    const auto i1 = std::lower_bound(g.xs.begin(), g.xs.end(), r.hi.x) - g.xs.begin();
    const auto j0 = std::lower_bound(g.ys.begin(), g.ys.end(), r.lo.y) - g.ys.begin();
    const auto j1 = std::lower_bound(g.ys.begin(), g.ys.end(), r.hi.y) - g.ys.begin();
    for (auto i = i0; i < i1; ++i) {
      for (auto j = j0; j < j1; ++j) {
        g.covered[static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)] = 1;
      }
    }
  }
  return g;
}

Point edge_start(Side normal, Coord pos, Coord lo, Coord hi) {
  switch (normal) {
    case Side::right: return {pos, lo};
    case Side::left: return {pos, hi};
    case Side::top: return {hi, pos};
    case Side::bottom: return {lo, pos};
  }
  return {};
}

Point edge_end(Side normal, Coord pos, Coord lo, Coord hi) {
  switch (normal) {
    case Side::right: return {pos, hi};
    case Side::left: return {pos, lo};
    case Side::top: return {lo, pos};
    case Side::bottom: return {hi, pos};
  }
  return {};
}

std::vector<BoundaryEdge> trace_outline(std::span<const Rect> rects) {
  const CellGrid g = rasterize(rects);
  std::vector<BoundaryEdge> raw;
  if (g.covered.empty()) {
    return raw;
  }
  const auto nx = static_cast<std::ptrdiff_t>(g.xs.size()) - 1;
  const auto ny = static_cast<std::ptrdiff_t>(g.ys.size()) - 1;

  // Vertical edges: scan each grid line x = xs[i], merging runs of equal normal.
  for (std::ptrdiff_t i = 0; i <= nx; ++i) {
    std::ptrdiff_t j = 0;
    while (j < ny) {
      const bool l = g.at(i - 1, j);
      const bool r = g.at(i, j);
      if (l == r) {
        ++j;
        continue;
      }
      const Side normal = l ? Side::right : Side::left;
      std::ptrdiff_t k = j + 1;
      while (k < ny && g.at(i - 1, k) == l && g.at(i, k) == r) {
        ++k;
      }
      const Coord pos = g.xs[static_cast<std::size_t>(i)];
      const Coord lo = g.ys[static_cast<std::size_t>(j)];
      const Coord hi = g.ys[static_cast<std::size_t>(k)];
      raw.push_back({edge_start(normal, pos, lo, hi), edge_end(normal, pos, lo, hi), normal});
      j = k;
    }
  }
  for (std::ptrdiff_t j = 0; j <= ny; ++j) {
    std::ptrdiff_t i = 0;
    while (i < nx) {
      const bool b = g.at(i, j - 1);
      const bool t = g.at(i, j);
      if (b == t) {
        ++i;
        continue;
      }
      const Side normal = b ? Side::top : Side::bottom;
      std::ptrdiff_t k = i + 1;
      while (k < nx && g.at(k, j - 1) == b && g.at(k, j) == t) {
        ++k;
      }
      const Coord pos = g.ys[static_cast<std::size_t>(j)];
      const Coord lo = g.xs[static_cast<std::size_t>(i)];
      const Coord hi = g.xs[static_cast<std::size_t>(k)];
      raw.push_back({edge_start(normal, pos, lo, hi), edge_end(normal, pos, lo, hi), normal});
      i = k;
    }
  }

  // Chain into counter-clockwise loops starting from the lowest start point.
  std::multimap<Point, std::size_t> by_start;
  for (std::size_t e = 0; e < raw.size(); ++e) {
    by_start.emplace(raw[e].from, e);
  }
  std::vector<BoundaryEdge> ordered;
  ordered.reserve(raw.size());
  std::vector<bool> used(raw.size(), false);
  while (!by_start.empty()) {
    auto it = by_start.begin();
    std::size_t e = it->second;
    by_start.erase(it);
    while (true) {
      used[e] = true;
      ordered.push_back(raw[e]);
      auto next = by_start.find(raw[e].to);
      if (next == by_start.end()) {
        break;
      }
      // At a pinch vertex two edges start at the same point; prefer the one
      // that turns, which keeps horizontal/vertical alternation.
      auto range = by_start.equal_range(raw[e].to);
      for (auto c = range.first; c != range.second; ++c) {
        if (raw[c->second].orientation() != raw[e].orientation()) {
          next = c;
          break;
        }
      }
      e = next->second;
      by_start.erase(next);
    }
  }
  return ordered;
}

bool edge_adjacent(const Rect& a, const Rect& b) {
  if (interiors_intersect(a, b)) {
    return true;
  }
  const Gap g = rect_gap(a, b);
  if (g.dx != 0 || g.dy != 0) {
    return false;
  }
  // Touching: require a shared boundary segment of positive length.
  const Coord ox = std::min(a.hi.x, b.hi.x) - std::max(a.lo.x, b.lo.x);
  const Coord oy = std::min(a.hi.y, b.hi.y) - std::max(a.lo.y, b.lo.y);
  return ox > 0 || oy > 0;
}

}  // namespace

RectilinearShape::RectilinearShape(std::string id, std::vector<Rect> rects)
    : id_(std::move(id)), rects_(std::move(rects)) {
  if (rects_.empty()) {
    throw InvalidShape("shape '" + id_ + "' has no rectangles");
  }
  for (const Rect& r : rects_) {
    if (!r.valid()) {
      throw InvalidShape("shape '" + id_ + "' has a zero-area rectangle");
    }
  }
  // Edge-connectivity of the rect union.
  std::vector<std::size_t> parent(rects_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t groups = rects_.size();
  for (std::size_t i = 0; i < rects_.size(); ++i) {
    for (std::size_t j = i + 1; j < rects_.size(); ++j) {
      if (edge_adjacent(rects_[i], rects_[j])) {
        const auto a = find(i);
        const auto b = find(j);
        if (a != b) {
          parent[a] = b;
          --groups;
        }
      }
    }
  }
  if (groups != 1) {
    throw InvalidShape("shape '" + id_ + "' is not edge-connected");
  }
  bbox_ = bounding_box(rects_);
  area_ = union_area(rects_);
  edges_ = trace_outline(rects_);
}

bool shapes_overlap(const RectilinearShape& a, const RectilinearShape& b) {
  if (!interiors_intersect(a.bbox(), b.bbox())) {
    return false;
  }
  for (const Rect& ra : a.rects()) {
    for (const Rect& rb : b.rects()) {
      if (interiors_intersect(ra, rb)) {
        return true;
      }
    }
  }
  return false;
}

Coord shape_distance(const RectilinearShape& a, const RectilinearShape& b, Metric metric) {
  if (shapes_overlap(a, b)) {
    throw OverlappingInputShapes(a.id(), b.id());
  }
  return rects_distance(a.rects(), b.rects(), metric);
}

Coord union_area(std::span<const Rect> rects) {
  const CellGrid g = rasterize(rects);
  Coord area = 0;
  const auto ny = static_cast<std::ptrdiff_t>(g.ys.size()) - 1;
  for (std::ptrdiff_t i = 0; i + 1 < static_cast<std::ptrdiff_t>(g.xs.size()); ++i) {
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
      if (g.at(i, j)) {
        area += (g.xs[static_cast<std::size_t>(i) + 1] - g.xs[static_cast<std::size_t>(i)]) *
                (g.ys[static_cast<std::size_t>(j) + 1] - g.ys[static_cast<std::size_t>(j)]);
      }
    }
  }
  return area;
}

std::vector<Rect> split_rect(const Rect& r, Orientation along, std::span<const Coord> positions) {
  std::vector<Coord> cuts(positions.begin(), positions.end());
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rect> pieces;
  Coord start = along == Orientation::horizontal ? r.lo.x : r.lo.y;
  const Coord end = along == Orientation::horizontal ? r.hi.x : r.hi.y;
  auto piece = [&](Coord a, Coord b) {
    return along == Orientation::horizontal ? Rect{{a, r.lo.y}, {b, r.hi.y}}
                                            : Rect{{r.lo.x, a}, {r.hi.x, b}};
  };
  for (Coord c : cuts) {
    if (c <= start || c >= end) {
      throw std::invalid_argument("split position outside rectangle");
    }
    pieces.push_back(piece(start, c));
    start = c;
  }
  pieces.push_back(piece(start, end));
  return pieces;
}

SpatialIndex::SpatialIndex(Coord cell_size) : cell_(cell_size) {
  if (cell_ <= 0) {
    throw std::invalid_argument("spatial index cell size must be positive");
  }
}

std::size_t SpatialIndex::CellHash::operator()(const CellKey& k) const noexcept {
  const auto a = static_cast<std::uint64_t>(k.cx);
  const auto b = static_cast<std::uint64_t>(k.cy);
  return static_cast<std::size_t>(a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C159E3779B9ULL + (a << 6) + (a >> 2)));
}

Coord SpatialIndex::cell_of(Coord v) const {
  Coord q = v / cell_;
  if (v % cell_ != 0 && v < 0) {
    --q;
  }
  return q;
}

void SpatialIndex::insert(std::size_t id, const Rect& r) {
  for (Coord cx = cell_of(r.lo.x); cx <= cell_of(r.hi.x); ++cx) {
    for (Coord cy = cell_of(r.lo.y); cy <= cell_of(r.hi.y); ++cy) {
      auto& bucket = cells_[CellKey{cx, cy}];
      if (bucket.empty() || bucket.back() != id) {
        bucket.push_back(id);
      }
    }
  }
}

std::vector<std::size_t> SpatialIndex::query(const Rect& r, Coord d) const {
  std::vector<std::size_t> out;
  if (cells_.empty()) {
    return out;
  }
  const Rect q = inflate(r, d);
  for (Coord cx = cell_of(q.lo.x); cx <= cell_of(q.hi.x); ++cx) {
    for (Coord cy = cell_of(q.lo.y); cy <= cell_of(q.hi.y); ++cy) {
      auto it = cells_.find(CellKey{cx, cy});
      if (it != cells_.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ShapeIndex::ShapeIndex(std::span<const RectilinearShape> shapes, Coord cell_size)
    : shapes_(shapes), grid_(cell_size) {
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    for (const Rect& r : shapes_[i].rects()) {
      grid_.insert(i, r);
    }
  }
}

std::vector<std::size_t> ShapeIndex::near(const Rect& r, Coord d, Metric metric) const {
  std::vector<std::size_t> out;
  const std::span<const Rect> probe(&r, 1);
  for (std::size_t id : grid_.query(r, d)) {
    if (rects_distance(probe, shapes_[id].rects(), metric) <= d) {
      out.push_back(id);
    }
  }
  return out;
}

bool ShapeIndex::interior_hits(const Rect& r) const {
  for (std::size_t id : grid_.query(r, 0)) {
    for (const Rect& s : shapes_[id].rects()) {
      if (interiors_intersect(r, s)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace tplec
