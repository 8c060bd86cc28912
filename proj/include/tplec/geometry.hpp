#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tplec {

/// Layout coordinates are integer nanometres.
using Coord = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;

  auto operator<=>(const Point&) const = default;
};

/// Axis-aligned rectangle with lo strictly below-left of hi.
struct Rect {
  Point lo;
  Point hi;

  Coord width() const { return hi.x - lo.x; }
  Coord height() const { return hi.y - lo.y; }
  Coord area() const { return width() * height(); }
  bool valid() const { return lo.x < hi.x && lo.y < hi.y; }
  Point center2() const { return {lo.x + hi.x, lo.y + hi.y}; }  // doubled centre, stays integral

  auto operator<=>(const Rect&) const = default;
};

/// Builds a rect from two opposite corners in any order; throws on zero area.
Rect make_rect(Coord x1, Coord y1, Coord x2, Coord y2);

Rect inflate(const Rect& r, Coord d);
Rect bounding_box(std::span<const Rect> rects);
Rect bounding_box(const Rect& a, const Rect& b);

enum class Metric { chebyshev, euclidean };

enum class OverlapKind { none, type1, type2 };

/// none: closed rects disjoint; type1: touch along an edge or at a point;
/// type2: interiors intersect.
OverlapKind rect_overlap_kind(const Rect& a, const Rect& b);

inline bool interiors_intersect(const Rect& a, const Rect& b) {
  return a.lo.x < b.hi.x && b.lo.x < a.hi.x && a.lo.y < b.hi.y && b.lo.y < a.hi.y;
}

inline bool closures_intersect(const Rect& a, const Rect& b) {
  return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}

/// Per-axis separation between two rects (0 on an axis where the intervals meet).
struct Gap {
  Coord dx = 0;
  Coord dy = 0;
};

Gap rect_gap(const Rect& a, const Rect& b);

/// Chebyshev: max(dx, dy). Euclidean: ceil(sqrt(dx^2 + dy^2)), so that
/// gap_distance(g) <= d holds exactly when the true distance is <= d.
Coord gap_distance(Gap g, Metric metric);
bool gap_within(Gap g, Coord d, Metric metric);

/// Minimum gap distance over all rect pairs; ignores interior overlap.
Coord rects_distance(std::span<const Rect> a, std::span<const Rect> b, Metric metric);

enum class Orientation { horizontal, vertical };

/// Direction of the outward normal of a boundary edge.
enum class Side { left, right, bottom, top };

inline Orientation orientation_of(Side s) {
  return (s == Side::left || s == Side::right) ? Orientation::vertical : Orientation::horizontal;
}

/// A maximal axis-aligned boundary segment, directed counter-clockwise
/// around the shape (interior on the left).
struct BoundaryEdge {
  Point from;
  Point to;
  Side normal = Side::left;

  Orientation orientation() const { return orientation_of(normal); }
  /// x of a vertical edge, y of a horizontal one.
  Coord position() const { return orientation() == Orientation::vertical ? from.x : from.y; }
  Coord span_lo() const;
  Coord span_hi() const;
  Coord length() const { return span_hi() - span_lo(); }

  bool operator==(const BoundaryEdge&) const = default;
};

class InvalidShape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverlappingInputShapes : public std::runtime_error {
 public:
  OverlappingInputShapes(const std::string& a, const std::string& b)
      : std::runtime_error("shapes '" + a + "' and '" + b + "' overlap"), first(a), second(b) {}
  std::string first;
  std::string second;
};

/// A feature polygon stored as a union of rects. The union must be
/// edge-connected; rects of one shape may overlap each other.
class RectilinearShape {
 public:
  RectilinearShape(std::string id, std::vector<Rect> rects);

  const std::string& id() const { return id_; }
  std::span<const Rect> rects() const { return rects_; }
  /// Outline edges, one loop after another, each loop counter-clockwise.
  std::span<const BoundaryEdge> edges() const { return edges_; }
  const Rect& bbox() const { return bbox_; }
  Coord area() const { return area_; }
  bool is_rect() const { return rects_.size() == 1; }

 private:
  std::string id_;
  std::vector<Rect> rects_;
  std::vector<BoundaryEdge> edges_;
  Rect bbox_;
  Coord area_ = 0;
};

/// Throws OverlappingInputShapes if the interiors intersect.
Coord shape_distance(const RectilinearShape& a, const RectilinearShape& b,
                     Metric metric = Metric::chebyshev);
bool shapes_overlap(const RectilinearShape& a, const RectilinearShape& b);

/// Area of a union of rects, by coordinate compression.
Coord union_area(std::span<const Rect> rects);

/// Cuts r into consecutive pieces at the given positions along the axis of
/// `along` (x for horizontal). Positions must be strictly inside r.
std::vector<Rect> split_rect(const Rect& r, Orientation along, std::span<const Coord> positions);

/// Uniform grid bucketing of ids by rect footprint.
class SpatialIndex {
 public:
  explicit SpatialIndex(Coord cell_size);

  void insert(std::size_t id, const Rect& r);
  /// Every id whose inserted rect lies within d of r (plus some that don't).
  /// Sorted, no duplicates.
  std::vector<std::size_t> query(const Rect& r, Coord d) const;
  Coord cell_size() const { return cell_; }
  bool empty() const { return cells_.empty(); }

 private:
  struct CellKey {
    Coord cx;
    Coord cy;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };
  Coord cell_of(Coord v) const;

  Coord cell_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

/// Spatial index over a fixed shape list, answering exact-geometry questions.
class ShapeIndex {
 public:
  ShapeIndex(std::span<const RectilinearShape> shapes, Coord cell_size);

  /// Ids of shapes within distance d of the given rect (exact, sorted).
  std::vector<std::size_t> near(const Rect& r, Coord d, Metric metric) const;
  /// True if the open rect r intersects the interior of any shape.
  bool interior_hits(const Rect& r) const;
  std::span<const RectilinearShape> shapes() const { return shapes_; }

 private:
  std::span<const RectilinearShape> shapes_;
  SpatialIndex grid_;
};

}  // namespace tplec
