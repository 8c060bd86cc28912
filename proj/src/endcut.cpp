#include "tplec/endcut.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "tplec/graphs.hpp"

namespace tplec {

namespace {

bool in_range(Coord v, Coord lo, Coord hi) { return lo <= v && v <= hi; }

bool positive_normal(Side s) { return s == Side::right || s == Side::top; }

// Window check with a known orientation: `across` spans the gap between the
// two edges, `along` runs parallel to them.
bool fits(Coord across, Coord along, const DecompositionParams& p) {
  return in_range(across, p.h_low, p.h_high) && in_range(along, p.w_low, p.w_high);
}

Rect oriented_box(Orientation edges, Coord across_lo, Coord across_hi, Coord along_lo, Coord along_hi) {
  if (edges == Orientation::vertical) {
    return {{across_lo, along_lo}, {across_hi, along_hi}};
  }
  return {{along_lo, across_lo}, {along_hi, across_hi}};
}

std::optional<EndCutBox> parallel_box(const BoundaryEdge& se1, const BoundaryEdge& se2, const CutContext& ctx) {
  const DecompositionParams& p = ctx.params;
  if (positive_normal(se1.normal) == positive_normal(se2.normal)) {
    return std::nullopt;  // both normals point the same way
  }
  const BoundaryEdge& low = positive_normal(se1.normal) ? se1 : se2;   // faces +x / +y
  const BoundaryEdge& high = positive_normal(se1.normal) ? se2 : se1;  // faces -x / -y
  const Coord gap = high.position() - low.position();
  if (gap <= 0) {
    return std::nullopt;  // edges face away from each other
  }
  const Coord ov_lo = std::max(low.span_lo(), high.span_lo());
  const Coord ov_hi = std::min(low.span_hi(), high.span_hi());
  const Orientation o = se1.orientation();
  if (ov_hi > ov_lo) {
    const Coord width = ov_hi - ov_lo;
    if (!fits(gap, width, p) || width > p.w_th || gap > p.dis_m) {
      return std::nullopt;
    }
    return EndCutBox{oriented_box(o, low.position(), high.position(), ov_lo, ov_hi), BoxKind::edge_edge, se1, se2};
  }
  // Spans do not overlap: box spans the corner-to-corner gap.
  const Coord along_lo = std::min(low.span_hi(), high.span_hi());
  const Coord along_hi = std::max(low.span_lo(), high.span_lo());
  const Coord along = along_hi - along_lo;
  if (along <= 0 || !fits(gap, along, p)) {
    return std::nullopt;
  }
  const Gap g = o == Orientation::vertical ? Gap{gap, along} : Gap{along, gap};
  if (!gap_within(g, p.dis_m, p.metric)) {
    return std::nullopt;
  }
  return EndCutBox{oriented_box(o, low.position(), high.position(), along_lo, along_hi), BoxKind::corner_corner,
                   se1, se2};
}

std::optional<EndCutBox> perpendicular_box(const BoundaryEdge& se1, const BoundaryEdge& se2, const CutContext& ctx) {
  const BoundaryEdge& v = se1.orientation() == Orientation::vertical ? se1 : se2;
  const BoundaryEdge& h = se1.orientation() == Orientation::vertical ? se2 : se1;
  // The box must sit on the outward side of both edges, running from a
  // corner of one to a corner of the other.
  Coord x_far = 0;
  if (v.normal == Side::right) {
    x_far = h.span_lo();
    if (x_far <= v.position()) return std::nullopt;
  } else {
    x_far = h.span_hi();
    if (x_far >= v.position()) return std::nullopt;
  }
  Coord y_far = 0;
  if (h.normal == Side::top) {
    y_far = v.span_lo();
    if (y_far <= h.position()) return std::nullopt;
  } else {
    y_far = v.span_hi();
    if (y_far >= h.position()) return std::nullopt;
  }
  const Rect box = make_rect(v.position(), y_far, x_far, h.position());
  const DecompositionParams& p = ctx.params;
  if (!fits_dimension_window(box, p) || !gap_within({box.width(), box.height()}, p.dis_m, p.metric)) {
    return std::nullopt;
  }
  return EndCutBox{box, BoxKind::corner_corner, se1, se2};
}

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Groups indices by DSU root, groups ordered by smallest member.
std::vector<std::vector<std::size_t>> groups_of(Dsu& dsu, std::span<const std::size_t> members) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> root_slot(dsu.parent.size(), static_cast<std::size_t>(-1));
  for (std::size_t m : members) {
    const std::size_t r = dsu.find(m);
    if (root_slot[r] == static_cast<std::size_t>(-1)) {
      root_slot[r] = out.size();
      out.emplace_back();
    }
    out[root_slot[r]].push_back(m);
  }
  return out;
}

bool smaller_box(const EndCutBox& a, const EndCutBox& b) {
  if (a.rect.area() != b.rect.area()) return a.rect.area() < b.rect.area();
  return a.rect < b.rect;
}

}  // namespace

bool fits_dimension_window(const Rect& r, const DecompositionParams& p) {
  return fits(r.width(), r.height(), p) || fits(r.height(), r.width(), p);
}

std::optional<EndCutBox> generate_end_cut_box(const BoundaryEdge& se1, const BoundaryEdge& se2,
                                              const CutContext& ctx) {
  std::optional<EndCutBox> box = se1.orientation() == se2.orientation() ? parallel_box(se1, se2, ctx)
                                                                         : perpendicular_box(se1, se2, ctx);
  if (box && ctx.index.interior_hits(box->rect)) {
    return std::nullopt;
  }
  return box;
}

std::vector<EndCutBox> resolve_box_overlaps(std::vector<EndCutBox> boxes) {
  // Identical rects from different edge pairs count once; edge-edge wins.
  std::sort(boxes.begin(), boxes.end(), [](const EndCutBox& a, const EndCutBox& b) {
    if (a.rect != b.rect) return a.rect < b.rect;
    return a.kind < b.kind;
  });
  boxes.erase(std::unique(boxes.begin(), boxes.end(),
                          [](const EndCutBox& a, const EndCutBox& b) { return a.rect == b.rect; }),
              boxes.end());

  const std::size_t n = boxes.size();
  Dsu touching(n);
  std::size_t components = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (closures_intersect(boxes[i].rect, boxes[j].rect) && touching.unite(i, j)) {
        --components;
      }
    }
  }
  if (components == n) {
    return boxes;
  }

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<EndCutBox> kept;
  for (const auto& comp : groups_of(touching, all)) {
    std::vector<std::size_t> survivors;
    for (std::size_t i : comp) {
      bool drop = false;
      if (boxes[i].kind == BoxKind::corner_corner) {
        for (std::size_t j : comp) {
          if (boxes[j].kind == BoxKind::edge_edge && closures_intersect(boxes[i].rect, boxes[j].rect)) {
            drop = true;
            break;
          }
        }
      }
      if (!drop) survivors.push_back(i);
    }
    Dsu overlapping(n);
    for (std::size_t a = 0; a < survivors.size(); ++a) {
      for (std::size_t b = a + 1; b < survivors.size(); ++b) {
        if (interiors_intersect(boxes[survivors[a]].rect, boxes[survivors[b]].rect)) {
          overlapping.unite(survivors[a], survivors[b]);
        }
      }
    }
    for (const auto& chain : groups_of(overlapping, survivors)) {
      const auto best = std::min_element(chain.begin(), chain.end(), [&](std::size_t a, std::size_t b) {
        return smaller_box(boxes[a], boxes[b]);
      });
      kept.push_back(boxes[*best]);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const EndCutBox& a, const EndCutBox& b) { return a.rect < b.rect; });
  return kept;
}

std::optional<EndCutCandidate> generate_end_cut(std::size_t s1, std::size_t s2, const CutContext& ctx) {
  if (s1 == s2) {
    return std::nullopt;
  }
  if (s1 > s2) {
    std::swap(s1, s2);
  }
  const auto shapes = ctx.index.shapes();
  const RectilinearShape& a = shapes[s1];
  const RectilinearShape& b = shapes[s2];
  if (rects_distance(a.rects(), b.rects(), ctx.params.metric) > ctx.params.dis_m) {
    return std::nullopt;
  }
  std::vector<EndCutBox> found;
  for (const BoundaryEdge& e1 : a.edges()) {
    for (const BoundaryEdge& e2 : b.edges()) {
      if (auto box = generate_end_cut_box(e1, e2, ctx)) {
        found.push_back(*box);
      }
    }
  }
  auto boxes = resolve_box_overlaps(std::move(found));
  if (boxes.empty()) {
    return std::nullopt;
  }
  return EndCutCandidate{s1, s2, std::move(boxes)};
}

std::vector<EndCutCandidate> generate_end_cuts(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                               const CutContext& ctx) {
  std::vector<EndCutCandidate> out;
  for (const auto& [i, j] : pairs) {
    if (auto c = generate_end_cut(i, j, ctx)) {
      out.push_back(std::move(*c));
    }
  }
  return out;
}

bool union_is_rectangle(const Rect& a, const Rect& b) {
  const Rect box = bounding_box(a, b);
  if (box == a || box == b) {
    return true;  // containment
  }
  const bool same_y = a.lo.y == b.lo.y && a.hi.y == b.hi.y;
  const bool same_x = a.lo.x == b.lo.x && a.hi.x == b.hi.x;
  if (same_y && a.lo.x <= b.hi.x && b.lo.x <= a.hi.x) {
    return true;
  }
  return same_x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}

bool mergeable_pair(const EndCutCandidate& a, const EndCutCandidate& b, const CutContext& ctx) {
  for (const EndCutBox& ba : a.boxes) {
    for (const EndCutBox& bb : b.boxes) {
      if (!union_is_rectangle(ba.rect, bb.rect)) {
        continue;
      }
      const Rect merged = bounding_box(ba.rect, bb.rect);
      if (fits_dimension_window(merged, ctx.params) && !ctx.index.interior_hits(merged)) {
        return true;
      }
    }
  }
  return false;
}

Coord candidate_distance(const EndCutCandidate& a, const EndCutCandidate& b, Metric metric) {
  Coord best = std::numeric_limits<Coord>::max();
  for (const EndCutBox& ba : a.boxes) {
    for (const EndCutBox& bb : b.boxes) {
      best = std::min(best, gap_distance(rect_gap(ba.rect, bb.rect), metric));
    }
  }
  return best;
}

std::vector<std::size_t> preselect_end_cuts(const EndCutGraph& ecg) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < ecg.candidates.size(); ++c) {
    if (ecg.ee_degree(c) == 0) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace tplec
