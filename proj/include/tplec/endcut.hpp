#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tplec/geometry.hpp"
#include "tplec/layout_io.hpp"

namespace tplec {

enum class BoxKind { edge_edge, corner_corner };

/// One trim-mask rectangle bridging two facing shape edges.
struct EndCutBox {
  Rect rect;
  BoxKind kind = BoxKind::edge_edge;
  BoundaryEdge first_edge;   // edge of the lower-indexed shape
  BoundaryEdge second_edge;
};

/// All boxes that together cut shape `first` from shape `second` (first < second).
struct EndCutCandidate {
  std::size_t first = 0;
  std::size_t second = 0;
  std::vector<EndCutBox> boxes;
};

/// Read-only layout state shared by every generation call.
struct CutContext {
  const ShapeIndex& index;
  const DecompositionParams& params;
};

/// Box between two shape edges, or nothing when the edges do not face each
/// other, the box falls outside the dimension window, the box runs along a
/// parallel span longer than w_th, or it would cut into an existing shape.
std::optional<EndCutBox> generate_end_cut_box(const BoundaryEdge& se1, const BoundaryEdge& se2,
                                              const CutContext& ctx);

/// Overlap clean-up for the boxes of one shape pair: components of touching
/// or overlapping boxes are reduced by dropping corner-corner boxes that meet
/// an edge-edge box, then collapsing each chain of area-overlapping boxes to
/// its smallest member. Disjoint or merely touching boxes all survive.
/// Output is sorted by rect.
std::vector<EndCutBox> resolve_box_overlaps(std::vector<EndCutBox> boxes);

/// Candidate between shapes s1 and s2 (indices into ctx.index.shapes()).
std::optional<EndCutCandidate> generate_end_cut(std::size_t s1, std::size_t s2, const CutContext& ctx);

/// One generate_end_cut per pair, in pair order, dropping empty results.
std::vector<EndCutCandidate> generate_end_cuts(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                               const CutContext& ctx);

/// Does r obey the h/w window in at least one orientation?
bool fits_dimension_window(const Rect& r, const DecompositionParams& p);

/// True when a ∪ b is itself a rectangle.
bool union_is_rectangle(const Rect& a, const Rect& b);

/// Two candidates can share one larger trim rectangle: some box of a and
/// some box of b union to a rectangle that fits the dimension window and
/// cuts no shape.
bool mergeable_pair(const EndCutCandidate& a, const EndCutCandidate& b, const CutContext& ctx);

/// Smallest distance between any box of a and any box of b.
Coord candidate_distance(const EndCutCandidate& a, const EndCutCandidate& b, Metric metric);

struct EndCutGraph;

/// Candidates with no end-cut conflict. Such a cut can always be printed, so
/// its layout edge never yields a conflict.
std::vector<std::size_t> preselect_end_cuts(const EndCutGraph& ecg);

}  // namespace tplec
