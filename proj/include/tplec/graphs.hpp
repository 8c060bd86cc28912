#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tplec/endcut.hpp"
#include "tplec/geometry.hpp"
#include "tplec/layout_io.hpp"

namespace tplec {

/// A feature, or one stitched piece of it.
struct Vertex {
  std::size_t feature = 0;
  std::size_t segment = 0;
  std::vector<Rect> rects;
};

struct ConflictEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::optional<std::size_t> candidate;  // index into the paired EndCutGraph
};

struct StitchEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  Point at;
  Orientation orientation = Orientation::horizontal;
};

struct LayoutGraph {
  std::vector<Vertex> vertices;
  std::vector<ConflictEdge> conflict_edges;
  std::vector<StitchEdge> stitch_edges;
};

struct EndCutGraph {
  std::vector<EndCutCandidate> candidates;
  std::vector<std::pair<std::size_t, std::size_t>> conflict_edges;  // cuts too close to coexist
  std::vector<std::pair<std::size_t, std::size_t>> merge_edges;     // close, but printable as one cut
  std::vector<std::vector<std::size_t>> conflict_adjacency;

  std::size_t ee_degree(std::size_t c) const { return conflict_adjacency[c].size(); }
  void rebuild_adjacency();
};

using MergeRule = std::function<bool(const EndCutCandidate&, const EndCutCandidate&)>;

/// Feature pairs (i < j) within dis_m, sorted.
std::vector<std::pair<std::size_t, std::size_t>> conflict_pairs(const ShapeIndex& index, Coord dis_m, Metric metric);

/// One vertex per shape; conflict edges annotated with the candidate for
/// their feature pair when one exists.
LayoutGraph build_layout_graph(const LayoutDocument& doc, const ShapeIndex& index,
                               std::span<const EndCutCandidate> cuts);

/// Splits single-rect features at stitch candidates. Every conflicting
/// neighbour's bounding box, grown by dis_m, is projected onto the feature's
/// long axis; each uncovered gap between two covered runs that is at least
/// stitch_margin long receives a stitch at its midpoint. Conflict edges are
/// recomputed per segment pair and a candidate follows the segments that
/// touch its boxes.
LayoutGraph generate_stitch_candidates(const LayoutDocument& doc, const LayoutGraph& g,
                                       std::span<const EndCutCandidate> cuts);

/// Candidate pairs within dis_c become merge edges when `mergeable` says so
/// and conflict edges otherwise.
EndCutGraph build_end_cut_graph(std::vector<EndCutCandidate> cuts, Coord dis_c, Metric metric,
                                const MergeRule& mergeable);

/// A vertex-induced piece of a graph with maps back to its parent.
struct Subgraph {
  LayoutGraph graph;
  EndCutGraph cuts;
  std::vector<std::size_t> vertex_map;
  std::vector<std::size_t> conflict_map;
  std::vector<std::size_t> stitch_map;
  std::vector<std::size_t> candidate_map;
};

/// Induced subgraph on `vertices`. Candidates come along with their conflict
/// edge; end-cut edges are kept between candidates that both come along.
Subgraph extract_subgraph(const LayoutGraph& g, const EndCutGraph& ecg, std::span<const std::size_t> vertices);

/// Independent pieces: connectivity through conflict and stitch edges, plus
/// end-cut conflicts, which tie the endpoints of the two cut edges together.
std::vector<Subgraph> connected_components(const LayoutGraph& g, const EndCutGraph& ecg);
std::vector<Subgraph> connected_components(const LayoutGraph& g);

enum class EdgeKind { conflict, stitch };

struct EdgeRef {
  EdgeKind kind = EdgeKind::conflict;
  std::size_t index = 0;

  auto operator<=>(const EdgeRef&) const = default;
};

/// Bridges of an undirected multigraph, as indices into `edges`. Iterative
/// DFS with low-link values, O(V + E).
std::vector<std::size_t> find_bridges(std::size_t vertex_count, std::span<const std::pair<std::size_t, std::size_t>> edges);

/// Bridges among the conflict and stitch edges of g.
std::vector<EdgeRef> find_bridges(const LayoutGraph& g);

/// Bridges that can be cut without losing optimality: bridges of the graph
/// augmented with end-cut couplings, whose own candidate (if any) has no
/// end-cut conflict.
std::vector<EdgeRef> splittable_bridges(const LayoutGraph& g, const EndCutGraph& ecg);

struct BridgeLink {
  EdgeRef edge;
  std::size_t parent_piece = 0;
  std::size_t child_piece = 0;
};

/// Pieces left after removing bridges; links are listed parent-first so
/// they can be reconciled top-down.
struct BridgeSplit {
  std::vector<Subgraph> pieces;
  std::vector<BridgeLink> links;
};

BridgeSplit split_on_bridges(const LayoutGraph& g, const EndCutGraph& ecg);
/// Single-bridge variant; throws std::invalid_argument unless e is splittable.
BridgeSplit split_on_bridge(const LayoutGraph& g, const EndCutGraph& ecg, EdgeRef e);

/// Repairs the removed bridges after each piece was solved on its own.
/// A monochrome conflict bridge selects its cut when it has one, otherwise
/// the child piece flips; a two-colored stitch bridge flips the child piece.
/// `colors` and `selected` are indexed by g's vertices and ecg's candidates.
void reconcile_bridges(const BridgeSplit& split, const LayoutGraph& g, std::vector<int>& colors,
                       std::vector<char>& selected);

}  // namespace tplec
