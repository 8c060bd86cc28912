#include "tplec/graphs.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace tplec {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

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
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Conflict edge each candidate is attached to, or npos.
std::vector<std::size_t> candidate_edges(const LayoutGraph& g, const EndCutGraph& ecg) {
  std::vector<std::size_t> out(ecg.candidates.size(), npos);
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    if (auto c = g.conflict_edges[e].candidate) {
      out[*c] = e;
    }
  }
  return out;
}

// Extra edges that make end-cut conflicts visible to connectivity: each EE
// edge links one endpoint of each of the two layout edges it constrains.
std::vector<std::pair<std::size_t, std::size_t>> coupling_edges(const LayoutGraph& g, const EndCutGraph& ecg) {
  const auto owner = candidate_edges(g, ecg);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [a, b] : ecg.conflict_edges) {
    if (owner[a] != npos && owner[b] != npos) {
      out.emplace_back(g.conflict_edges[owner[a]].u, g.conflict_edges[owner[b]].u);
    }
  }
  return out;
}

// Splits g by a vertex -> piece assignment (npos drops the vertex). Edges
// whose endpoints land in different pieces are dropped.
std::vector<Subgraph> partition(const LayoutGraph& g, const EndCutGraph& ecg, std::span<const std::size_t> piece_of,
                                std::size_t piece_count) {
  std::vector<Subgraph> pieces(piece_count);
  std::vector<std::size_t> local(g.vertices.size(), npos);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const std::size_t p = piece_of[v];
    if (p == npos) continue;
    local[v] = pieces[p].graph.vertices.size();
    pieces[p].graph.vertices.push_back(g.vertices[v]);
    pieces[p].vertex_map.push_back(v);
  }
  std::vector<std::pair<std::size_t, std::size_t>> cand_local(ecg.candidates.size(), {npos, npos});
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    const ConflictEdge& ce = g.conflict_edges[e];
    const std::size_t p = piece_of[ce.u];
    if (p == npos || p != piece_of[ce.v]) continue;
    Subgraph& s = pieces[p];
    ConflictEdge le{local[ce.u], local[ce.v], std::nullopt};
    if (ce.candidate) {
      const std::size_t lc = s.cuts.candidates.size();
      s.cuts.candidates.push_back(ecg.candidates[*ce.candidate]);
      s.candidate_map.push_back(*ce.candidate);
      cand_local[*ce.candidate] = {p, lc};
      le.candidate = lc;
    }
    s.graph.conflict_edges.push_back(le);
    s.conflict_map.push_back(e);
  }
  for (std::size_t e = 0; e < g.stitch_edges.size(); ++e) {
    const StitchEdge& se = g.stitch_edges[e];
    const std::size_t p = piece_of[se.u];
    if (p == npos || p != piece_of[se.v]) continue;
    StitchEdge le = se;
    le.u = local[se.u];
    le.v = local[se.v];
    pieces[p].graph.stitch_edges.push_back(le);
    pieces[p].stitch_map.push_back(e);
  }
  auto carry = [&](const auto& edges, auto member) {
    for (const auto& [a, b] : edges) {
      const auto [pa, la] = cand_local[a];
      const auto [pb, lb] = cand_local[b];
      if (pa != npos && pa == pb) {
        (pieces[pa].cuts.*member).emplace_back(la, lb);
      }
    }
  };
  carry(ecg.conflict_edges, &EndCutGraph::conflict_edges);
  carry(ecg.merge_edges, &EndCutGraph::merge_edges);
  for (Subgraph& s : pieces) {
    s.cuts.rebuild_adjacency();
  }
  return pieces;
}

std::vector<Subgraph> components_from(Dsu& dsu, const LayoutGraph& g, const EndCutGraph& ecg) {
  std::vector<std::size_t> piece_of(g.vertices.size(), npos);
  std::vector<std::size_t> root_piece(g.vertices.size(), npos);
  std::size_t count = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const std::size_t r = dsu.find(v);
    if (root_piece[r] == npos) root_piece[r] = count++;
    piece_of[v] = root_piece[r];
  }
  return partition(g, ecg, piece_of, count);
}

}  // namespace

void EndCutGraph::rebuild_adjacency() {
  conflict_adjacency.assign(candidates.size(), {});
  for (const auto& [a, b] : conflict_edges) {
    conflict_adjacency[a].push_back(b);
    conflict_adjacency[b].push_back(a);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> conflict_pairs(const ShapeIndex& index, Coord dis_m, Metric metric) {
  const auto shapes = index.shapes();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    std::vector<std::size_t> near;
    for (const Rect& r : shapes[i].rects()) {
      for (std::size_t j : index.near(r, dis_m, metric)) {
        if (j > i) near.push_back(j);
      }
    }
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (std::size_t j : near) out.emplace_back(i, j);
  }
  return out;
}

LayoutGraph build_layout_graph(const LayoutDocument& doc, const ShapeIndex& index,
                               std::span<const EndCutCandidate> cuts) {
  LayoutGraph g;
  for (std::size_t i = 0; i < doc.shapes.size(); ++i) {
    const auto rects = doc.shapes[i].rects();
    g.vertices.push_back({i, 0, std::vector<Rect>(rects.begin(), rects.end())});
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_pair;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    by_pair[{std::min(cuts[c].first, cuts[c].second), std::max(cuts[c].first, cuts[c].second)}] = c;
  }
  for (const auto& [i, j] : conflict_pairs(index, doc.params.dis_m, doc.params.metric)) {
    ConflictEdge e{i, j, std::nullopt};
    if (auto it = by_pair.find({i, j}); it != by_pair.end()) {
      e.candidate = it->second;
    }
    g.conflict_edges.push_back(e);
  }
  return g;
}

namespace {

struct Interval {
  Coord lo;
  Coord hi;
};

std::vector<Coord> stitch_positions(const Rect& feature, Orientation axis, std::vector<Interval> covered,
                                    Coord margin) {
  const Coord f_lo = axis == Orientation::horizontal ? feature.lo.x : feature.lo.y;
  const Coord f_hi = axis == Orientation::horizontal ? feature.hi.x : feature.hi.y;
  for (auto& iv : covered) {
    iv.lo = std::max(iv.lo, f_lo);
    iv.hi = std::min(iv.hi, f_hi);
  }
  std::erase_if(covered, [](const Interval& iv) { return iv.hi < iv.lo; });
  std::sort(covered.begin(), covered.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& iv : covered) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  std::vector<Coord> out;
  const Coord need = std::max<Coord>(margin, 2);
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    const Coord a = merged[k].hi;
    const Coord b = merged[k + 1].lo;
    if (b - a >= need) {
      out.push_back(a + (b - a) / 2);
    }
  }
  return out;
}

}  // namespace

LayoutGraph generate_stitch_candidates(const LayoutDocument& doc, const LayoutGraph& g,
                                       std::span<const EndCutCandidate> cuts) {
  const DecompositionParams& p = doc.params;
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<std::size_t>> neighbours(n);
  for (const auto& e : g.conflict_edges) {
    neighbours[e.u].push_back(e.v);
    neighbours[e.v].push_back(e.u);
  }

  LayoutGraph out;
  std::vector<std::vector<std::size_t>> segments_of(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex& vert = g.vertices[v];
    std::vector<Coord> cuts_at;
    Orientation axis = Orientation::horizontal;
    if (vert.rects.size() == 1 && !neighbours[v].empty()) {
      const Rect& r = vert.rects.front();
      if (r.width() != r.height()) {
        axis = r.width() > r.height() ? Orientation::horizontal : Orientation::vertical;
        std::vector<Interval> covered;
        for (std::size_t w : neighbours[v]) {
          const Rect nb = inflate(bounding_box(g.vertices[w].rects), p.dis_m);
          covered.push_back(axis == Orientation::horizontal ? Interval{nb.lo.x, nb.hi.x} : Interval{nb.lo.y, nb.hi.y});
        }
        cuts_at = stitch_positions(r, axis, std::move(covered), p.stitch_margin);
      }
    }
    if (cuts_at.empty()) {
      segments_of[v].push_back(out.vertices.size());
      out.vertices.push_back({vert.feature, 0, vert.rects});
      continue;
    }
    const Rect& r = vert.rects.front();
    const auto pieces = split_rect(r, axis, cuts_at);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      segments_of[v].push_back(out.vertices.size());
      out.vertices.push_back({vert.feature, k, {pieces[k]}});
    }
    for (std::size_t k = 0; k < cuts_at.size(); ++k) {
      const Point at = axis == Orientation::horizontal ? Point{cuts_at[k], (r.lo.y + r.hi.y) / 2}
                                                       : Point{(r.lo.x + r.hi.x) / 2, cuts_at[k]};
      out.stitch_edges.push_back({segments_of[v][k], segments_of[v][k + 1], at, axis});
    }
  }

  for (const auto& e : g.conflict_edges) {
    std::vector<std::pair<std::size_t, std::size_t>> close;
    for (std::size_t a : segments_of[e.u]) {
      for (std::size_t b : segments_of[e.v]) {
        if (rects_distance(out.vertices[a].rects, out.vertices[b].rects, p.metric) <= p.dis_m) {
          close.emplace_back(a, b);
        }
      }
    }
    // The candidate goes to the close segment pair nearest its boxes.
    std::size_t carrier = close.size();
    if (e.candidate) {
      std::vector<Rect> boxes;
      for (const auto& b : cuts[*e.candidate].boxes) boxes.push_back(b.rect);
      Coord best = std::numeric_limits<Coord>::max();
      for (std::size_t k = 0; k < close.size(); ++k) {
        const Coord d = rects_distance(out.vertices[close[k].first].rects, boxes, p.metric) +
                        rects_distance(out.vertices[close[k].second].rects, boxes, p.metric);
        if (d < best) {
          best = d;
          carrier = k;
        }
      }
    }
    for (std::size_t k = 0; k < close.size(); ++k) {
      ConflictEdge ce{close[k].first, close[k].second, std::nullopt};
      if (k == carrier) ce.candidate = e.candidate;
      out.conflict_edges.push_back(ce);
    }
  }
  return out;
}

EndCutGraph build_end_cut_graph(std::vector<EndCutCandidate> cuts, Coord dis_c, Metric metric,
                                const MergeRule& mergeable) {
  EndCutGraph ecg;
  ecg.candidates = std::move(cuts);
  SpatialIndex grid(std::max<Coord>(dis_c, 1));
  for (std::size_t c = 0; c < ecg.candidates.size(); ++c) {
    for (const auto& b : ecg.candidates[c].boxes) grid.insert(c, b.rect);
  }
  for (std::size_t a = 0; a < ecg.candidates.size(); ++a) {
    std::vector<std::size_t> near;
    for (const auto& box : ecg.candidates[a].boxes) {
      for (std::size_t b : grid.query(box.rect, dis_c)) {
        if (b > a) near.push_back(b);
      }
    }
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (std::size_t b : near) {
      if (candidate_distance(ecg.candidates[a], ecg.candidates[b], metric) > dis_c) continue;
      if (mergeable && mergeable(ecg.candidates[a], ecg.candidates[b])) {
        ecg.merge_edges.emplace_back(a, b);
      } else {
        ecg.conflict_edges.emplace_back(a, b);
      }
    }
  }
  ecg.rebuild_adjacency();
  return ecg;
}

Subgraph extract_subgraph(const LayoutGraph& g, const EndCutGraph& ecg, std::span<const std::size_t> vertices) {
  std::vector<std::size_t> piece_of(g.vertices.size(), npos);
  for (std::size_t v : vertices) piece_of[v] = 0;
  return std::move(partition(g, ecg, piece_of, 1).front());
}

std::vector<Subgraph> connected_components(const LayoutGraph& g, const EndCutGraph& ecg) {
  Dsu dsu(g.vertices.size());
  for (const auto& e : g.conflict_edges) dsu.unite(e.u, e.v);
  for (const auto& e : g.stitch_edges) dsu.unite(e.u, e.v);
  for (const auto& [a, b] : coupling_edges(g, ecg)) dsu.unite(a, b);
  return components_from(dsu, g, ecg);
}

std::vector<Subgraph> connected_components(const LayoutGraph& g) {
  EndCutGraph none;
  std::size_t max_cand = 0;
  bool any = false;
  for (const auto& e : g.conflict_edges) {
    if (e.candidate) {
      max_cand = std::max(max_cand, *e.candidate);
      any = true;
    }
  }
  // Placeholder candidates keep the graph's annotations intact.
  none.candidates.resize(any ? max_cand + 1 : 0);
  none.rebuild_adjacency();
  return connected_components(g, none);
}

std::vector<std::size_t> find_bridges(std::size_t vertex_count,
                                      std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u == v) continue;
    adj[u].emplace_back(v, e);
    adj[v].emplace_back(u, e);
  }
  std::vector<std::size_t> disc(vertex_count, npos);
  std::vector<std::size_t> low(vertex_count, 0);
  std::vector<std::size_t> bridges;
  struct Frame {
    std::size_t v;
    std::size_t parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::size_t timer = 0;
  for (std::size_t root = 0; root < vertex_count; ++root) {
    if (disc[root] != npos) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, npos, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        const auto [w, e] = adj[f.v][f.next++];
        if (e == f.parent_edge) continue;
        if (disc[w] == npos) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, e, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        const std::size_t parent = stack.back().v;
        low[parent] = std::min(low[parent], low[done.v]);
        if (low[done.v] > disc[parent]) bridges.push_back(done.parent_edge);
      }
    }
  }
  std::sort(bridges.begin(), bridges.end());
  return bridges;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> plain_edges(const LayoutGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : g.conflict_edges) edges.emplace_back(e.u, e.v);
  for (const auto& e : g.stitch_edges) edges.emplace_back(e.u, e.v);
  return edges;
}

EdgeRef ref_of(const LayoutGraph& g, std::size_t flat) {
  if (flat < g.conflict_edges.size()) return {EdgeKind::conflict, flat};
  return {EdgeKind::stitch, flat - g.conflict_edges.size()};
}

}  // namespace

std::vector<EdgeRef> find_bridges(const LayoutGraph& g) {
  const auto edges = plain_edges(g);
  std::vector<EdgeRef> out;
  for (std::size_t e : find_bridges(g.vertices.size(), edges)) out.push_back(ref_of(g, e));
  return out;
}

std::vector<EdgeRef> splittable_bridges(const LayoutGraph& g, const EndCutGraph& ecg) {
  auto edges = plain_edges(g);
  const std::size_t real = edges.size();
  for (const auto& c : coupling_edges(g, ecg)) edges.push_back(c);
  std::vector<EdgeRef> out;
  for (std::size_t e : find_bridges(g.vertices.size(), edges)) {
    if (e >= real) continue;
    const EdgeRef ref = ref_of(g, e);
    if (ref.kind == EdgeKind::conflict) {
      const auto& cand = g.conflict_edges[ref.index].candidate;
      if (cand && ecg.ee_degree(*cand) != 0) continue;
    }
    out.push_back(ref);
  }
  return out;
}

namespace {

std::pair<std::size_t, std::size_t> endpoints(const LayoutGraph& g, EdgeRef e) {
  if (e.kind == EdgeKind::conflict) return {g.conflict_edges[e.index].u, g.conflict_edges[e.index].v};
  return {g.stitch_edges[e.index].u, g.stitch_edges[e.index].v};
}

BridgeSplit split_with(const LayoutGraph& g, const EndCutGraph& ecg, std::span<const EdgeRef> bridges) {
  std::vector<char> removed_ce(g.conflict_edges.size(), 0);
  std::vector<char> removed_se(g.stitch_edges.size(), 0);
  for (const EdgeRef& b : bridges) {
    (b.kind == EdgeKind::conflict ? removed_ce : removed_se)[b.index] = 1;
  }
  Dsu dsu(g.vertices.size());
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    if (!removed_ce[e]) dsu.unite(g.conflict_edges[e].u, g.conflict_edges[e].v);
  }
  for (std::size_t e = 0; e < g.stitch_edges.size(); ++e) {
    if (!removed_se[e]) dsu.unite(g.stitch_edges[e].u, g.stitch_edges[e].v);
  }
  for (const auto& [a, b] : coupling_edges(g, ecg)) dsu.unite(a, b);

  BridgeSplit split;
  split.pieces = components_from(dsu, g, ecg);
  std::vector<std::size_t> piece_of(g.vertices.size(), npos);
  for (std::size_t p = 0; p < split.pieces.size(); ++p) {
    for (std::size_t v : split.pieces[p].vertex_map) piece_of[v] = p;
  }
  std::vector<std::vector<std::pair<std::size_t, EdgeRef>>> tree(split.pieces.size());
  for (const EdgeRef& b : bridges) {
    const auto [u, v] = endpoints(g, b);
    tree[piece_of[u]].emplace_back(piece_of[v], b);
    tree[piece_of[v]].emplace_back(piece_of[u], b);
  }
  std::vector<char> seen(split.pieces.size(), 0);
  for (std::size_t root = 0; root < split.pieces.size(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t p = q.front();
      q.pop();
      for (const auto& [child, edge] : tree[p]) {
        if (seen[child]) continue;
        seen[child] = 1;
        split.links.push_back({edge, p, child});
        q.push(child);
      }
    }
  }
  return split;
}

}  // namespace

BridgeSplit split_on_bridges(const LayoutGraph& g, const EndCutGraph& ecg) {
  const auto bridges = splittable_bridges(g, ecg);
  return split_with(g, ecg, bridges);
}

BridgeSplit split_on_bridge(const LayoutGraph& g, const EndCutGraph& ecg, EdgeRef e) {
  const auto bridges = splittable_bridges(g, ecg);
  if (std::find(bridges.begin(), bridges.end(), e) == bridges.end()) {
    throw std::invalid_argument("edge is not a splittable bridge");
  }
  const EdgeRef only[] = {e};
  return split_with(g, ecg, only);
}

void reconcile_bridges(const BridgeSplit& split, const LayoutGraph& g, std::vector<int>& colors,
                       std::vector<char>& selected) {
  for (const BridgeLink& link : split.links) {
    const auto [u, v] = endpoints(g, link.edge);
    bool flip = false;
    if (link.edge.kind == EdgeKind::conflict) {
      if (colors[u] == colors[v]) {
        if (const auto& cand = g.conflict_edges[link.edge.index].candidate) {
          selected[*cand] = 1;
        } else {
          flip = true;
        }
      }
    } else {
      flip = colors[u] != colors[v];
    }
    if (flip) {
      for (std::size_t w : split.pieces[link.child_piece].vertex_map) colors[w] ^= 1;
    }
  }
}

}  // namespace tplec
