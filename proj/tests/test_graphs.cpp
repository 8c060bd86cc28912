#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tplec/endcut.hpp"
#include "tplec/graphs.hpp"

using namespace tplec;
using testing::make_doc;

namespace {

LayoutDocument seven_features() {
  return make_doc({{"1", {{60, 300}, {200, 320}}},
                   {"2", {{300, 260}, {400, 280}}},
                   {"3", {{0, 200}, {100, 220}}},
                   {"4", {{160, 200}, {260, 220}}},
                   {"5", {{0, 100}, {100, 120}}},
                   {"6", {{160, 100}, {260, 120}}},
                   {"7", {{60, 0}, {200, 20}}}});
}

struct Built {
  LayoutDocument doc;
  ShapeIndex index;
  std::vector<EndCutCandidate> cuts;
  LayoutGraph graph;
  EndCutGraph ecg;

  explicit Built(LayoutDocument d, bool stitch = false)
      : doc(std::move(d)), index(doc.shapes, doc.params.dis_m) {
    const CutContext ctx{index, doc.params};
    cuts = generate_end_cuts(conflict_pairs(index, doc.params.dis_m, doc.params.metric), ctx);
    graph = build_layout_graph(doc, index, cuts);
    if (stitch) graph = generate_stitch_candidates(doc, graph, cuts);
    ecg = build_end_cut_graph(cuts, doc.params.dis_c, doc.params.metric,
                              [&](const EndCutCandidate& a, const EndCutCandidate& b) { return mergeable_pair(a, b, ctx); });
  }
};

std::vector<std::pair<std::size_t, std::size_t>> plain(const LayoutGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (const auto& c : g.conflict_edges) e.emplace_back(c.u, c.v);
  for (const auto& s : g.stitch_edges) e.emplace_back(s.u, s.v);
  return e;
}

LayoutGraph graph_of(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  LayoutGraph g;
  for (std::size_t v = 0; v < n; ++v) g.vertices.push_back({v, 0, {}});
  for (const auto& [u, v] : edges) g.conflict_edges.push_back({u, v, std::nullopt});
  return g;
}

}  // namespace

TEST_SUITE("graphs") {

TEST_CASE("seven-feature layout graph") {
  const Built b(seven_features());
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& e : b.graph.conflict_edges) {
    got.emplace(b.doc.shapes[e.u].id(), b.doc.shapes[e.v].id());
  }
  const std::set<std::pair<std::string, std::string>> expect{
      {"1", "2"}, {"1", "3"}, {"1", "4"}, {"2", "4"}, {"3", "4"}, {"3", "5"},
      {"3", "6"}, {"4", "5"}, {"4", "6"}, {"5", "6"}, {"5", "7"}, {"6", "7"}};
  CHECK(got == expect);
  CHECK(b.graph.conflict_edges.size() == 12);
  CHECK(connected_components(b.graph, b.ecg).size() == 1);
}

TEST_CASE("conflict edges equal an all-pairs scan") {
  testing::Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    for (Metric m : {Metric::chebyshev, Metric::euclidean}) {
      auto doc = testing::random_layout(rng, 60);
      doc.params.metric = m;
      const ShapeIndex index(doc.shapes, doc.params.dis_m);
      CHECK(conflict_pairs(index, doc.params.dis_m, m) == testing::all_pairs_conflicts(doc));
    }
  }
  // A larger one, still small enough to scan.
  auto big = testing::random_layout(rng, 200);
  for (int k = 0; k < 3; ++k) {
    auto extra = testing::random_layout(rng, 60, 0, 2000 + 700 * k, "e" + std::to_string(k) + "_");
    for (auto& s : extra.shapes) big.shapes.push_back(s);
  }
  const ShapeIndex index(big.shapes, big.params.dis_m);
  CHECK(conflict_pairs(index, big.params.dis_m, Metric::chebyshev) == testing::all_pairs_conflicts(big));
}

TEST_CASE("candidates attach to their conflict edge") {
  const Built b(make_doc({{"a", {{0, 0}, {200, 20}}}, {"b", {{260, 0}, {460, 20}}}, {"c", {{0, -60}, {460, -40}}}}));
  REQUIRE(b.graph.conflict_edges.size() == 3);
  std::size_t with = 0;
  for (const auto& e : b.graph.conflict_edges) {
    if (!e.candidate) continue;
    ++with;
    CHECK(b.ecg.candidates[*e.candidate].first == e.u);
    CHECK(b.ecg.candidates[*e.candidate].second == e.v);
  }
  CHECK(with == 1);
}

TEST_CASE("end-cut graph edges") {
  // Two gaps in neighbouring tracks: their cuts are 40 apart.
  const Built near(make_doc({{"a", {{0, 0}, {100, 20}}},
                             {"b", {{160, 0}, {260, 20}}},
                             {"c", {{0, 60}, {100, 80}}},
                             {"d", {{160, 60}, {260, 80}}}}));
  std::size_t ab = 0, cd = 0;
  for (std::size_t c = 0; c < near.ecg.candidates.size(); ++c) {
    const auto& k = near.ecg.candidates[c];
    if (k.first == 0 && k.second == 1) ab = c;
    if (k.first == 2 && k.second == 3) cd = c;
  }
  const auto has = [&](const auto& edges) {
    return std::find(edges.begin(), edges.end(), std::pair{std::min(ab, cd), std::max(ab, cd)}) != edges.end();
  };
  // The boxes are collinear but 40 apart, so they are not one rectangle.
  CHECK(has(near.ecg.conflict_edges));
  CHECK_FALSE(has(near.ecg.merge_edges));
  CHECK(near.ecg.ee_degree(ab) >= 1);

  // Abutting tracks: the same cuts share an edge and can merge.
  const Built abut(make_doc({{"a", {{0, 0}, {100, 20}}},
                             {"b", {{160, 0}, {260, 20}}},
                             {"c", {{0, 20}, {100, 40}}},
                             {"d", {{160, 20}, {260, 40}}}}));
  bool merged = false;
  for (const auto& [x, y] : abut.ecg.merge_edges) {
    const auto& p = abut.ecg.candidates[x];
    const auto& q = abut.ecg.candidates[y];
    merged = merged || (p.first == 0 && p.second == 1 && q.first == 2 && q.second == 3);
  }
  CHECK(merged);
}

TEST_CASE("components") {
  SUBCASE("two disjoint triangles") {
    const auto g = graph_of(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const auto comps = connected_components(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].vertex_map == std::vector<std::size_t>{0, 1, 2});
    CHECK(comps[1].graph.conflict_edges.size() == 3);
  }
  SUBCASE("random graphs agree with a BFS count") {
    testing::Rng rng(43);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + rng() % 15;
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      const std::size_t m = rng() % 20;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t u = rng() % n, v = rng() % n;
        if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
      }
      const auto comps = connected_components(graph_of(n, edges));
      CHECK(comps.size() == testing::count_components_bfs(n, edges));
      std::size_t vertices = 0, kept = 0;
      for (const auto& c : comps) {
        vertices += c.graph.vertices.size();
        kept += c.graph.conflict_edges.size();
      }
      CHECK(vertices == n);
      CHECK(kept == edges.size());
    }
  }
  SUBCASE("end-cut conflicts join components") {
    LayoutGraph g = graph_of(4, {{0, 1}, {2, 3}});
    g.conflict_edges[0].candidate = 0;
    g.conflict_edges[1].candidate = 1;
    EndCutGraph ecg;
    ecg.candidates.resize(2);
    CHECK(connected_components(g, ecg).size() == 2);
    ecg.conflict_edges = {{0, 1}};
    ecg.rebuild_adjacency();
    const auto comps = connected_components(g, ecg);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].cuts.conflict_edges.size() == 1);
  }
}

TEST_CASE("bridges") {
  SUBCASE("path") {
    const auto e = std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}};
    CHECK(find_bridges(3, e) == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("cycle") {
    const auto e = std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    CHECK(find_bridges(4, e).empty());
  }
  SUBCASE("parallel edges are never bridges") {
    const auto e = std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 1}, {1, 2}};
    CHECK(find_bridges(3, e) == std::vector<std::size_t>{2});
  }
  SUBCASE("random graphs agree with edge deletion") {
    testing::Rng rng(47);
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + rng() % 9;
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      const std::size_t m = rng() % 13;
      for (std::size_t k = 0; k < m; ++k) edges.emplace_back(rng() % n, rng() % n);
      CHECK(find_bridges(n, edges) == testing::bridges_by_deletion(n, edges));
    }
  }
}

TEST_CASE("bridge splitting and reconciliation") {
  SUBCASE("path a-b-c") {
    const auto g = graph_of(3, {{0, 1}, {1, 2}});
    const EndCutGraph ecg;
    const auto split = split_on_bridge(g, ecg, {EdgeKind::conflict, 0});
    REQUIRE(split.pieces.size() == 2);
    std::vector<int> colors(3, 0);
    // Each side solved alone with a proper coloring of its own.
    for (const auto& piece : split.pieces) {
      for (std::size_t k = 0; k < piece.vertex_map.size(); ++k) colors[piece.vertex_map[k]] = static_cast<int>(k % 2);
    }
    std::vector<char> sel;
    reconcile_bridges(split, g, colors, sel);
    CHECK(colors[0] != colors[1]);
    CHECK(colors[1] != colors[2]);
  }
  SUBCASE("non-bridge is refused") {
    const auto g = graph_of(3, {{0, 1}, {1, 2}, {0, 2}});
    const EndCutGraph ecg;
    CHECK_THROWS_AS(split_on_bridge(g, ecg, {EdgeKind::conflict, 0}), std::invalid_argument);
  }
  SUBCASE("two triangles joined by a bridge") {
    const auto g = graph_of(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
    const EndCutGraph ecg;
    const auto split = split_on_bridges(g, ecg);
    REQUIRE(split.pieces.size() == 2);
    REQUIRE(split.links.size() == 1);
    // Whatever each side picks, the merged result has 2 conflicts, as a
    // brute force over all 64 colorings says is optimal.
    const auto best = testing::brute_force_problem(g, ecg, 1, false);
    CHECK(best == Rational(2));
    for (int left = 0; left < 8; ++left) {
      for (int right = 0; right < 8; ++right) {
        std::vector<int> colors(6);
        for (int k = 0; k < 3; ++k) {
          colors[split.pieces[0].vertex_map[k]] = (left >> k) & 1;
          colors[split.pieces[1].vertex_map[k]] = (right >> k) & 1;
        }
        // Only side-optimal colorings (one conflict per triangle) count.
        const auto side = [&](std::size_t p) {
          int c = 0;
          for (const auto& e : split.pieces[p].graph.conflict_edges) {
            c += colors[split.pieces[p].vertex_map[e.u]] == colors[split.pieces[p].vertex_map[e.v]];
          }
          return c;
        };
        if (side(0) != 1 || side(1) != 1) continue;
        std::vector<char> sel;
        reconcile_bridges(split, g, colors, sel);
        const std::vector<char> none;
        CHECK(testing::direct_cost(g, colors, none, 1, false) == Rational(2));
      }
    }
  }
  SUBCASE("bridge with a free cut is resolved by the cut") {
    LayoutGraph g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    g.conflict_edges[1].candidate = 0;
    EndCutGraph ecg;
    ecg.candidates.resize(1);
    ecg.rebuild_adjacency();
    const auto split = split_on_bridge(g, ecg, {EdgeKind::conflict, 1});
    std::vector<int> colors{0, 1, 1, 0};
    std::vector<char> sel(1, 0);
    reconcile_bridges(split, g, colors, sel);
    CHECK(sel[0] == 1);
    CHECK(testing::direct_cost(g, colors, sel, 1, false) == Rational(0));
  }
  SUBCASE("a bridge whose cut has end-cut conflicts is not split") {
    LayoutGraph g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    g.conflict_edges[1].candidate = 0;
    g.conflict_edges[2].candidate = 1;
    EndCutGraph ecg;
    ecg.candidates.resize(2);
    ecg.conflict_edges = {{0, 1}};
    ecg.rebuild_adjacency();
    const auto bridges = splittable_bridges(g, ecg);
    CHECK(std::find(bridges.begin(), bridges.end(), EdgeRef{EdgeKind::conflict, 1}) == bridges.end());
    CHECK(std::find(bridges.begin(), bridges.end(), EdgeRef{EdgeKind::conflict, 0}) != bridges.end());
  }
}

TEST_CASE("stitch candidates") {
  const Built b(make_doc({{"F", {{0, 0}, {1000, 20}}}, {"L", {{0, 60}, {300, 80}}}, {"R", {{700, 60}, {1000, 80}}}}), true);
  REQUIRE(b.graph.stitch_edges.size() == 1);
  const auto& s = b.graph.stitch_edges[0];
  CHECK(s.at == Point{500, 10});
  CHECK(s.orientation == Orientation::horizontal);
  CHECK(b.graph.vertices.size() == 4);
  CHECK(b.graph.vertices[s.u].feature == 0);
  CHECK(b.graph.vertices[s.v].feature == 0);
  // Each segment of F conflicts with one neighbour only.
  CHECK(b.graph.conflict_edges.size() == 2);
}

TEST_CASE("stitching never duplicates a feature-level conflict") {
  testing::Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    const auto doc = testing::random_layout(rng, 30);
    const Built plain_graph(doc);
    const Built split(doc, true);
    std::map<std::pair<std::size_t, std::size_t>, int> per_pair;
    for (const auto& e : split.graph.conflict_edges) {
      const auto fu = split.graph.vertices[e.u].feature;
      const auto fv = split.graph.vertices[e.v].feature;
      ++per_pair[{std::min(fu, fv), std::max(fu, fv)}];
    }
    CHECK(per_pair.size() == plain_graph.graph.conflict_edges.size());
    for (const auto& [k, n] : per_pair) CHECK(n == 1);
    std::size_t cand_plain = 0, cand_split = 0;
    for (const auto& e : plain_graph.graph.conflict_edges) cand_plain += e.candidate.has_value();
    for (const auto& e : split.graph.conflict_edges) cand_split += e.candidate.has_value();
    CHECK(cand_plain == cand_split);
  }
}

}  // TEST_SUITE
