// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "support.hpp"
#include "tplec/decompose.hpp"
#include "tplec/endcut.hpp"

using namespace tplec;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr std::size_t kOracleInstances = 500;
constexpr std::size_t kOracleMaxVars = 12;
constexpr double kOracleSeconds = 60.0;
constexpr std::size_t kSpeedupLayouts = 100;
constexpr std::size_t kSpeedupMaxShapes = 40;
constexpr std::size_t kSemanticsAssignments = 10000;
constexpr std::size_t kBridgeGraphs = 200;
constexpr std::size_t kBridgeMaxEdges = 12;
constexpr std::size_t kScaleShapes = 10000;
constexpr double kScaleSeconds = 300.0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

void guarded(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, name, ok, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

IlpModel model_for(const testing::Instance& in, bool st, const Rational& alpha) {
  return st ? build_model_with_stitch(in.graph, in.cuts, alpha) : build_model_no_stitch(in.graph, in.cuts);
}

std::pair<bool, std::string> oracle_equivalence() {
  testing::Rng rng(1001);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, largest = 0;
  for (std::size_t t = 0; t < kOracleInstances; ++t) {
    const bool st = t % 2 == 1;
    const auto in = testing::random_instance(rng, kOracleMaxVars, st);
    const auto m = model_for(in, st, Rational(1, 10));
    largest = std::max(largest, m.variables.size());
    const auto s = solve(m);
    mismatches += s.status != SolveStatus::optimal || s.objective != testing::brute_force_model(m);
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && largest <= kOracleMaxVars && secs < kOracleSeconds,
          std::to_string(kOracleInstances) + " instances, max vars " + std::to_string(largest) + ", mismatches " +
              std::to_string(mismatches) + ", " + std::to_string(secs) + " s"};
}

std::pair<bool, std::string> speedup_optimality() {
  testing::Rng rng(1002);
  std::size_t mismatches = 0;
  RunOptions off;
  off.speedups = {false, false, false};
  for (std::size_t t = 0; t < kSpeedupLayouts; ++t) {
    const auto doc = testing::random_layout(rng, kSpeedupMaxShapes);
    mismatches += decompose(doc).stats.cost != decompose(doc, off).stats.cost;
  }
  return {mismatches == 0, std::to_string(kSpeedupLayouts) + " layouts, mismatches " + std::to_string(mismatches)};
}

LayoutDocument odd_ring() {
  return testing::make_doc({{"F", {{0, 0}, {1000, 20}}},
                            {"L", {{0, 60}, {300, 80}}},
                            {"X", {{0, 120}, {300, 140}}},
                            {"Z", {{0, 180}, {1000, 200}}},
                            {"R", {{700, 60}, {1000, 140}}}},
                           50);
}

std::pair<bool, std::string> stitch_dominance() {
  testing::Rng rng(1003);
  std::size_t violations = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const auto doc = testing::random_layout(rng, kSpeedupMaxShapes);
    RunOptions st;
    st.stitch = true;
    violations += decompose(doc, st).stats.cost > decompose(doc).stats.cost;
  }
  for (std::size_t t = 0; t < 200; ++t) {
    const auto in = testing::random_instance(rng, 16, true);
    LayoutGraph merged;
    // Without stitching every feature is one vertex: contract SE edges.
    std::vector<std::size_t> rep(in.graph.vertices.size());
    for (std::size_t v = 0; v < in.graph.vertices.size(); ++v) {
      if (in.graph.vertices[v].segment == 0) merged.vertices.push_back(in.graph.vertices[v]);
      rep[v] = merged.vertices.size() - 1;
    }
    for (auto e : in.graph.conflict_edges) {
      e.u = rep[e.u];
      e.v = rep[e.v];
      merged.conflict_edges.push_back(e);
    }
    const auto with = solve(build_model_with_stitch(in.graph, in.cuts, Rational(1, 10))).objective;
    const auto without = solve(build_model_no_stitch(merged, in.cuts)).objective;
    violations += with > without;
  }
  RunOptions st;
  st.stitch = true;
  const Rational plain = decompose(odd_ring()).stats.cost;
  const Rational stitched = decompose(odd_ring(), st).stats.cost;
  return {violations == 0 && stitched < plain,
          "violations " + std::to_string(violations) + ", odd ring " + format_rational(plain) + " -> " +
              format_rational(stitched)};
}

std::pair<bool, std::string> seven_feature_graph() {
  const auto doc = testing::make_doc({{"1", {{60, 300}, {200, 320}}},
                                      {"2", {{300, 260}, {400, 280}}},
                                      {"3", {{0, 200}, {100, 220}}},
                                      {"4", {{160, 200}, {260, 220}}},
                                      {"5", {{0, 100}, {100, 120}}},
                                      {"6", {{160, 100}, {260, 120}}},
                                      {"7", {{60, 0}, {200, 20}}}});
  const auto r = decompose(doc);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& e : r.graph.conflict_edges) got.emplace(doc.shapes[e.u].id(), doc.shapes[e.v].id());
  const std::set<std::pair<std::string, std::string>> expect{
      {"1", "2"}, {"1", "3"}, {"1", "4"}, {"2", "4"}, {"3", "4"}, {"3", "5"},
      {"3", "6"}, {"4", "5"}, {"4", "6"}, {"5", "6"}, {"5", "7"}, {"6", "7"}};
  return {got == expect, std::to_string(got.size()) + " CE edges"};
}

std::pair<bool, std::string> box_generation() {
  // Two boxes between an L and a U-like feature.
  const RectilinearShape s1("s1", {{{0, 0}, {100, 20}}, {{0, 0}, {20, 100}}});
  const RectilinearShape s2("s2", {{{0, 160}, {20, 260}}, {{20, 240}, {240, 260}}, {{240, 0}, {260, 260}}, {{160, 0}, {240, 20}}});
  const auto doc = testing::make_shape_doc({s1, s2});
  const ShapeIndex index(doc.shapes, doc.params.dis_m);
  const auto c = generate_end_cut(0, 1, {index, doc.params});
  const bool two = c && c->boxes.size() == 2 && c->boxes[0].rect == Rect{{0, 100}, {20, 160}} &&
                   c->boxes[1].rect == Rect{{100, 0}, {160, 20}};

  const auto chain = resolve_box_overlaps({{{{0, 0}, {10, 10}}, BoxKind::edge_edge, {}, {}},
                                           {{{5, 0}, {13, 10}}, BoxKind::edge_edge, {}, {}},
                                           {{{8, 0}, {20, 10}}, BoxKind::edge_edge, {}, {}}});
  const bool min_area = chain.size() == 1 && chain[0].rect == Rect{{5, 0}, {13, 10}};

  const auto corner = resolve_box_overlaps({{{{0, 0}, {60, 40}}, BoxKind::edge_edge, {}, {}},
                                            {{{50, 30}, {90, 70}}, BoxKind::corner_corner, {}, {}}});
  const bool removed = corner.size() == 1 && corner[0].kind == BoxKind::edge_edge;
  return {two && min_area && removed, std::string("two-box ") + (two ? "ok" : "bad") + ", chain minimum " +
                                          (min_area ? "ok" : "bad") + ", corner removal " + (removed ? "ok" : "bad")};
}

std::pair<bool, std::string> constraint_semantics() {
  testing::Rng rng(1006);
  std::size_t mismatches = 0, done = 0, legal = 0;
  while (done < kSemanticsAssignments) {
    const bool st = done % 2 == 1;
    const auto in = testing::random_instance(rng, 20, st);
    const Rational alpha = done % 3 == 0 ? Rational(7, 4) : Rational(1, 10);
    const auto m = model_for(in, st, alpha);
    for (int k = 0; k < 20 && done < kSemanticsAssignments; ++k, ++done) {
      // Random colors and random cut bits; indicators at their least
      // value the constraints allow.
      std::vector<int> colors(in.graph.vertices.size());
      for (auto& c : colors) c = static_cast<int>(rng() % 2);
      std::vector<char> cuts(in.cuts.candidates.size(), 0);
      for (auto& c : cuts) c = static_cast<char>(rng() % 3 == 0);
      std::vector<int> v(m.variables.size(), 0);
      for (std::size_t i = 0; i < colors.size(); ++i) v[m.color_var[i]] = colors[i];
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        if (m.cut_var[c] != no_var) v[m.cut_var[c]] = cuts[c];
        else cuts[c] = 0;
      }
      bool ok = true;
      for (std::size_t e = 0; e < in.graph.conflict_edges.size(); ++e) {
        const auto& ce = in.graph.conflict_edges[e];
        const bool cut = ce.candidate && cuts[*ce.candidate];
        ok = ok && (!cut || colors[ce.u] == colors[ce.v]);
        v[m.conflict_var[e]] = colors[ce.u] == colors[ce.v] && !cut;
      }
      for (const auto& [a, b] : in.cuts.conflict_edges) ok = ok && !(cuts[a] && cuts[b]);
      for (std::size_t e = 0; e < m.stitch_var.size(); ++e) {
        v[m.stitch_var[e]] = colors[in.graph.stitch_edges[e].u] != colors[in.graph.stitch_edges[e].v];
      }
      legal += ok;
      if (m.feasible(v) != ok) {
        ++mismatches;
      } else if (ok && m.evaluate(v) != testing::direct_cost(in.graph, colors, cuts, alpha, st)) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0 && legal > 0, std::to_string(done) + " assignments (" + std::to_string(legal) +
                                            " legal), mismatches " + std::to_string(mismatches)};
}

std::pair<bool, std::string> bridge_oracle() {
  testing::Rng rng(1007);
  std::size_t mismatches = 0, with_bridges = 0;
  for (std::size_t t = 0; t < kBridgeGraphs; ++t) {
    const std::size_t n = 1 + rng() % 10;
    const std::size_t m = rng() % (kBridgeMaxEdges + 1);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t k = 0; k < m; ++k) edges.emplace_back(rng() % n, rng() % n);
    const auto expect = testing::bridges_by_deletion(n, edges);
    with_bridges += !expect.empty();
    mismatches += find_bridges(n, edges) != expect;
  }
  return {mismatches == 0, std::to_string(kBridgeGraphs) + " graphs (" + std::to_string(with_bridges) +
                               " with bridges), mismatches " + std::to_string(mismatches)};
}

std::pair<bool, std::string> cost_arithmetic() {
  DecompositionReport r;
  for (int i = 0; i < 12; ++i) {
    r.conflicts.emplace_back("a" + std::to_string(i), "b" + std::to_string(i));
    r.stitches.push_back({"s" + std::to_string(i), {i, 0}, Orientation::horizontal});
  }
  r.cost = r.recompute_cost();
  const std::string text = format_rational(r.cost);
  const bool line = write_report_string(r).find("\ncost 13.2\n") != std::string::npos;
  return {text == "13.2" && line && r.cost == Rational(66, 5), "cost " + text};
}

std::pair<bool, std::string> scale_smoke() {
  // Clusters on a grid, each a small random layout; clusters are far
  // enough apart that they never interact.
  testing::Rng rng(1009);
  LayoutDocument doc;
  doc.name = "grid";
  std::size_t cluster = 0;
  for (Coord row = 0; doc.shapes.size() < kScaleShapes; ++row) {
    for (Coord col = 0; col < 40 && doc.shapes.size() < kScaleShapes; ++col, ++cluster) {
      auto part = testing::random_layout(rng, std::min<std::size_t>(30, kScaleShapes - doc.shapes.size()), col * 1800,
                                         row * 1200, "c" + std::to_string(cluster) + "_");
      for (auto& s : part.shapes) doc.shapes.push_back(std::move(s));
    }
  }
  apply_default_params(doc);
  RunOptions o;
  o.time_limit_s = kScaleSeconds;
  const auto t0 = Clock::now();
  const auto r = decompose(doc, o);
  const double secs = seconds_since(t0);
  return {r.stats.timeouts == 0 && secs < kScaleSeconds && doc.shapes.size() == kScaleShapes,
          std::to_string(doc.shapes.size()) + " shapes, " + std::to_string(r.stats.subproblems) + " subproblems, " +
              std::to_string(r.stats.timeouts) + " timeouts, cost " + format_rational(r.stats.cost) + ", " +
              std::to_string(secs) + " s"};
}

}  // namespace

int main() {
  guarded(1, "ILP oracle equivalence", oracle_equivalence);
  guarded(2, "speed-up optimality", speedup_optimality);
  guarded(3, "stitch dominance", stitch_dominance);
  guarded(4, "seven-feature graph", seven_feature_graph);
  guarded(5, "end-cut box generation", box_generation);
  guarded(6, "constraint semantics", constraint_semantics);
  guarded(7, "bridge oracle", bridge_oracle);
  guarded(8, "cost arithmetic", cost_arithmetic);
  guarded(9, "scale smoke test", scale_smoke);
  return failures;
}
