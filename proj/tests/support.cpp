#include "support.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace tplec::testing {

namespace {

Coord pick(Rng& rng, Coord lo, Coord hi) { return std::uniform_int_distribution<Coord>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

LayoutDocument make_doc(const std::vector<std::pair<std::string, Rect>>& rects, Coord dis_m) {
  std::vector<RectilinearShape> shapes;
  for (const auto& [id, r] : rects) shapes.emplace_back(id, std::vector<Rect>{r});
  return make_shape_doc(std::move(shapes), dis_m);
}

LayoutDocument make_shape_doc(std::vector<RectilinearShape> shapes, Coord dis_m) {
  LayoutDocument doc;
  doc.name = "test";
  doc.shapes = std::move(shapes);
  doc.params.dis_m = dis_m;
  apply_default_params(doc);
  return doc;
}

LayoutDocument random_layout(Rng& rng, std::size_t max_shapes, Coord x0, Coord y0, const std::string& prefix) {
  std::vector<std::pair<std::string, Rect>> rects;
  const std::size_t target = static_cast<std::size_t>(pick(rng, 1, static_cast<Coord>(max_shapes)));
  const int tracks = static_cast<int>(pick(rng, 2, 6));
  Coord y = y0;
  Coord x_max = x0;
  for (int t = 0; t < tracks && rects.size() < target; ++t) {
    const Coord width = chance(rng, 0.7) ? 20 : 30;
    Coord x = x0 + pick(rng, 0, 100);
    while (rects.size() < target && x < x0 + 900) {
      const Coord len = pick(rng, 60, 400);
      rects.emplace_back(prefix + std::to_string(rects.size() + 1), Rect{{x, y}, {x + len, y + width}});
      x_max = std::max(x_max, x + len);
      x += len + pick(rng, 30, 220);
    }
    y += width + pick(rng, 30, 110);
  }
  if (rects.size() < target && chance(rng, 0.4)) {
    const Coord x = x_max + pick(rng, 40, 100);
    rects.emplace_back(prefix + std::to_string(rects.size() + 1), Rect{{x, y0}, {x + 20, std::max(y, y0 + 60)}});
  }
  return make_doc(rects);
}

Instance random_instance(Rng& rng, std::size_t max_vars, bool with_stitch) {
  for (;;) {
    Instance in;
    const std::size_t features = static_cast<std::size_t>(pick(rng, 1, 5));
    for (std::size_t f = 0; f < features; ++f) {
      const std::size_t segs = with_stitch && chance(rng, 0.4) ? 2 : 1;
      for (std::size_t s = 0; s < segs; ++s) {
        in.graph.vertices.push_back({f, s, {}});
        if (s > 0) {
          const std::size_t v = in.graph.vertices.size() - 1;
          in.graph.stitch_edges.push_back({v - 1, v, Point{0, 0}, Orientation::horizontal});
        }
      }
    }
    const std::size_t n = in.graph.vertices.size();
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (in.graph.vertices[u].feature == in.graph.vertices[v].feature || !chance(rng, 0.5)) continue;
        ConflictEdge e{u, v, std::nullopt};
        if (chance(rng, 0.4)) {
          e.candidate = in.cuts.candidates.size();
          in.cuts.candidates.push_back({in.graph.vertices[u].feature, in.graph.vertices[v].feature, {}});
        }
        in.graph.conflict_edges.push_back(e);
      }
    }
    for (std::size_t a = 0; a < in.cuts.candidates.size(); ++a) {
      for (std::size_t b = a + 1; b < in.cuts.candidates.size(); ++b) {
        if (chance(rng, 0.35)) in.cuts.conflict_edges.emplace_back(a, b);
      }
    }
    in.cuts.rebuild_adjacency();
    const std::size_t vars = n + in.graph.conflict_edges.size() + in.cuts.candidates.size() +
                             (with_stitch ? in.graph.stitch_edges.size() : 0);
    if (vars <= max_vars) return in;
  }
}

Rational brute_force_model(const IlpModel& m) {
  const std::size_t n = m.variables.size();
  if (n > 24) throw std::invalid_argument("too many variables to enumerate");
  std::optional<Rational> best;
  std::vector<int> values(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) values[i] = (mask >> i) & 1;
    if (!m.feasible(values)) continue;
    const Rational v = m.evaluate(values);
    if (!best || v < *best) best = v;
  }
  if (!best) throw std::logic_error("model has no feasible assignment");
  return *best;
}

Rational direct_cost(const LayoutGraph& g, std::span<const int> colors, std::span<const char> cuts,
                     const Rational& alpha, bool with_stitch) {
  Rational cost{0};
  for (const auto& e : g.conflict_edges) {
    const bool cut = e.candidate && cuts[*e.candidate];
    if (colors[e.u] == colors[e.v] && !cut) cost += 1;
  }
  if (with_stitch) {
    for (const auto& e : g.stitch_edges) {
      if (colors[e.u] != colors[e.v]) cost += alpha;
    }
  }
  return cost;
}

Rational brute_force_problem(const LayoutGraph& g, const EndCutGraph& ecg, const Rational& alpha, bool with_stitch) {
  const std::size_t n = g.vertices.size();
  std::vector<std::size_t> owner(ecg.candidates.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> attached;
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    if (auto c = g.conflict_edges[e].candidate) {
      owner[*c] = e;
      attached.push_back(*c);
    }
  }
  if (n + attached.size() > 26) throw std::invalid_argument("instance too large to enumerate");
  std::optional<Rational> best;
  std::vector<int> colors(n);
  std::vector<char> cuts(ecg.candidates.size());
  for (std::uint64_t cm = 0; cm < (std::uint64_t{1} << n); ++cm) {
    for (std::size_t v = 0; v < n; ++v) colors[v] = (cm >> v) & 1;
    for (std::uint64_t km = 0; km < (std::uint64_t{1} << attached.size()); ++km) {
      std::fill(cuts.begin(), cuts.end(), 0);
      bool ok = true;
      for (std::size_t k = 0; k < attached.size() && ok; ++k) {
        if (!((km >> k) & 1)) continue;
        const auto& e = g.conflict_edges[owner[attached[k]]];
        ok = colors[e.u] == colors[e.v];
        cuts[attached[k]] = 1;
      }
      for (const auto& [a, b] : ecg.conflict_edges) ok = ok && !(cuts[a] && cuts[b]);
      if (!ok) continue;
      const Rational cost = direct_cost(g, colors, cuts, alpha, with_stitch);
      if (!best || cost < *best) best = cost;
    }
  }
  return best.value_or(Rational(0));
}

std::size_t count_components_bfs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
  }
  return comps;
}

std::vector<std::size_t> bridges_by_deletion(std::size_t n,
                                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t base = count_components_bfs(n, edges);
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto rest = edges;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(e));
    if (count_components_bfs(n, rest) > base) out.push_back(e);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs_conflicts(const LayoutDocument& doc) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < doc.shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.shapes.size(); ++j) {
      Coord best = std::numeric_limits<Coord>::max();
      for (const Rect& a : doc.shapes[i].rects()) {
        for (const Rect& b : doc.shapes[j].rects()) {
          // Per-axis gaps written out directly.
          const Coord dx = std::max<Coord>({0, b.lo.x - a.hi.x, a.lo.x - b.hi.x});
          const Coord dy = std::max<Coord>({0, b.lo.y - a.hi.y, a.lo.y - b.hi.y});
          Coord d = 0;
          if (doc.params.metric == Metric::chebyshev) {
            d = std::max(dx, dy);
          } else {
            d = 0;
            while (d * d < dx * dx + dy * dy) ++d;
          }
          best = std::min(best, d);
        }
      }
      if (best <= doc.params.dis_m) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace tplec::testing
