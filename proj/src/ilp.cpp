#include "tplec/ilp.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <boost/integer/common_factor_rt.hpp>

namespace tplec {

std::optional<std::size_t> IlpModel::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return i;
  }
  return std::nullopt;
}

bool IlpModel::feasible(std::span<const int> values) const {
  if (values.size() != variables.size()) return false;
  for (int v : values) {
    if (v != 0 && v != 1) return false;
  }
  for (const auto& c : constraints) {
    std::int64_t lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    if (lhs > c.rhs) return false;
  }
  return true;
}

Rational IlpModel::evaluate(std::span<const int> values) const {
  Rational total{0};
  for (std::size_t i = 0; i < objective.size() && i < values.size(); ++i) {
    if (values[i]) total += objective[i];
  }
  return total;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "OPTIMAL";
    case SolveStatus::infeasible: return "INFEASIBLE";
    case SolveStatus::timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

std::size_t add_var(IlpModel& m, VarKind kind, std::size_t origin, std::string name, Rational cost) {
  m.variables.push_back({kind, origin, std::move(name)});
  m.objective.push_back(cost);
  return m.variables.size() - 1;
}

void add_constraint(IlpModel& m, std::vector<IlpTerm> terms, std::int64_t rhs) {
  m.constraints.push_back({std::move(terms), rhs});
}

IlpModel build(const LayoutGraph& g, const EndCutGraph& ecg, bool with_stitch, const Rational& alpha) {
  IlpModel m;
  m.graph = g;
  m.cuts = ecg;
  m.alpha = alpha;
  m.with_stitch = with_stitch;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    m.color_var.push_back(add_var(m, VarKind::color, v, "x_" + std::to_string(v), 0));
  }
  m.cut_var.assign(ecg.candidates.size(), no_var);
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    const ConflictEdge& ce = g.conflict_edges[e];
    const std::string uv = std::to_string(ce.u) + "_" + std::to_string(ce.v);
    m.conflict_var.push_back(add_var(m, VarKind::conflict, e, "c_" + uv, 1));
    if (ce.candidate) {
      if (*ce.candidate >= ecg.candidates.size() || m.cut_var[*ce.candidate] != no_var) {
        throw std::invalid_argument("conflict edge refers to a bad or shared candidate");
      }
      m.cut_var[*ce.candidate] = add_var(m, VarKind::cut, *ce.candidate, "ec_" + uv, 0);
    }
  }
  if (with_stitch) {
    for (std::size_t e = 0; e < g.stitch_edges.size(); ++e) {
      const StitchEdge& se = g.stitch_edges[e];
      const std::string name = "s_" + std::to_string(g.vertices[se.u].feature) + "_" +
                               std::to_string(g.vertices[se.u].segment) + "_" +
                               std::to_string(g.vertices[se.v].segment);
      m.stitch_var.push_back(add_var(m, VarKind::stitch, e, name, alpha));
    }
  }

  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    const ConflictEdge& ce = g.conflict_edges[e];
    const std::size_t xi = m.color_var[ce.u];
    const std::size_t xj = m.color_var[ce.v];
    const std::size_t c = m.conflict_var[e];
    std::vector<IlpTerm> same1{{xi, 1}, {xj, 1}, {c, -1}};
    std::vector<IlpTerm> same0{{xi, -1}, {xj, -1}, {c, -1}};
    if (ce.candidate) {
      same1.push_back({m.cut_var[*ce.candidate], -1});
      same0.push_back({m.cut_var[*ce.candidate], -1});
    }
    add_constraint(m, std::move(same1), 1);
    add_constraint(m, std::move(same0), -1);
  }
  for (const auto& [a, b] : ecg.conflict_edges) {
    if (m.cut_var[a] != no_var && m.cut_var[b] != no_var) {
      add_constraint(m, {{m.cut_var[a], 1}, {m.cut_var[b], 1}}, 1);
    }
  }
  for (std::size_t e = 0; e < g.conflict_edges.size(); ++e) {
    const ConflictEdge& ce = g.conflict_edges[e];
    if (!ce.candidate) continue;
    const std::size_t ec = m.cut_var[*ce.candidate];
    const std::size_t xi = m.color_var[ce.u];
    const std::size_t xj = m.color_var[ce.v];
    add_constraint(m, {{ec, 1}, {xi, 1}, {xj, -1}}, 1);
    add_constraint(m, {{ec, 1}, {xj, 1}, {xi, -1}}, 1);
  }
  if (with_stitch) {
    for (std::size_t e = 0; e < g.stitch_edges.size(); ++e) {
      const StitchEdge& se = g.stitch_edges[e];
      const std::size_t xi = m.color_var[se.u];
      const std::size_t xj = m.color_var[se.v];
      const std::size_t s = m.stitch_var[e];
      add_constraint(m, {{xi, 1}, {xj, -1}, {s, -1}}, 0);
      add_constraint(m, {{xj, 1}, {xi, -1}, {s, -1}}, 0);
    }
  }
  return m;
}

constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

// Exact maximum-weight independent set on a small graph.
class Mwis {
 public:
  Mwis(std::vector<std::int64_t> weights, std::vector<std::vector<std::size_t>> adj)
      : w_(std::move(weights)), adj_(std::move(adj)), alive_(w_.size(), 1), take_(w_.size(), 0) {}

  std::int64_t run(std::vector<char>& chosen) {
    best_ = -1;
    current_ = 0;
    recurse();
    chosen = best_take_;
    return best_;
  }

 private:
  void recurse() {
    std::int64_t rest = 0;
    std::size_t pick = none;
    std::size_t pick_deg = 0;
    for (std::size_t v = 0; v < w_.size(); ++v) {
      if (!alive_[v]) continue;
      rest += w_[v];
      std::size_t deg = 0;
      for (std::size_t u : adj_[v]) deg += alive_[u];
      if (pick == none || deg > pick_deg) {
        pick = v;
        pick_deg = deg;
      }
    }
    if (current_ + rest <= best_) return;
    if (pick == none || pick_deg == 0) {
      std::vector<std::size_t> added;
      for (std::size_t v = 0; v < w_.size(); ++v) {
        if (alive_[v]) {
          take_[v] = 1;
          added.push_back(v);
        }
      }
      if (current_ + rest > best_) {
        best_ = current_ + rest;
        best_take_ = take_;
      }
      for (std::size_t v : added) take_[v] = 0;
      return;
    }
    // Take pick.
    std::vector<std::size_t> killed{pick};
    alive_[pick] = 0;
    for (std::size_t u : adj_[pick]) {
      if (alive_[u]) {
        alive_[u] = 0;
        killed.push_back(u);
      }
    }
    take_[pick] = 1;
    current_ += w_[pick];
    recurse();
    current_ -= w_[pick];
    take_[pick] = 0;
    for (std::size_t u : killed) alive_[u] = 1;
    // Leave pick out.
    alive_[pick] = 0;
    recurse();
    alive_[pick] = 1;
  }

  std::vector<std::int64_t> w_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<char> alive_;
  std::vector<char> take_;
  std::vector<char> best_take_;
  std::int64_t best_ = -1;
  std::int64_t current_ = 0;
};

struct Neighbour {
  std::size_t to;
  std::int64_t same;  // cost when colors are equal
  std::int64_t diff;  // cost when they differ
};

struct PlainEdge {
  std::size_t u;
  std::size_t v;
  std::int64_t w;
};

struct Triangle {
  std::array<std::size_t, 3> v;
  std::array<std::size_t, 3> e;  // into the plain edge list
  std::int64_t w;
};

struct TimedOut {};

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& m, std::optional<SolveClock::time_point> deadline)
      : m_(m), g_(m.graph), deadline_(deadline), n_(g_.vertices.size()) {
    std::int64_t scale = 1;
    for (const Rational& r : m.objective) {
      if (r < 0) throw std::invalid_argument("negative objective coefficient");
      scale = boost::integer::lcm(scale, r.denominator());
    }
    scale_ = scale;
    auto weight = [&](std::size_t var) {
      const Rational r = m.objective[var] * scale;
      return r.numerator();
    };

    adj_.resize(n_);
    for (std::size_t e = 0; e < g_.conflict_edges.size(); ++e) {
      const ConflictEdge& ce = g_.conflict_edges[e];
      const std::int64_t w = weight(m.conflict_var[e]);
      if (ce.candidate) {
        cand_edges_.push_back(e);
        edge_weight_.push_back(w);
        continue;
      }
      adj_[ce.u].push_back({ce.v, w, 0});
      adj_[ce.v].push_back({ce.u, w, 0});
      plain_.push_back({std::min(ce.u, ce.v), std::max(ce.u, ce.v), w});
    }
    if (m.with_stitch) {
      for (std::size_t e = 0; e < g_.stitch_edges.size(); ++e) {
        const StitchEdge& se = g_.stitch_edges[e];
        const std::int64_t w = weight(m.stitch_var[e]);
        adj_[se.u].push_back({se.v, 0, w});
        adj_[se.v].push_back({se.u, 0, w});
      }
    }
    degree_.assign(n_, 0);
    for (std::size_t v = 0; v < n_; ++v) degree_[v] = adj_[v].size();
    for (std::size_t e : cand_edges_) {
      ++degree_[g_.conflict_edges[e].u];
      ++degree_[g_.conflict_edges[e].v];
    }

    all_adj_.resize(n_);
    for (const auto& ce : g_.conflict_edges) {
      all_adj_[ce.u].push_back(ce.v);
      all_adj_[ce.v].push_back(ce.u);
    }
    for (const auto& se : g_.stitch_edges) {
      all_adj_[se.u].push_back(se.v);
      all_adj_[se.v].push_back(se.u);
    }

    // Branching order: most already-placed neighbours first, then degree.
    {
      std::vector<std::int64_t> placed_nbrs(n_, 0);
      std::vector<char> placed(n_, 0);
      pos_.assign(n_, 0);
      for (std::size_t d = 0; d < n_; ++d) {
        std::size_t pick = none;
        for (std::size_t v = 0; v < n_; ++v) {
          if (placed[v]) continue;
          if (pick == none || placed_nbrs[v] > placed_nbrs[pick] ||
              (placed_nbrs[v] == placed_nbrs[pick] && degree_[v] > degree_[pick])) {
            pick = v;
          }
        }
        placed[pick] = 1;
        pos_[pick] = d;
        order_.push_back(pick);
        for (const Neighbour& nb : adj_[pick]) ++placed_nbrs[nb.to];
      }
    }

    // Candidate-local end-cut conflicts.
    std::vector<std::size_t> local(m.cuts.candidates.size(), none);
    for (std::size_t k = 0; k < cand_edges_.size(); ++k) {
      local[*g_.conflict_edges[cand_edges_[k]].candidate] = k;
    }
    cand_adj_.resize(cand_edges_.size());
    cand_mat_.assign(cand_edges_.size(), std::vector<char>(cand_edges_.size(), 0));
    for (const auto& [a, b] : m.cuts.conflict_edges) {
      if (local[a] != none && local[b] != none && !cand_mat_[local[a]][local[b]]) {
        cand_adj_[local[a]].push_back(local[b]);
        cand_adj_[local[b]].push_back(local[a]);
        cand_mat_[local[a]][local[b]] = cand_mat_[local[b]][local[a]] = 1;
      }
    }

    list_triangles();

    color_.assign(n_, -1);
    pen_.assign(n_, {0, 0});
  }

  // Russian doll search: solve every suffix of the branching order, last
  // first. The optimum of the vertices still free is then a lower bound for
  // whatever a partial coloring leaves open.
  IlpSolution run() {
    IlpSolution sol;
    std::vector<int> full_colors(n_, 0);
    std::int64_t full_best = greedy(full_colors);
    rds_.assign(n_ + 1, 0);
    try {
      std::vector<int> prev(n_, 0);
      for (std::size_t k = n_; k-- > 0;) {
        start_suffix(k);
        seed_from(prev);
        if (k == 0 && full_best < best_) {
          best_ = full_best;
          best_colors_ = full_colors;
        }
        search(k);
        rds_[k] = best_;
        prev = best_colors_;
      }
      if (n_ > 0) {
        full_best = best_;
        full_colors = best_colors_;
      }
      sol.status = SolveStatus::optimal;
    } catch (const TimedOut&) {
      // An unfinished pass over the whole set still beats the greedy start.
      if (k_ == 0 && best_ < full_best) {
        full_best = best_;
        full_colors = best_colors_;
      }
      sol.status = SolveStatus::timeout;
    }
    sol.nodes = nodes_;
    sol.values = values_for(full_colors);
    sol.objective = m_.evaluate(sol.values);
    if (!m_.feasible(sol.values)) {
      sol.status = SolveStatus::infeasible;
    } else if (sol.objective != Rational(full_best, scale_)) {
      throw std::logic_error("solver bookkeeping disagrees with the model objective");
    }
    return sol;
  }

 private:
  void assign(std::size_t v, int c) {
    color_[v] = c;
    fixed_ += pen_[v][c];
    ++comp_started_[comp_[v]];
    for (const Neighbour& nb : adj_[v]) {
      if (color_[nb.to] >= 0) continue;
      pen_[nb.to][c] += nb.same;
      pen_[nb.to][1 - c] += nb.diff;
    }
  }

  void unassign(std::size_t v) {
    const int c = color_[v];
    for (const Neighbour& nb : adj_[v]) {
      if (color_[nb.to] >= 0) continue;
      pen_[nb.to][c] -= nb.same;
      pen_[nb.to][1 - c] -= nb.diff;
    }
    --comp_started_[comp_[v]];
    fixed_ -= pen_[v][c];
    color_[v] = -1;
  }

  std::int64_t bound() const {
    std::int64_t b = fixed_;
    for (std::size_t v = 0; v < n_; ++v) {
      if (color_[v] < 0 && pos_[v] >= k_) b += std::min(pen_[v][0], pen_[v][1]);
    }
    return b;
  }

  // Triangles of cut-less conflict edges. Two colors cannot tell three
  // vertices apart, so each one costs at least its lightest edge.
  void list_triangles() {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<std::vector<std::size_t>> higher(n_);
    for (std::size_t e = 0; e < plain_.size(); ++e) {
      const auto& p = plain_[e];
      if (p.u == p.v || index.count({p.u, p.v})) continue;
      index[{p.u, p.v}] = e;
      higher[p.u].push_back(p.v);
    }
    for (auto& h : higher) std::sort(h.begin(), h.end());
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t i = 0; i < higher[a].size(); ++i) {
        const std::size_t b = higher[a][i];
        for (std::size_t j = i + 1; j < higher[a].size(); ++j) {
          const std::size_t c = higher[a][j];
          const auto bc = index.find({b, c});
          if (bc == index.end()) continue;
          const std::size_t ab = index[{a, b}];
          const std::size_t ac = index[{a, c}];
          const std::int64_t w = std::min({plain_[ab].w, plain_[ac].w, plain_[bc->second].w});
          if (w > 0) triangles_.push_back({{a, b, c}, {ab, ac, bc->second}, w});
        }
      }
    }
    edge_used_.assign(plain_.size(), 0);
  }

  // Greedy edge-disjoint packing of triangles whose vertices are all free.
  // Their edges are never counted by bound(), so the two add up.
  std::int64_t triangle_bound() {
    std::int64_t b = 0;
    std::vector<std::size_t> marked;
    for (const Triangle& t : triangles_) {
      if (!open(t.v[0]) || !open(t.v[1]) || !open(t.v[2])) continue;
      if (edge_used_[t.e[0]] || edge_used_[t.e[1]] || edge_used_[t.e[2]]) continue;
      for (std::size_t e : t.e) {
        edge_used_[e] = 1;
        marked.push_back(e);
      }
      b += t.w;
    }
    for (std::size_t e : marked) edge_used_[e] = 0;
    return b;
  }

  // Candidate edges whose endpoints are both fixed to one color need their
  // cut; cuts that conflict with each other cannot all be had. Returns the
  // cost those edges are sure to add, using a greedy clique cover (each
  // clique saves at most its heaviest member) or, when `exact`, an MWIS.
  std::int64_t cut_bound(bool exact) const {
    std::vector<std::size_t> need;
    std::int64_t total = 0;
    bool coupled = false;
    for (std::size_t k = 0; k < cand_edges_.size(); ++k) {
      const ConflictEdge& ce = g_.conflict_edges[cand_edges_[k]];
      if (color_[ce.u] < 0 || color_[ce.u] != color_[ce.v]) continue;
      need.push_back(k);
      total += edge_weight_[k];
      coupled = coupled || !cand_adj_[k].empty();
    }
    if (!coupled) return 0;
    if (exact) {
      std::vector<std::size_t> local(cand_edges_.size(), none);
      for (std::size_t i = 0; i < need.size(); ++i) local[need[i]] = i;
      std::vector<std::int64_t> w;
      std::vector<std::vector<std::size_t>> adj(need.size());
      for (std::size_t i = 0; i < need.size(); ++i) {
        w.push_back(edge_weight_[need[i]]);
        for (std::size_t o : cand_adj_[need[i]]) {
          if (local[o] != none) adj[i].push_back(local[o]);
        }
      }
      std::vector<char> take;
      return total - Mwis(std::move(w), std::move(adj)).run(take);
    }
    std::vector<std::vector<std::size_t>> cliques;
    std::vector<std::int64_t> heaviest;
    for (std::size_t k : need) {
      bool placed = false;
      for (std::size_t c = 0; c < cliques.size() && !placed; ++c) {
        const bool all = std::all_of(cliques[c].begin(), cliques[c].end(),
                                     [&](std::size_t o) { return cand_mat_[k][o]; });
        if (!all) continue;
        cliques[c].push_back(k);
        heaviest[c] = std::max(heaviest[c], edge_weight_[k]);
        placed = true;
      }
      if (!placed) {
        cliques.push_back({k});
        heaviest.push_back(edge_weight_[k]);
      }
    }
    std::int64_t saved = 0;
    for (std::int64_t h : heaviest) saved += h;
    return total - saved;
  }

  // Cost of a complete coloring with the best cut selection.
  std::int64_t leaf_cost(std::vector<char>* chosen) const {
    std::vector<std::size_t> mono;
    std::int64_t open = 0;
    for (std::size_t k = 0; k < cand_edges_.size(); ++k) {
      const ConflictEdge& ce = g_.conflict_edges[cand_edges_[k]];
      if (color_[ce.u] >= 0 && color_[ce.u] == color_[ce.v]) {
        mono.push_back(k);
        open += edge_weight_[k];
      }
    }
    if (chosen) chosen->assign(cand_edges_.size(), 0);
    if (mono.empty()) return fixed_;
    std::vector<std::size_t> local(cand_edges_.size(), none);
    for (std::size_t i = 0; i < mono.size(); ++i) local[mono[i]] = i;
    std::vector<std::int64_t> w;
    std::vector<std::vector<std::size_t>> adj(mono.size());
    for (std::size_t i = 0; i < mono.size(); ++i) {
      w.push_back(edge_weight_[mono[i]]);
      for (std::size_t o : cand_adj_[mono[i]]) {
        if (local[o] != none) adj[i].push_back(local[o]);
      }
    }
    std::vector<char> take;
    const std::int64_t saved = Mwis(std::move(w), std::move(adj)).run(take);
    if (chosen) {
      for (std::size_t i = 0; i < mono.size(); ++i) (*chosen)[mono[i]] = take[i];
    }
    return fixed_ + open - saved;
  }

  bool open(std::size_t v) const { return color_[v] < 0 && pos_[v] >= k_; }

  std::int64_t greedy(std::vector<int>& colors) {
    start_suffix(0);
    for (std::size_t v : order_) assign(v, pen_[v][1] < pen_[v][0] ? 1 : 0);
    const std::int64_t cost = leaf_cost(nullptr);
    colors = color_;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) unassign(*it);
    return cost;
  }

  // Components of the suffix starting at k; vertices outside it get their
  // own labels so assign() can count them anyway.
  void start_suffix(std::size_t k) {
    k_ = k;
    comp_.assign(n_, none);
    std::size_t comps = 0;
    for (std::size_t d = k; d < n_; ++d) {
      const std::size_t s = order_[d];
      if (comp_[s] != none) continue;
      std::queue<std::size_t> q;
      comp_[s] = comps;
      q.push(s);
      while (!q.empty()) {
        const std::size_t v = q.front();
        q.pop();
        for (std::size_t u : all_adj_[v]) {
          if (comp_[u] == none && pos_[u] >= k) {
            comp_[u] = comps;
            q.push(u);
          }
        }
      }
      ++comps;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (comp_[v] == none) comp_[v] = comps++;
    }
    comp_started_.assign(comps, 0);
  }

  // Incumbent for the suffix at k_: the previous suffix's best coloring with
  // either color on the new vertex.
  void seed_from(const std::vector<int>& prev) {
    best_ = std::numeric_limits<std::int64_t>::max();
    std::vector<int> colors = prev;
    for (int c : {0, 1}) {
      colors[order_[k_]] = c;
      for (std::size_t d = k_; d < n_; ++d) assign(order_[d], colors[order_[d]]);
      const std::int64_t cost = leaf_cost(nullptr);
      if (cost < best_) {
        best_ = cost;
        best_colors_ = color_;
      }
      for (std::size_t d = n_; d-- > k_;) unassign(order_[d]);
    }
  }

  void search(std::size_t depth) {
    if ((++nodes_ & 4095) == 0 && deadline_ && SolveClock::now() > *deadline_) {
      throw TimedOut{};
    }
    if (depth == n_) {
      const std::int64_t cost = leaf_cost(nullptr);
      if (cost < best_) {
        best_ = cost;
        best_colors_ = color_;
      }
      return;
    }
    std::int64_t b = bound();
    if (b + rds_[depth] >= best_) return;
    b += std::max(rds_[depth], triangle_bound());
    if (b >= best_ || b + cut_bound(false) >= best_ || b + cut_bound(true) >= best_) return;
    const std::size_t v = order_[depth];
    if (comp_started_[comp_[v]] == 0) {
      assign(v, 0);
      search(depth + 1);
      unassign(v);
      return;
    }
    const int first = pen_[v][1] < pen_[v][0] ? 1 : 0;
    for (int c : {first, 1 - first}) {
      assign(v, c);
      search(depth + 1);
      unassign(v);
      if (best_ == rds_[depth + 1]) return;
    }
  }

  std::vector<int> values_for(const std::vector<int>& colors) {
    // A timeout unwinds without undoing, so start from a clean state.
    std::fill(color_.begin(), color_.end(), -1);
    std::fill(pen_.begin(), pen_.end(), std::array<std::int64_t, 2>{0, 0});
    fixed_ = 0;
    start_suffix(0);
    for (std::size_t v : order_) assign(v, colors[v]);
    std::vector<char> chosen;
    leaf_cost(&chosen);

    std::vector<int> values(m_.variables.size(), 0);
    for (std::size_t v = 0; v < n_; ++v) values[m_.color_var[v]] = colors[v];
    std::vector<char> cut_edge(g_.conflict_edges.size(), 0);
    for (std::size_t k = 0; k < cand_edges_.size(); ++k) {
      if (!chosen[k]) continue;
      cut_edge[cand_edges_[k]] = 1;
      values[m_.cut_var[*g_.conflict_edges[cand_edges_[k]].candidate]] = 1;
    }
    for (std::size_t e = 0; e < g_.conflict_edges.size(); ++e) {
      const ConflictEdge& ce = g_.conflict_edges[e];
      values[m_.conflict_var[e]] = colors[ce.u] == colors[ce.v] && !cut_edge[e];
    }
    if (m_.with_stitch) {
      for (std::size_t e = 0; e < g_.stitch_edges.size(); ++e) {
        const StitchEdge& se = g_.stitch_edges[e];
        values[m_.stitch_var[e]] = colors[se.u] != colors[se.v];
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) unassign(*it);
    return values;
  }

  const IlpModel& m_;
  const LayoutGraph& g_;
  std::optional<SolveClock::time_point> deadline_;
  std::size_t n_;
  std::int64_t scale_ = 1;

  std::vector<std::vector<Neighbour>> adj_;
  std::vector<std::size_t> degree_;
  std::vector<std::size_t> cand_edges_;  // CE edges carrying a candidate
  std::vector<std::int64_t> edge_weight_;
  std::vector<std::vector<std::size_t>> cand_adj_;
  std::vector<std::vector<char>> cand_mat_;
  std::vector<PlainEdge> plain_;
  std::vector<Triangle> triangles_;
  std::vector<char> edge_used_;
  std::vector<std::size_t> comp_;
  std::vector<std::size_t> comp_started_;
  std::vector<std::vector<std::size_t>> all_adj_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> pos_;  // index in order_
  std::size_t k_ = 0;             // first vertex of the suffix being solved
  std::vector<std::int64_t> rds_;  // optimum of each suffix

  std::vector<int> color_;
  std::vector<std::array<std::int64_t, 2>> pen_;
  std::int64_t fixed_ = 0;

  std::int64_t best_ = 0;
  std::vector<int> best_colors_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

IlpModel build_model_no_stitch(const LayoutGraph& g, const EndCutGraph& ecg) {
  if (!g.stitch_edges.empty()) {
    throw std::invalid_argument("graph has stitch edges; use the stitch model");
  }
  return build(g, ecg, false, 0);
}

IlpModel build_model_with_stitch(const LayoutGraph& g, const EndCutGraph& ecg, const Rational& alpha) {
  if (alpha <= 0) {
    throw std::invalid_argument("alpha must be positive");
  }
  return build(g, ecg, true, alpha);
}

IlpSolution solve(const IlpModel& m, std::optional<SolveClock::time_point> deadline) {
  if (m.color_var.size() != m.graph.vertices.size() || (m.graph.vertices.empty() && !m.variables.empty())) {
    throw std::invalid_argument("model carries no graph structure");
  }
  return BranchAndBound(m, deadline).run();
}

IlpSolution solve_for(const IlpModel& m, std::chrono::duration<double> limit) {
  return solve(m, SolveClock::now() + std::chrono::duration_cast<SolveClock::duration>(limit));
}

}  // namespace tplec
