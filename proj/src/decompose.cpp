#include "tplec/decompose.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tplec/endcut.hpp"

namespace tplec {

namespace {

using WallClock = std::chrono::steady_clock;

class StageClock {
 public:
  StageClock(RunStats& stats, std::ostream* log) : stats_(stats), log_(log), start_(WallClock::now()) {}

  void mark(const std::string& name) {
    const auto now = WallClock::now();
    const long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
    stats_.stages.push_back({name, ms});
    if (log_) *log_ << "stage=" << name << " ms=" << ms << "\n";
    start_ = now;
  }

 private:
  RunStats& stats_;
  std::ostream* log_;
  WallClock::time_point start_;
};

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
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::size_t count_components(const LayoutGraph& g) {
  Dsu dsu(g.vertices.size());
  for (const auto& e : g.conflict_edges) dsu.unite(e.u, e.v);
  for (const auto& e : g.stitch_edges) dsu.unite(e.u, e.v);
  std::size_t n = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) n += dsu.find(v) == v;
  return n;
}

// One ILP subproblem: piece `piece` of component `comp`.
struct Task {
  std::size_t comp = 0;
  std::size_t piece = 0;
  std::vector<int> colors;
  std::vector<char> selected;
  SolveStatus status = SolveStatus::optimal;
};

void solve_task(Task& t, const Subgraph& piece, const DecompositionParams& p,
                std::optional<SolveClock::time_point> deadline) {
  const IlpModel m = p.stitch ? build_model_with_stitch(piece.graph, piece.cuts, p.alpha)
                              : build_model_no_stitch(piece.graph, piece.cuts);
  const IlpSolution sol = solve(m, deadline);
  t.status = sol.status;
  t.colors.resize(piece.graph.vertices.size());
  for (std::size_t v = 0; v < t.colors.size(); ++v) t.colors[v] = sol.values[m.color_var[v]];
  t.selected.assign(piece.cuts.candidates.size(), 0);
  for (std::size_t c = 0; c < t.selected.size(); ++c) {
    if (m.cut_var[c] != no_var) t.selected[c] = static_cast<char>(sol.values[m.cut_var[c]]);
  }
}

// Trim rectangles of the selected cuts; boxes of merge-adjacent selected
// cuts are joined wherever their union is itself a printable rectangle.
std::vector<Rect> trim_rects(const EndCutGraph& ecg, const std::vector<char>& selected, const ShapeIndex& index,
                             const DecompositionParams& p) {
  Dsu groups(ecg.candidates.size());
  for (const auto& [a, b] : ecg.merge_edges) {
    if (selected[a] && selected[b]) groups.unite(a, b);
  }
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t c = 0; c < ecg.candidates.size(); ++c) {
    if (selected[c]) members[groups.find(c)].push_back(c);
  }
  std::vector<Rect> out;
  for (const auto& [root, cands] : members) {
    std::vector<Rect> rects;
    for (std::size_t c : cands) {
      for (const auto& b : ecg.candidates[c].boxes) rects.push_back(b.rect);
    }
    bool changed = cands.size() > 1;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < rects.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < rects.size() && !changed; ++j) {
          if (!union_is_rectangle(rects[i], rects[j])) continue;
          const Rect merged = bounding_box(rects[i], rects[j]);
          if (!fits_dimension_window(merged, p) || index.interior_hits(merged)) continue;
          rects[i] = merged;
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
    out.insert(out.end(), rects.begin(), rects.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DecompositionReport build_report(const DecompositionResult& r, const ShapeIndex& index) {
  const auto& g = r.graph;
  const auto& shapes = r.doc.shapes;
  // Consecutive segments of one color form a printed piece.
  std::vector<std::size_t> piece_of(g.vertices.size(), 0);
  std::vector<std::size_t> pieces(shapes.size(), 0);
  std::vector<std::size_t> last(shapes.size(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const std::size_t f = g.vertices[v].feature;
    if (last[f] == static_cast<std::size_t>(-1) || r.colors[last[f]] != r.colors[v]) ++pieces[f];
    piece_of[v] = pieces[f] - 1;
    last[f] = v;
  }
  auto label = [&](std::size_t v) {
    const std::size_t f = g.vertices[v].feature;
    return pieces[f] > 1 ? shapes[f].id() + ":" + std::to_string(piece_of[v]) : shapes[f].id();
  };

  DecompositionReport rep;
  rep.alpha = r.doc.params.alpha;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (v > 0 && g.vertices[v - 1].feature == g.vertices[v].feature && piece_of[v - 1] == piece_of[v]) continue;
    rep.masks.push_back({label(v), r.colors[v] == 0 ? Mask::A : Mask::B});
  }
  for (const auto& e : g.conflict_edges) {
    if (r.colors[e.u] != r.colors[e.v]) continue;
    if (e.candidate && r.selected[*e.candidate]) continue;
    rep.conflicts.emplace_back(label(e.u), label(e.v));
  }
  for (const auto& e : g.stitch_edges) {
    if (r.colors[e.u] == r.colors[e.v]) continue;
    rep.stitches.push_back({shapes[g.vertices[e.u].feature].id(), e.at, e.orientation});
  }
  rep.cuts = trim_rects(r.cuts, r.selected, index, r.doc.params);
  rep.cost = rep.recompute_cost();
  return canonical_report(std::move(rep));
}

}  // namespace

DecompositionResult decompose(LayoutDocument doc, const RunOptions& opts) {
  const std::clock_t cpu0 = std::clock();
  DecompositionResult r;
  r.doc = std::move(doc);
  DecompositionParams& p = r.doc.params;
  if (opts.stitch) p.stitch = *opts.stitch;
  if (opts.alpha) p.alpha = *opts.alpha;
  if (opts.metric) p.metric = *opts.metric;
  apply_default_params(r.doc);
  validate_params(p);
  RunStats& stats = r.stats;
  StageClock clock(stats, opts.log);

  const ShapeIndex index(r.doc.shapes, std::max<Coord>(p.dis_m, 1));
  const CutContext ctx{index, p};
  clock.mark("index");

  const auto pairs = conflict_pairs(index, p.dis_m, p.metric);
  auto candidates = generate_end_cuts(pairs, ctx);
  clock.mark("endcut");

  r.graph = build_layout_graph(r.doc, index, candidates);
  if (p.stitch) r.graph = generate_stitch_candidates(r.doc, r.graph, candidates);
  r.cuts = build_end_cut_graph(std::move(candidates), p.dis_c, p.metric,
                               [&](const EndCutCandidate& a, const EndCutCandidate& b) {
                                 return mergeable_pair(a, b, ctx);
                               });
  clock.mark("graphs");

  const LayoutGraph& g = r.graph;
  const EndCutGraph& ecg = r.cuts;
  std::vector<char> preselected(ecg.candidates.size(), 0);
  LayoutGraph solve_graph = g;
  if (opts.speedups.preselect) {
    for (std::size_t c : preselect_end_cuts(ecg)) preselected[c] = 1;
    std::erase_if(solve_graph.conflict_edges,
                  [&](const ConflictEdge& e) { return e.candidate && preselected[*e.candidate]; });
  }
  clock.mark("preselect");

  std::vector<Subgraph> comps;
  if (opts.speedups.components) {
    comps = connected_components(solve_graph, ecg);
  } else {
    std::vector<std::size_t> all(g.vertices.size());
    std::iota(all.begin(), all.end(), 0);
    comps.push_back(extract_subgraph(solve_graph, ecg, all));
  }
  stats.components = count_components(g);
  stats.wires = r.doc.shapes.size();
  clock.mark("components");

  std::vector<BridgeSplit> splits(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (opts.speedups.bridges) {
      splits[i] = split_on_bridges(comps[i].graph, comps[i].cuts);
    } else {
      std::vector<std::size_t> all(comps[i].graph.vertices.size());
      std::iota(all.begin(), all.end(), 0);
      splits[i].pieces.push_back(extract_subgraph(comps[i].graph, comps[i].cuts, all));
    }
  }
  clock.mark("bridges");

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    for (std::size_t j = 0; j < splits[i].pieces.size(); ++j) tasks.push_back({i, j, {}, {}, SolveStatus::optimal});
  }
  stats.subproblems = tasks.size();
  const auto deadline = SolveClock::now() + std::chrono::duration_cast<SolveClock::duration>(
                                                std::chrono::duration<double>(opts.time_limit_s));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      solve_task(tasks[k], splits[tasks[k].comp].pieces[tasks[k].piece], p, deadline);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  clock.mark("ilp");

  r.colors.assign(g.vertices.size(), 0);
  r.selected.assign(ecg.candidates.size(), 0);
  {
    std::vector<std::vector<int>> comp_colors(comps.size());
    std::vector<std::vector<char>> comp_selected(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
      comp_colors[i].assign(comps[i].graph.vertices.size(), 0);
      comp_selected[i].assign(comps[i].cuts.candidates.size(), 0);
    }
    for (const Task& t : tasks) {
      const Subgraph& piece = splits[t.comp].pieces[t.piece];
      for (std::size_t v = 0; v < t.colors.size(); ++v) comp_colors[t.comp][piece.vertex_map[v]] = t.colors[v];
      for (std::size_t c = 0; c < t.selected.size(); ++c) {
        if (t.selected[c]) comp_selected[t.comp][piece.candidate_map[c]] = 1;
      }
      if (t.status == SolveStatus::timeout) {
        ++stats.timeouts;
        if (stats.timed_out_components.empty() || stats.timed_out_components.back() != t.comp) {
          stats.timed_out_components.push_back(t.comp);
        }
      }
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
      reconcile_bridges(splits[i], comps[i].graph, comp_colors[i], comp_selected[i]);
      for (std::size_t v = 0; v < comp_colors[i].size(); ++v) r.colors[comps[i].vertex_map[v]] = comp_colors[i][v];
      for (std::size_t c = 0; c < comp_selected[i].size(); ++c) {
        if (comp_selected[i][c]) r.selected[comps[i].candidate_map[c]] = 1;
      }
    }
  }
  for (const auto& e : g.conflict_edges) {
    if (e.candidate && preselected[*e.candidate] && r.colors[e.u] == r.colors[e.v]) r.selected[*e.candidate] = 1;
  }
  r.report = build_report(r, index);
  clock.mark("union");

  stats.conflicts = r.report.conflicts.size();
  stats.stitches = r.report.stitches.size();
  stats.cost = r.report.cost;
  stats.cpu_s = static_cast<double>(std::clock() - cpu0) / CLOCKS_PER_SEC;
  return r;
}

IlpModel full_model(const DecompositionResult& r) {
  return r.doc.params.stitch ? build_model_with_stitch(r.graph, r.cuts, r.doc.params.alpha)
                             : build_model_no_stitch(r.graph, r.cuts);
}

std::string stats_row(const RunStats& s) {
  char cpu[32];
  std::snprintf(cpu, sizeof cpu, "%.2f", s.cpu_s);
  std::ostringstream out;
  out << "wires " << s.wires << " comps " << s.components << " conflicts " << s.conflicts << " stitches "
      << s.stitches << " cost " << format_rational(s.cost) << " cpu " << cpu;
  return out.str();
}

std::string export_dot(const DecompositionResult& r) {
  const auto& g = r.graph;
  const auto& shapes = r.doc.shapes;
  std::ostringstream out;
  out << "graph layout {\n  node [shape=box];\n";
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& vx = g.vertices[v];
    out << "  v" << v << " [label=\"" << shapes[vx.feature].id();
    if (g.stitch_edges.size()) out << ":" << vx.segment;
    out << "\"";
    if (v < r.colors.size()) out << ", color=" << (r.colors[v] == 0 ? "blue" : "red");
    out << "];\n";
  }
  for (const auto& e : g.conflict_edges) {
    out << "  v" << e.u << " -- v" << e.v;
    if (e.candidate) out << " [color=orange, label=\"ec" << *e.candidate << "\"]";
    out << ";\n";
  }
  for (const auto& e : g.stitch_edges) out << "  v" << e.u << " -- v" << e.v << " [style=dashed];\n";
  out << "}\ngraph endcut {\n  node [shape=ellipse];\n";
  for (std::size_t c = 0; c < r.cuts.candidates.size(); ++c) {
    const auto& cand = r.cuts.candidates[c];
    out << "  ec" << c << " [label=\"" << shapes[cand.first].id() << "|" << shapes[cand.second].id() << "\"];\n";
  }
  for (const auto& [a, b] : r.cuts.conflict_edges) out << "  ec" << a << " -- ec" << b << ";\n";
  for (const auto& [a, b] : r.cuts.merge_edges) out << "  ec" << a << " -- ec" << b << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

std::string candidate_dump(const DecompositionResult& r) {
  std::ostringstream out;
  for (const auto& c : r.cuts.candidates) {
    out << "# " << r.doc.shapes[c.first].id() << ' ' << r.doc.shapes[c.second].id() << "\n";
    for (const auto& b : c.boxes) {
      out << "cut " << b.rect.lo.x << ' ' << b.rect.lo.y << ' ' << b.rect.hi.x << ' ' << b.rect.hi.y << "\n";
    }
  }
  return out.str();
}

void RunConfig::validate() const {
  if (input.empty()) throw std::invalid_argument("no input layout given");
  std::set<std::string> seen{input};
  for (const std::string* path : {&out, &svg, &lp_export, &dot, &candidates}) {
    if (path->empty()) continue;
    if (!seen.insert(*path).second) throw std::invalid_argument("output path used twice: " + *path);
  }
  if (options.alpha && *options.alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (!(options.time_limit_s > 0)) throw std::invalid_argument("time limit must be positive");
  if (options.jobs == 0) throw std::invalid_argument("need at least one worker");
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

LayoutDocument read_layout_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return parse_layout(f);
}

}  // namespace

DecompositionResult run(const RunConfig& cfg) {
  cfg.validate();
  DecompositionResult r = decompose(read_layout_file(cfg.input), cfg.options);
  if (!cfg.out.empty()) write_file(cfg.out, write_report_string(r.report));
  if (!cfg.svg.empty()) write_file(cfg.svg, emit_svg(r.doc, r.report));
  if (!cfg.lp_export.empty()) write_file(cfg.lp_export, export_lp(full_model(r)));
  if (!cfg.dot.empty()) write_file(cfg.dot, export_dot(r));
  if (!cfg.candidates.empty()) write_file(cfg.candidates, candidate_dump(r));
  return r;
}

std::vector<BenchRow> run_benchmarks(const std::string& dir, const RunOptions& opts) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".layout") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchRow> rows;
  for (const auto& f : files) {
    rows.push_back({f.stem().string(), decompose(read_layout_file(f.string()), opts).stats});
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "circuit,wire#,comp#,conflict#,stitch#,cost,cpu_s\n";
  for (const auto& row : rows) {
    char cpu[32];
    std::snprintf(cpu, sizeof cpu, "%.3f", row.stats.cpu_s);
    out << row.name << ',' << row.stats.wires << ',' << row.stats.components << ',' << row.stats.conflicts << ','
        << row.stats.stitches << ',' << format_rational(row.stats.cost) << ',' << cpu << "\n";
  }
  return out.str();
}

}  // namespace tplec
