#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tplec/graphs.hpp"
#include "tplec/ilp.hpp"
#include "tplec/layout_io.hpp"

namespace tplec {

struct SpeedUps {
  bool components = true;
  bool bridges = true;
  bool preselect = true;
};

struct RunOptions {
  std::optional<bool> stitch;  // overrides the layout's param
  std::optional<Rational> alpha;
  std::optional<Metric> metric;
  SpeedUps speedups;
  double time_limit_s = 600;
  unsigned jobs = 1;
  std::ostream* log = nullptr;  // receives "stage=<name> ms=<int>" lines
};

struct StageTiming {
  std::string name;
  long long ms = 0;
};

struct RunStats {
  std::size_t wires = 0;
  std::size_t components = 0;
  std::size_t subproblems = 0;
  std::size_t conflicts = 0;
  std::size_t stitches = 0;
  Rational cost{0};
  double cpu_s = 0;
  std::size_t timeouts = 0;
  std::vector<std::size_t> timed_out_components;  // indices into the component list, ascending
  std::vector<StageTiming> stages;
};

struct DecompositionResult {
  LayoutDocument doc;  // with overrides and derived params applied
  LayoutGraph graph;   // after stitch splitting when enabled
  EndCutGraph cuts;
  std::vector<int> colors;     // per graph vertex
  std::vector<char> selected;  // per candidate
  DecompositionReport report;
  RunStats stats;
};

/// The whole flow: end-cut candidates, layout and end-cut graphs, optional
/// stitch splitting, pre-selection, component and bridge splitting, one ILP
/// per piece, and the union of the piece solutions.
DecompositionResult decompose(LayoutDocument doc, const RunOptions& opts = {});

/// Model of the whole graph, without any speed-up, for external solvers.
IlpModel full_model(const DecompositionResult& r);

/// One line: wires, comps, conflicts, stitches, cost, cpu seconds.
std::string stats_row(const RunStats& s);

/// Both graphs in Graphviz form, layout graph first.
std::string export_dot(const DecompositionResult& r);

/// Every end-cut candidate, a `#` line naming its shapes followed by one
/// `cut` line per box.
std::string candidate_dump(const DecompositionResult& r);

/// Command-line run description.
struct RunConfig {
  std::string input;
  std::string out;
  std::string svg;
  std::string lp_export;
  std::string dot;
  std::string candidates;
  RunOptions options;

  /// Throws std::invalid_argument on missing input, clashing paths,
  /// non-positive alpha or time limit, or zero workers.
  void validate() const;
};

/// Reads cfg.input, decomposes, writes every requested output file.
DecompositionResult run(const RunConfig& cfg);

struct BenchRow {
  std::string name;
  RunStats stats;
};

/// Runs every *.layout file in dir (sorted by name) with opts.
std::vector<BenchRow> run_benchmarks(const std::string& dir, const RunOptions& opts);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace tplec
