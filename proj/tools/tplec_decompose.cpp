// Two-mask LELE decomposition with end-cuts, from the command line.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tplec/decompose.hpp"

int main(int argc, char** argv) {
  CLI::App app{"LELE-EC layout decomposition"};

  tplec::RunConfig cfg;
  std::string alpha;
  std::string metric;
  std::string bench_dir;
  std::string csv;
  bool stitch = false;
  bool no_components = false;
  bool no_bridges = false;
  bool no_preselect = false;
  bool show_stats = false;

  app.add_option("--input,-i", cfg.input, "layout file");
  app.add_option("--out,-o", cfg.out, "report file (default: stdout)");
  app.add_option("--svg", cfg.svg, "SVG picture of the result");
  app.add_option("--lp-export", cfg.lp_export, "LP file of the whole model");
  app.add_option("--dot", cfg.dot, "Graphviz dump of both graphs");
  app.add_option("--dump-candidates", cfg.candidates, "every end-cut candidate as cut lines (debugging)");
  app.add_flag("--stitch", stitch, "allow stitches");
  app.add_flag("--no-components", no_components, "solve the graph as one piece");
  app.add_flag("--no-bridges", no_bridges, "do not split at bridges");
  app.add_flag("--no-preselect", no_preselect, "keep isolated end-cuts in the ILP");
  app.add_option("--alpha", alpha, "stitch weight as N/D (default from layout, 1/10)");
  app.add_option("--time-limit", cfg.options.time_limit_s, "ILP time limit in seconds")->default_val(600);
  app.add_option("--jobs,-j", cfg.options.jobs, "worker threads")->default_val(1);
  app.add_option("--metric", metric, "distance metric")->check(CLI::IsMember({"chebyshev", "euclidean"}));
  app.add_flag("--stats", show_stats, "print a summary row to stderr");
  app.add_option("--bench", bench_dir, "run every *.layout file in a directory");
  app.add_option("--csv", csv, "CSV output for --bench (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (stitch) cfg.options.stitch = true;
    if (!alpha.empty()) cfg.options.alpha = tplec::parse_rational(alpha);
    if (!metric.empty()) cfg.options.metric = metric == "euclidean" ? tplec::Metric::euclidean : tplec::Metric::chebyshev;
    cfg.options.speedups = {!no_components, !no_bridges, !no_preselect};

    if (!bench_dir.empty()) {
      const auto rows = tplec::run_benchmarks(bench_dir, cfg.options);
      const std::string text = tplec::bench_csv(rows);
      if (csv.empty()) {
        std::cout << text;
      } else {
        std::ofstream(csv) << text;
      }
      return 0;
    }

    cfg.options.log = &std::cerr;
    const auto result = tplec::run(cfg);
    if (cfg.out.empty()) tplec::write_report(std::cout, result.report);
    if (show_stats) std::cerr << tplec::stats_row(result.stats) << "\n";
    if (result.stats.timeouts > 0) {
      for (std::size_t c : result.stats.timed_out_components) {
        std::cerr << "component " << c << " TIMEOUT (best incumbent kept)\n";
      }
      return 3;
    }
  } catch (const tplec::ParseError& e) {
    std::cerr << cfg.input << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
