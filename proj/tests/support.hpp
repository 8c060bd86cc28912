#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tplec/decompose.hpp"
#include "tplec/graphs.hpp"
#include "tplec/ilp.hpp"
#include "tplec/layout_io.hpp"

namespace tplec::testing {

using Rng = std::mt19937_64;

/// Document from named rects, defaults derived.
LayoutDocument make_doc(const std::vector<std::pair<std::string, Rect>>& rects, Coord dis_m = 120);
LayoutDocument make_shape_doc(std::vector<RectilinearShape> shapes, Coord dis_m = 120);

/// Horizontal wires on tracks with random pitch, lengths and line-end gaps.
/// Dense enough for odd cycles, end-cut conflicts and bridges.
LayoutDocument random_layout(Rng& rng, std::size_t max_shapes, Coord x0 = 0, Coord y0 = 0,
                             const std::string& prefix = "w");

/// Graph instance with random CE/SE/EE structure whose stitch-model has at
/// most max_vars binary variables.
struct Instance {
  LayoutGraph graph;
  EndCutGraph cuts;
};
Instance random_instance(Rng& rng, std::size_t max_vars, bool with_stitch);

/// Every 0/1 vector over the model's variables; the cheapest feasible one.
Rational brute_force_model(const IlpModel& m);

/// Enumerates colorings and cut subsets straight from the problem
/// definition: a cut may only be used on a same-colored conflict pair and
/// no two conflicting cuts may both be used.
Rational brute_force_problem(const LayoutGraph& g, const EndCutGraph& ecg, const Rational& alpha, bool with_stitch);

/// |same-colored CE edges without a selected cut| + alpha * |split SE edges|.
Rational direct_cost(const LayoutGraph& g, std::span<const int> colors, std::span<const char> cuts,
                     const Rational& alpha, bool with_stitch);

/// Bridges by deleting each edge and counting components.
std::vector<std::size_t> bridges_by_deletion(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);
std::size_t count_components_bfs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

/// Conflict pairs by checking every pair of shapes.
std::vector<std::pair<std::size_t, std::size_t>> all_pairs_conflicts(const LayoutDocument& doc);

}  // namespace tplec::testing
