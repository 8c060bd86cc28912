#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tplec/graphs.hpp"
#include "tplec/layout_io.hpp"

namespace tplec {

enum class VarKind { color, conflict, cut, stitch };

struct IlpVariable {
  VarKind kind = VarKind::color;
  std::size_t origin = 0;  // vertex, CE edge, candidate or SE edge index
  std::string name;
};

struct IlpTerm {
  std::size_t var = 0;
  std::int64_t coef = 0;
};

/// sum(coef * var) <= rhs
struct IlpConstraint {
  std::vector<IlpTerm> terms;
  std::int64_t rhs = 0;
};

inline constexpr std::size_t no_var = static_cast<std::size_t>(-1);

struct IlpModel {
  std::vector<IlpVariable> variables;
  std::vector<IlpConstraint> constraints;
  std::vector<Rational> objective;  // one coefficient per variable

  // Structure the model was built from; empty for models read from LP text.
  LayoutGraph graph;
  EndCutGraph cuts;
  std::vector<std::size_t> color_var;     // per vertex
  std::vector<std::size_t> conflict_var;  // per CE edge
  std::vector<std::size_t> cut_var;       // per candidate, no_var when unattached
  std::vector<std::size_t> stitch_var;    // per SE edge
  Rational alpha{0};
  bool with_stitch = false;

  std::optional<std::size_t> find(std::string_view name) const;
  bool feasible(std::span<const int> values) const;
  Rational evaluate(std::span<const int> values) const;
};

enum class SolveStatus { optimal, infeasible, timeout };

struct IlpSolution {
  std::vector<int> values;  // per model variable
  Rational objective{0};
  SolveStatus status = SolveStatus::optimal;
  std::uint64_t nodes = 0;
};

/// Colors, conflict indicators and cut selections for g. Stitch edges are
/// not allowed here (std::invalid_argument).
IlpModel build_model_no_stitch(const LayoutGraph& g, const EndCutGraph& ecg);

/// Adds one stitch indicator per SE edge, weighted by alpha.
IlpModel build_model_with_stitch(const LayoutGraph& g, const EndCutGraph& ecg, const Rational& alpha);

using SolveClock = std::chrono::steady_clock;

/// Exact branch and bound over the color variables. Conflict and stitch
/// indicators follow from the colors; at every leaf the best set of cuts is
/// an exact maximum-weight independent set in the end-cut conflict graph.
/// Past the deadline the best solution found so far is returned as timeout.
IlpSolution solve(const IlpModel& m, std::optional<SolveClock::time_point> deadline = std::nullopt);
IlpSolution solve_for(const IlpModel& m, std::chrono::duration<double> limit);

/// CPLEX LP text: Minimize / Subject To / Binaries / End. Coefficients are
/// written as exact decimals; when one does not terminate the objective is
/// scaled to integers and the factor recorded in a comment.
std::string export_lp(const IlpModel& m);

/// Reads text written by export_lp back into a model without structure.
IlpModel read_lp(std::string_view text);

const char* status_name(SolveStatus s);

}  // namespace tplec
