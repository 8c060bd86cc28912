#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "tplec/geometry.hpp"

namespace tplec {

using Rational = boost::rational<std::int64_t>;

/// Design-rule parameters of one decomposition run, all in nm. Zero means
/// "derive a default" (see apply_default_params).
struct DecompositionParams {
  Coord dis_m = 120;         // minimum coloring distance
  Coord dis_c = 0;           // minimum end-cut distance
  Coord h_low = 0;           // end-cut box extent across the gap
  Coord h_high = 0;
  Coord w_low = 0;           // end-cut box extent along the facing edges
  Coord w_high = 0;
  Coord w_th = 0;            // long-edge hotspot threshold
  Coord stitch_margin = 0;   // minimum free run for a stitch candidate
  Rational alpha{1, 10};     // stitch weight in the cost
  bool stitch = false;
  Metric metric = Metric::chebyshev;
};

struct LayoutDocument {
  std::string name;
  std::string units = "nm";
  std::vector<RectilinearShape> shapes;
  DecompositionParams params;

  std::optional<std::size_t> find(std::string_view id) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the line-oriented layout format. Missing dimension parameters are
/// derived from dis_m and the narrowest feature; shapes are checked for
/// pairwise interior overlap.
LayoutDocument parse_layout(std::istream& in);
LayoutDocument parse_layout_string(std::string_view text);

/// Canonical form: every parameter explicit, shapes in input order.
void write_layout(std::ostream& out, const LayoutDocument& doc);
std::string write_layout_string(const LayoutDocument& doc);

/// Splits a closed rectilinear outline into rects (vertical slabs, merged).
std::vector<Rect> decompose_outline(std::span<const Point> outline);

/// Fills in every parameter left at 0 from dis_m and the narrowest feature.
void apply_default_params(LayoutDocument& doc);
void validate_params(const DecompositionParams& p);

enum class Mask { A, B };

struct MaskAssignment {
  std::string vertex;  // shape id, or "<id>:<k>" for the k-th piece of a stitched shape
  Mask mask = Mask::A;

  bool operator==(const MaskAssignment&) const = default;
};

struct StitchRecord {
  std::string feature;
  Point at;
  Orientation orientation = Orientation::horizontal;  // long axis of the stitched feature

  bool operator==(const StitchRecord&) const = default;
};

struct DecompositionReport {
  std::vector<MaskAssignment> masks;
  std::vector<Rect> cuts;
  std::vector<std::pair<std::string, std::string>> conflicts;
  std::vector<StitchRecord> stitches;
  Rational alpha{1, 10};
  Rational cost{0};

  Rational recompute_cost() const {
    return Rational(static_cast<std::int64_t>(conflicts.size())) +
           alpha * static_cast<std::int64_t>(stitches.size());
  }
  bool operator==(const DecompositionReport&) const = default;
};

/// Exact decimal when the value terminates ("13.2", "1.0"), else "p/q".
std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view text);

/// Lists sorted the way write_report prints them (ids in natural order).
DecompositionReport canonical_report(DecompositionReport r);
bool natural_less(std::string_view a, std::string_view b);

void write_report(std::ostream& out, const DecompositionReport& r);
std::string write_report_string(const DecompositionReport& r);
DecompositionReport parse_report(std::istream& in);
DecompositionReport parse_report_string(std::string_view text);

/// Three layer groups (mask-a, mask-b, trim) plus a conflict group; one
/// path element per mask entry of the report.
std::string emit_svg(const LayoutDocument& doc, const DecompositionReport& r);

}  // namespace tplec
