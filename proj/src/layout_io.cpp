#include "tplec/layout_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace tplec {

std::optional<std::size_t> LayoutDocument::find(std::string_view id) const {
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].id() == id) {
      return i;
    }
  }
  return std::nullopt;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::optional<Coord> to_int(std::string_view tok) {
  Coord v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    return std::nullopt;
  }
  return v;
}

Coord int_or_throw(std::size_t line, std::string_view tok) {
  auto v = to_int(tok);
  if (!v) {
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  }
  return *v;
}

void check_id(std::size_t line, std::string_view id) {
  if (id.find(':') != std::string_view::npos) {
    throw ParseError(line, "shape id '" + std::string(id) + "' must not contain ':'");
  }
}

}  // namespace

// Numeric-aware ordering so that "2" sorts before "10".
bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  std::size_t j = 0;
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      auto na = a.substr(i, ie - i);
      auto nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) < (b.size() - j);
}

std::vector<Rect> decompose_outline(std::span<const Point> outline) {
  std::vector<Point> pts;
  for (const Point& p : outline) {
    if (pts.empty() || pts.back() != p) {
      pts.push_back(p);
    }
  }
  while (pts.size() > 1 && pts.front() == pts.back()) {
    pts.pop_back();
  }
  // Drop collinear vertices so that consecutive edges always turn.
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& a = pts[(i + pts.size() - 1) % pts.size()];
      const Point& b = pts[i];
      const Point& c = pts[(i + 1) % pts.size()];
      if ((a.x == b.x && b.x == c.x) || (a.y == b.y && b.y == c.y)) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (pts.size() < 4 || pts.size() % 2 != 0) {
    throw InvalidShape("outline is not a closed rectilinear polygon");
  }
  __int128 twice_area = 0;
  std::vector<std::pair<Point, Point>> horizontal;
  std::set<Coord> xs_set;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % pts.size()];
    if (a.x != b.x && a.y != b.y) {
      throw InvalidShape("outline has a non-axis-aligned edge");
    }
    if (a.y == b.y) {
      horizontal.emplace_back(a, b);
    }
    twice_area += static_cast<__int128>(a.x) * b.y - static_cast<__int128>(b.x) * a.y;
    xs_set.insert(a.x);
  }
  const std::vector<Coord> xs(xs_set.begin(), xs_set.end());

  std::vector<Rect> rects;
  std::map<std::pair<Coord, Coord>, std::size_t> open;  // y-interval -> index in rects
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const Coord mid2 = xs[k] + xs[k + 1];  // doubled slab midpoint
    std::vector<Coord> ys;
    for (const auto& [a, b] : horizontal) {
      const Coord lo = std::min(a.x, b.x);
      const Coord hi = std::max(a.x, b.x);
      if (2 * lo < mid2 && mid2 < 2 * hi) {
        ys.push_back(a.y);
      }
    }
    if (ys.size() % 2 != 0) {
      throw InvalidShape("outline is self-intersecting");
    }
    std::sort(ys.begin(), ys.end());
    std::map<std::pair<Coord, Coord>, std::size_t> next;
    for (std::size_t t = 0; t < ys.size(); t += 2) {
      const std::pair<Coord, Coord> iv{ys[t], ys[t + 1]};
      if (iv.first == iv.second) {
        continue;
      }
      auto it = open.find(iv);
      if (it != open.end()) {
        rects[it->second].hi.x = xs[k + 1];
        next.emplace(iv, it->second);
      } else {
        rects.push_back({{xs[k], iv.first}, {xs[k + 1], iv.second}});
        next.emplace(iv, rects.size() - 1);
      }
    }
    open = std::move(next);
  }
  Coord sum = 0;
  for (const Rect& r : rects) {
    sum += r.area();
  }
  const __int128 abs2 = twice_area < 0 ? -twice_area : twice_area;
  if (rects.empty() || static_cast<__int128>(sum) * 2 != abs2) {
    throw InvalidShape("outline is self-intersecting");
  }
  return rects;
}

void validate_params(const DecompositionParams& p) {
  auto positive = [](Coord v, const char* name) {
    if (v <= 0) {
      throw std::invalid_argument(std::string("parameter ") + name + " must be positive");
    }
  };
  positive(p.dis_m, "dis_m");
  positive(p.dis_c, "dis_c");
  positive(p.h_low, "hlow");
  positive(p.h_high, "hhigh");
  positive(p.w_low, "wlow");
  positive(p.w_high, "whigh");
  positive(p.w_th, "wth");
  positive(p.stitch_margin, "smargin");
  if (p.h_low > p.h_high) {
    throw std::invalid_argument("hlow exceeds hhigh");
  }
  if (p.w_low > p.w_high) {
    throw std::invalid_argument("wlow exceeds whigh");
  }
  if (p.alpha <= 0) {
    throw std::invalid_argument("alpha must be positive");
  }
}

void apply_default_params(LayoutDocument& doc) {
  DecompositionParams& p = doc.params;
  Coord min_width = 0;
  for (const auto& s : doc.shapes) {
    for (const Rect& r : s.rects()) {
      const Coord w = std::min(r.width(), r.height());
      min_width = min_width == 0 ? w : std::min(min_width, w);
    }
  }
  const Coord half_width = std::max<Coord>(1, min_width / 2);
  if (p.dis_c == 0) p.dis_c = p.dis_m;
  if (p.h_high == 0) p.h_high = p.dis_m;
  if (p.w_th == 0) p.w_th = p.dis_m;
  if (p.w_high == 0) p.w_high = p.w_th;
  // Very wide features must not push the lower limits past the upper ones.
  if (p.h_low == 0) p.h_low = std::min(half_width, p.h_high);
  if (p.w_low == 0) p.w_low = std::min(half_width, p.w_high);
  if (p.stitch_margin == 0) p.stitch_margin = std::max<Coord>(1, p.dis_m / 2);
}

LayoutDocument parse_layout(std::istream& in) {
  LayoutDocument doc;
  std::vector<std::size_t> shape_lines;
  std::set<std::string, std::less<>> ids;
  std::optional<Coord> alpha_num;
  std::optional<Coord> alpha_den;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto toks = tokenize(strip_comment(raw));
    if (toks.empty()) {
      continue;
    }
    const std::string_view kw = toks[0];
    if (kw == "layout") {
      if (toks.size() != 2) throw ParseError(lineno, "expected 'layout <name>'");
      doc.name = std::string(toks[1]);
    } else if (kw == "units") {
      if (toks.size() != 2 || toks[1] != "nm") throw ParseError(lineno, "only 'units nm' is supported");
    } else if (kw == "param") {
      if (toks.size() != 3) throw ParseError(lineno, "expected 'param <key> <int>'");
      const std::string_view key = toks[1];
      const Coord v = int_or_throw(lineno, toks[2]);
      DecompositionParams& p = doc.params;
      if (key == "dis_m") p.dis_m = v;
      else if (key == "dis_c") p.dis_c = v;
      else if (key == "hlow") p.h_low = v;
      else if (key == "hhigh") p.h_high = v;
      else if (key == "wlow") p.w_low = v;
      else if (key == "whigh") p.w_high = v;
      else if (key == "wth") p.w_th = v;
      else if (key == "smargin") p.stitch_margin = v;
      else if (key == "alpha_num") alpha_num = v;
      else if (key == "alpha_den") alpha_den = v;
      else if (key == "stitch") {
        if (v != 0 && v != 1) throw ParseError(lineno, "stitch must be 0 or 1");
        p.stitch = v == 1;
      } else {
        throw ParseError(lineno, "unknown parameter '" + std::string(key) + "'");
      }
      if (v <= 0 && key != "stitch" && key != "alpha_num") {
        throw ParseError(lineno, "parameter '" + std::string(key) + "' must be positive");
      }
    } else if (kw == "rect" || kw == "poly") {
      if (toks.size() < 2) throw ParseError(lineno, "missing shape id");
      const std::string id(toks[1]);
      check_id(lineno, id);
      if (!ids.insert(id).second) throw ParseError(lineno, "duplicate shape id '" + id + "'");
      std::vector<Coord> nums;
      for (std::size_t t = 2; t < toks.size(); ++t) {
        nums.push_back(int_or_throw(lineno, toks[t]));
      }
      try {
        if (kw == "rect") {
          if (nums.size() != 4) throw ParseError(lineno, "expected 'rect <id> <x1> <y1> <x2> <y2>'");
          doc.shapes.emplace_back(id, std::vector<Rect>{make_rect(nums[0], nums[1], nums[2], nums[3])});
        } else {
          if (nums.size() < 8 || nums.size() % 2 != 0) {
            throw ParseError(lineno, "poly needs at least four vertices");
          }
          std::vector<Point> pts;
          for (std::size_t t = 0; t < nums.size(); t += 2) {
            pts.push_back({nums[t], nums[t + 1]});
          }
          doc.shapes.emplace_back(id, decompose_outline(pts));
        }
      } catch (const InvalidShape& e) {
        throw ParseError(lineno, e.what());
      }
      shape_lines.push_back(lineno);
    } else {
      throw ParseError(lineno, "unknown statement '" + std::string(kw) + "'");
    }
  }
  if (alpha_num || alpha_den) {
    const Coord num = alpha_num.value_or(doc.params.alpha.numerator());
    const Coord den = alpha_den.value_or(doc.params.alpha.denominator());
    if (num <= 0 || den <= 0) throw ParseError(lineno, "alpha must be positive");
    doc.params.alpha = Rational(num, den);
  }
  apply_default_params(doc);
  try {
    validate_params(doc.params);
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }

  const ShapeIndex index(doc.shapes, doc.params.dis_m);
  for (std::size_t i = 0; i < doc.shapes.size(); ++i) {
    for (std::size_t j : index.near(doc.shapes[i].bbox(), 0, Metric::chebyshev)) {
      if (j < i && shapes_overlap(doc.shapes[i], doc.shapes[j])) {
        throw ParseError(shape_lines[i], OverlappingInputShapes(doc.shapes[j].id(), doc.shapes[i].id()).what());
      }
    }
  }
  return doc;
}

LayoutDocument parse_layout_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_layout(in);
}

void write_layout(std::ostream& out, const LayoutDocument& doc) {
  const DecompositionParams& p = doc.params;
  out << "layout " << (doc.name.empty() ? "unnamed" : doc.name) << "\n";
  out << "units nm\n";
  out << "param dis_m " << p.dis_m << "\n";
  out << "param dis_c " << p.dis_c << "\n";
  out << "param hlow " << p.h_low << "\n";
  out << "param hhigh " << p.h_high << "\n";
  out << "param wlow " << p.w_low << "\n";
  out << "param whigh " << p.w_high << "\n";
  out << "param wth " << p.w_th << "\n";
  out << "param smargin " << p.stitch_margin << "\n";
  out << "param alpha_num " << p.alpha.numerator() << "\n";
  out << "param alpha_den " << p.alpha.denominator() << "\n";
  out << "param stitch " << (p.stitch ? 1 : 0) << "\n";
  for (const auto& s : doc.shapes) {
    if (s.is_rect()) {
      const Rect& r = s.rects().front();
      out << "rect " << s.id() << ' ' << r.lo.x << ' ' << r.lo.y << ' ' << r.hi.x << ' ' << r.hi.y << "\n";
      continue;
    }
    out << "poly " << s.id();
    // Outer loop only; shapes read from an outline never have holes.
    const auto edges = s.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out << ' ' << edges[e].from.x << ' ' << edges[e].from.y;
      if (e + 1 < edges.size() && edges[e].to != edges[e + 1].from) {
        break;
      }
    }
    out << "\n";
  }
}

std::string write_layout_string(const LayoutDocument& doc) {
  std::ostringstream out;
  write_layout(out, doc);
  return out.str();
}

std::string format_rational(const Rational& r) {
  std::int64_t den = r.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }
  const int digits = std::max({twos, fives, 1});
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = r.numerator() * (scale / r.denominator());
  const std::int64_t mag = scaled < 0 ? -scaled : scaled;
  std::string frac = std::to_string(mag % scale);
  frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
  return (scaled < 0 ? "-" : "") + std::to_string(mag / scale) + "." + frac;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("bad number '" + std::string(text) + "'"); };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = to_int(text.substr(0, slash));
    auto d = to_int(text.substr(slash + 1));
    if (!n || !d || *d == 0) throw fail();
    return Rational(*n, *d);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    auto n = to_int(text);
    if (!n) throw fail();
    return Rational(*n);
  }
  std::string_view ip = text.substr(0, dot);
  std::string_view fp = text.substr(dot + 1);
  const bool neg = !ip.empty() && ip.front() == '-';
  if (neg) ip.remove_prefix(1);
  auto i = ip.empty() ? std::optional<Coord>(0) : to_int(ip);
  auto f = fp.empty() ? std::optional<Coord>(0) : to_int(fp);
  if (!i || !f || fp.size() > 17 || (!fp.empty() && fp.front() == '-')) throw fail();
  std::int64_t scale = 1;
  for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
  Rational v = Rational(*i) + Rational(*f, scale);
  return neg ? -v : v;
}

DecompositionReport canonical_report(DecompositionReport r) {
  std::sort(r.masks.begin(), r.masks.end(),
            [](const auto& a, const auto& b) { return natural_less(a.vertex, b.vertex); });
  std::sort(r.cuts.begin(), r.cuts.end());
  for (auto& c : r.conflicts) {
    if (natural_less(c.second, c.first)) std::swap(c.first, c.second);
  }
  std::sort(r.conflicts.begin(), r.conflicts.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return natural_less(a.first, b.first);
    return natural_less(a.second, b.second);
  });
  std::sort(r.stitches.begin(), r.stitches.end(), [](const auto& a, const auto& b) {
    if (a.feature != b.feature) return natural_less(a.feature, b.feature);
    return a.at < b.at;
  });
  return r;
}

void write_report(std::ostream& out, const DecompositionReport& report) {
  const DecompositionReport r = canonical_report(report);
  out << "alpha " << r.alpha.numerator() << "/" << r.alpha.denominator() << "\n";
  for (const auto& m : r.masks) {
    out << "mask " << m.vertex << ' ' << (m.mask == Mask::A ? 'A' : 'B') << "\n";
  }
  for (const Rect& c : r.cuts) {
    out << "cut " << c.lo.x << ' ' << c.lo.y << ' ' << c.hi.x << ' ' << c.hi.y << "\n";
  }
  for (const auto& [a, b] : r.conflicts) {
    out << "conflict " << a << ' ' << b << "\n";
  }
  for (const auto& s : r.stitches) {
    out << "stitch " << s.feature << ' ' << s.at.x << ' ' << s.at.y << ' '
        << (s.orientation == Orientation::horizontal ? 'h' : 'v') << "\n";
  }
  out << "cost " << format_rational(r.cost) << "\n";
}

std::string write_report_string(const DecompositionReport& r) {
  std::ostringstream out;
  write_report(out, r);
  return out.str();
}

DecompositionReport parse_report(std::istream& in) {
  DecompositionReport r;
  r.cost = 0;
  std::string raw;
  std::size_t lineno = 0;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) throw ParseError(lineno, what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const auto toks = tokenize(strip_comment(raw));
    if (toks.empty()) continue;
    const std::string_view kw = toks[0];
    try {
      if (kw == "alpha") {
        expect(toks.size() == 2, "expected 'alpha <n>/<d>'");
        r.alpha = parse_rational(toks[1]);
      } else if (kw == "mask") {
        expect(toks.size() == 3 && (toks[2] == "A" || toks[2] == "B"), "expected 'mask <id> A|B'");
        r.masks.push_back({std::string(toks[1]), toks[2] == "A" ? Mask::A : Mask::B});
      } else if (kw == "cut") {
        expect(toks.size() == 5, "expected 'cut <x1> <y1> <x2> <y2>'");
        r.cuts.push_back(make_rect(int_or_throw(lineno, toks[1]), int_or_throw(lineno, toks[2]),
                                   int_or_throw(lineno, toks[3]), int_or_throw(lineno, toks[4])));
      } else if (kw == "conflict") {
        expect(toks.size() == 3, "expected 'conflict <id> <id>'");
        r.conflicts.emplace_back(std::string(toks[1]), std::string(toks[2]));
      } else if (kw == "stitch") {
        expect(toks.size() == 5 && (toks[4] == "h" || toks[4] == "v"), "expected 'stitch <id> <x> <y> h|v'");
        r.stitches.push_back({std::string(toks[1]),
                              {int_or_throw(lineno, toks[2]), int_or_throw(lineno, toks[3])},
                              toks[4] == "h" ? Orientation::horizontal : Orientation::vertical});
      } else if (kw == "cost") {
        expect(toks.size() == 2, "expected 'cost <decimal>'");
        r.cost = parse_rational(toks[1]);
      } else {
        throw ParseError(lineno, "unknown statement '" + std::string(kw) + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    } catch (const InvalidShape& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return r;
}

DecompositionReport parse_report_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_report(in);
}

}  // namespace tplec
