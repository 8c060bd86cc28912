#include <algorithm>
#include <map>
#include <sstream>

#include "tplec/layout_io.hpp"

namespace tplec {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct PieceGeometry {
  std::vector<Rect> rects;
};

// Geometry of every label the report can mention: whole shapes by id and
// stitched pieces by "<id>:<k>", ordered along the long axis.
std::map<std::string, PieceGeometry> piece_geometry(const LayoutDocument& doc, const DecompositionReport& r) {
  std::map<std::string, std::vector<const StitchRecord*>> by_feature;
  for (const auto& s : r.stitches) {
    by_feature[s.feature].push_back(&s);
  }
  std::map<std::string, PieceGeometry> out;
  for (const auto& shape : doc.shapes) {
    const std::vector<Rect> whole(shape.rects().begin(), shape.rects().end());
    out[shape.id()] = {whole};
    auto it = by_feature.find(shape.id());
    if (it == by_feature.end() || !shape.is_rect()) {
      continue;
    }
    const Orientation axis = it->second.front()->orientation;
    std::vector<Coord> cuts;
    for (const StitchRecord* s : it->second) {
      cuts.push_back(axis == Orientation::horizontal ? s->at.x : s->at.y);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto pieces = split_rect(shape.rects().front(), axis, cuts);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      out[shape.id() + ":" + std::to_string(k)] = {{pieces[k]}};
    }
  }
  return out;
}

void write_path(std::ostream& out, const std::string& label, const std::vector<Rect>& rects) {
  out << "    <path data-id=\"" << xml_escape(label) << "\" d=\"";
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const Rect& q = rects[i];
    out << (i ? " " : "") << 'M' << q.lo.x << ' ' << q.lo.y << 'H' << q.hi.x << 'V' << q.hi.y << 'H' << q.lo.x << 'Z';
  }
  out << "\"/>\n";
}

}  // namespace

std::string emit_svg(const LayoutDocument& doc, const DecompositionReport& r) {
  const auto geometry = piece_geometry(doc, r);

  std::vector<Rect> all;
  for (const auto& s : doc.shapes) {
    all.insert(all.end(), s.rects().begin(), s.rects().end());
  }
  all.insert(all.end(), r.cuts.begin(), r.cuts.end());
  Rect box = all.empty() ? Rect{{0, 0}, {1, 1}} : bounding_box(all);
  const Coord margin = std::max<Coord>(10, std::max(box.width(), box.height()) / 20);
  box = inflate(box, margin);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.lo.x << ' ' << box.lo.y << ' '
      << box.width() << ' ' << box.height() << "\">\n";
  out << "  <title>" << xml_escape(doc.name) << "</title>\n";
  // Flip y about the box centre so layout coordinates read upward.
  out << "  <g transform=\"matrix(1 0 0 -1 0 " << box.lo.y + box.hi.y << ")\">\n";

  for (Mask m : {Mask::A, Mask::B}) {
    out << "  <g id=\"" << (m == Mask::A ? "mask-a" : "mask-b") << "\" fill=\""
        << (m == Mask::A ? "#3a78c2" : "#d8543f") << "\" fill-opacity=\"0.75\">\n";
    for (const auto& a : r.masks) {
      if (a.mask != m) continue;
      auto it = geometry.find(a.vertex);
      write_path(out, a.vertex, it == geometry.end() ? std::vector<Rect>{} : it->second.rects);
    }
    out << "  </g>\n";
  }

  out << "  <g id=\"trim\" fill=\"#f0a630\" fill-opacity=\"0.85\">\n";
  for (const Rect& c : r.cuts) {
    out << "    <rect x=\"" << c.lo.x << "\" y=\"" << c.lo.y << "\" width=\"" << c.width() << "\" height=\""
        << c.height() << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <g id=\"conflicts\" stroke=\"#111\" stroke-width=\"" << std::max<Coord>(2, margin / 5) << "\">\n";
  for (const auto& [a, b] : r.conflicts) {
    auto ia = geometry.find(a);
    auto ib = geometry.find(b);
    if (ia == geometry.end() || ib == geometry.end() || ia->second.rects.empty() || ib->second.rects.empty()) {
      continue;
    }
    const Point ca = bounding_box(ia->second.rects).center2();
    const Point cb = bounding_box(ib->second.rects).center2();
    out << "    <line x1=\"" << ca.x / 2.0 << "\" y1=\"" << ca.y / 2.0 << "\" x2=\"" << cb.x / 2.0 << "\" y2=\""
        << cb.y / 2.0 << "\"/>\n";
  }
  out << "  </g>\n";
  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace tplec
