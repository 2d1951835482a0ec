#pragma once

// SVG rendering of partitions and solutions. Faces become paths carrying a
// `label` attribute and a <title> tooltip; trees are drawn over the terminals.

#include <fstream>
#include <sstream>
#include <string>

#include "ksteiner/oodc.hpp"
#include "ksteiner/solver.hpp"

namespace ksteiner {

namespace svg_detail {

inline std::string face_path(const Arrangement::Face& face, double ymax) {
  std::ostringstream d;
  auto emit_ring = [&](const std::vector<Point>& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      d << (i == 0 ? "M " : "L ") << ring[i].x << ' ' << (ymax - ring[i].y) << ' ';
    }
    d << "Z ";
  };
  emit_ring(face.outer);
  for (const auto& hole : face.holes) emit_ring(hole);
  return d.str();
}

inline std::string fill_color(std::size_t key) {
  unsigned hue = static_cast<unsigned>((key * 47u + 13u) % 360u);
  std::ostringstream s;
  s << "hsl(" << hue << ",60%,70%)";
  return s.str();
}

}  // namespace svg_detail

inline void write_overlay_svg(std::ostream& out, const OODCOverlay& ov,
                              const std::vector<Point>& terminals) {
  const Box& b = ov.box;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << b.xmin << ' '
      << 0 << ' ' << b.width() << ' ' << b.height() << "\">\n";
  double ymax = b.ymax;
  for (std::size_t f = 0; f < ov.regions.size(); ++f) {
    const auto& face = ov.arrangement.faces()[f];
    std::ostringstream lbl;
    for (int i = 0; i < 6; ++i) {
      if (i) lbl << ';';
      lbl << ov.regions[f].label[i];
    }
    std::size_t key = 0;
    for (int i = 0; i < 6; ++i) key = key * 131 + (ov.regions[f].label[i] + 2);
    out << "  <path d=\"" << svg_detail::face_path(face, ymax) << "\" fill=\""
        << svg_detail::fill_color(key) << "\" fill-rule=\"evenodd\" stroke=\"#333\" "
        << "stroke-width=\"" << b.diagonal() / 2000 << "\" label=\"" << lbl.str()
        << "\" id=\"region" << f << "\"><title>C_X(R) = " << lbl.str()
        << "</title></path>\n";
  }
  double r = b.diagonal() / 300;
  for (std::size_t t = 0; t < terminals.size(); ++t)
    out << "  <circle cx=\"" << terminals[t].x << "\" cy=\""
        << (ymax - terminals[t].y) << "\" r=\"" << r
        << "\" fill=\"#000\"><title>terminal " << t << "</title></circle>\n";
  out << "</svg>\n";
}

inline void write_solution_svg(std::ostream& out,
                               const std::vector<Point>& terminals,
                               const Solution& sol) {
  std::vector<Point> all = terminals;
  for (const Point& s : sol.steiner) all.push_back(s);
  Box b = Box::bounding(all).inflated(1.0);
  double ymax = b.ymax;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << b.xmin << ' '
      << 0 << ' ' << b.width() << ' ' << b.height() << "\">\n";
  auto pt = [&](NodeRef r) {
    return r.steiner ? sol.steiner[r.index] : terminals[r.index];
  };
  for (const auto& e : sol.edges) {
    Point a = pt(e.u), c = pt(e.v);
    out << "  <line x1=\"" << a.x << "\" y1=\"" << (ymax - a.y) << "\" x2=\""
        << c.x << "\" y2=\"" << (ymax - c.y)
        << "\" stroke=\"#06c\" stroke-width=\"" << b.diagonal() / 400 << "\"/>\n";
  }
  double r = b.diagonal() / 120;
  for (std::size_t t = 0; t < terminals.size(); ++t)
    out << "  <circle cx=\"" << terminals[t].x << "\" cy=\""
        << (ymax - terminals[t].y) << "\" r=\"" << r
        << "\" fill=\"#000\"><title>terminal " << t << "</title></circle>\n";
  for (std::size_t s = 0; s < sol.steiner.size(); ++s)
    out << "  <rect x=\"" << (sol.steiner[s].x - r) << "\" y=\""
        << (ymax - sol.steiner[s].y - r) << "\" width=\"" << 2 * r
        << "\" height=\"" << 2 * r
        << "\" fill=\"#c22\"><title>steiner " << s << "</title></rect>\n";
  out << "</svg>\n";
}

}  // namespace ksteiner
