#pragma once

// The i-th oriented Dirichlet cell partition: the Voronoi diagram of the
// terminals based on the reflected sector of the unit ball. Each terminal's
// cell is carved out of the working box by the pair dominance boundaries and
// the visibility cone limits; faces are labeled by the definitional
// nearest-in-cone query at an interior representative point.

#include <map>
#include <stdexcept>
#include <vector>

#include "ksteiner/arrangement.hpp"
#include "ksteiner/bisector.hpp"
#include "ksteiner/geometry.hpp"
#include "ksteiner/hex_frame.hpp"
#include "ksteiner/sector.hpp"

namespace ksteiner {

struct ODCPartition {
  int index = 0;
  int terminal_count = 0;
  Box box;
  Arrangement arrangement;
  std::vector<int> face_owner;     // per face; -1 marks the no-terminal cell
  std::vector<Segment> boundary;   // realized cell boundary (box rim excluded)

  // Owner -> face indices. A cell may consist of several faces (the
  // no-terminal cell in particular may be disconnected).
  std::map<int, std::vector<int>> cells() const {
    std::map<int, std::vector<int>> m;
    for (std::size_t f = 0; f < face_owner.size(); ++f)
      m[face_owner[f]].push_back(static_cast<int>(f));
    return m;
  }
};

inline ODCPartition build_odc_partition(const UnitBall& ball,
                                        const HexFrame& frame,
                                        const std::vector<Point>& X, int i,
                                        const Box& box,
                                        double eps = kDefaultEps) {
  if (X.empty()) throw std::invalid_argument("build_odc_partition: empty terminal set");
  for (Point x : X)
    if (!box.contains(x))
      throw std::invalid_argument("build_odc_partition: terminal outside working box");

  SectorShape sector = sector_shape(ball, frame, i);
  const int n = static_cast<int>(X.size());

  double scale = box.diagonal();
  double weld = eps * std::max(1.0, scale);
  double probe = std::max(1024 * weld, 1e-7 * std::max(1.0, scale));
  auto owner = [&](Point y) {
    auto hit = nearest_in_cone(ball, frame, X, y, i);
    return hit ? hit->first : -1;
  };

  // Candidate boundary pieces per pair; the pair's pieces only need cutting
  // where a third terminal can take over, which happens on that terminal's
  // visibility rays or on an equidistance curve sharing one of the pair's
  // terminals (triple-equidistance points lie on all three curves).
  std::vector<Segment> rays;
  for (int t = 0; t < n; ++t)
    for (const Segment& s : visibility_rays(sector, X[t], box)) rays.push_back(s);

  std::vector<std::vector<std::vector<Segment>>> eq(n);
  std::vector<std::vector<Segment>> by_terminal(n);
  for (int a = 0; a < n; ++a) eq[a].resize(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (X[a] == X[b]) continue;  // coincident terminals share one cell
      eq[a][b] = equidistance_candidates(sector, X[a], X[b], box, eps);
      by_terminal[a].insert(by_terminal[a].end(), eq[a][b].begin(), eq[a][b].end());
      by_terminal[b].insert(by_terminal[b].end(), eq[a][b].begin(), eq[a][b].end());
    }
  }

  ODCPartition part;
  part.index = ((i % 6) + 6) % 6;
  part.terminal_count = n;
  part.box = box;

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (eq[a][b].empty()) continue;
      std::vector<Segment> cutters = rays;
      cutters.insert(cutters.end(), by_terminal[a].begin(), by_terminal[a].end());
      cutters.insert(cutters.end(), by_terminal[b].begin(), by_terminal[b].end());
      auto pieces = split_against(eq[a][b], cutters, weld);
      auto kept = filter_boundary(pieces, probe, owner);
      part.boundary.insert(part.boundary.end(), kept.begin(), kept.end());
    }
  }
  {
    std::vector<Segment> cutters = rays;
    for (int a = 0; a < n; ++a)
      cutters.insert(cutters.end(), by_terminal[a].begin(), by_terminal[a].end());
    auto pieces = split_against(rays, cutters, weld);
    auto kept = filter_boundary(pieces, probe, owner);
    part.boundary.insert(part.boundary.end(), kept.begin(), kept.end());
  }

  part.arrangement = Arrangement::build(part.boundary, box, weld);
  part.face_owner.reserve(part.arrangement.faces().size());
  for (const auto& face : part.arrangement.faces())
    part.face_owner.push_back(owner(face.representative));
  return part;
}

}  // namespace ksteiner
