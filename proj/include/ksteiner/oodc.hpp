#pragma once

// Overlay of the six ODC partitions. Every face of the overlayed subdivision
// carries C_X(R): per cone index, the terminal owning the face's territory in
// that partition (computed definitionally at a representative interior point).

#include <array>
#include <stdexcept>
#include <vector>

#include "ksteiner/arrangement.hpp"
#include "ksteiner/hex_frame.hpp"
#include "ksteiner/odc.hpp"

namespace ksteiner {

using RegionLabel = std::array<int, 6>;  // -1 = cone empty of terminals

struct OODCRegion {
  RegionLabel label{};
  Point representative{};
};

struct OODCOverlay {
  Box box;
  int terminal_count = 0;
  Arrangement arrangement;
  std::vector<OODCRegion> regions;  // aligned with arrangement.faces()
};

inline OODCOverlay overlay_partitions(const UnitBall& ball, const HexFrame& frame,
                                      const std::vector<Point>& X,
                                      const std::array<ODCPartition, 6>& parts,
                                      const Box& box, double eps = kDefaultEps) {
  for (int i = 0; i < 6; ++i) {
    const ODCPartition& p = parts[i];
    if (p.index != i || p.terminal_count != static_cast<int>(X.size()) ||
        p.box.xmin != box.xmin || p.box.xmax != box.xmax ||
        p.box.ymin != box.ymin || p.box.ymax != box.ymax)
      throw std::invalid_argument("overlay_partitions: partitions disagree on inputs");
  }

  std::vector<Segment> segs;
  for (const ODCPartition& p : parts)
    segs.insert(segs.end(), p.boundary.begin(), p.boundary.end());

  double weld = eps * std::max(1.0, box.diagonal());
  OODCOverlay ov;
  ov.box = box;
  ov.terminal_count = static_cast<int>(X.size());
  ov.arrangement = Arrangement::build(segs, box, weld);
  ov.regions.reserve(ov.arrangement.faces().size());
  for (const auto& face : ov.arrangement.faces()) {
    OODCRegion r;
    r.representative = face.representative;
    for (int i = 0; i < 6; ++i) {
      auto hit = nearest_in_cone(ball, frame, X, face.representative, i);
      r.label[i] = hit ? hit->first : -1;
    }
    ov.regions.push_back(r);
  }
  return ov;
}

// Region whose closed face contains p (boundary ties to the lowest index).
inline int locate(const OODCOverlay& ov, Point p, double eps = kDefaultEps) {
  if (!ov.box.contains(p))
    throw std::invalid_argument("locate: point outside the working box");
  int f = ov.arrangement.locate(p, eps * std::max(1.0, ov.box.diagonal()));
  if (f < 0) throw std::runtime_error("locate: no face found for in-box point");
  return f;
}

// One entry per distinct label tuple, keeping the first representative.
inline std::vector<std::pair<RegionLabel, Point>> candidate_region_labels(
    const OODCOverlay& ov) {
  std::vector<std::pair<RegionLabel, Point>> out;
  for (const OODCRegion& r : ov.regions) {
    bool seen = false;
    for (const auto& [lbl, rep] : out)
      if (lbl == r.label) { seen = true; break; }
    if (!seen) out.push_back({r.label, r.representative});
  }
  return out;
}

}  // namespace ksteiner
