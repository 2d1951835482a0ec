#pragma once

// Instance and solution files. Numbers are rounded to 12 significant digits
// on the way out so identical solves serialize identically across platforms.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ksteiner/cost.hpp"
#include "ksteiner/odc.hpp"
#include "ksteiner/oodc.hpp"
#include "ksteiner/solver.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

using nlohmann::json;

inline double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline UnitBall parse_norm(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("norm: expected an object with a \"type\" field");
  std::string type = j.at("type").get<std::string>();
  if (type == "euclidean") return UnitBall::euclidean();
  if (type == "rectilinear") return UnitBall::rectilinear();
  if (type == "linf") return UnitBall::linf();
  if (type == "polygon") {
    std::vector<Point> vs;
    for (const auto& v : j.at("vertices"))
      vs.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return UnitBall::polygon(std::move(vs));
  }
  if (type == "ellipse") {
    const auto& Q = j.at("Q");
    double a = Q.at(0).at(0).get<double>();
    double b = Q.at(0).at(1).get<double>();
    double b2 = Q.at(1).at(0).get<double>();
    double c = Q.at(1).at(1).get<double>();
    if (b != b2) throw std::invalid_argument("norm: ellipse Q must be symmetric");
    return UnitBall::ellipse(a, b, c);
  }
  throw std::invalid_argument("norm: unknown type \"" + type + "\"");
}

inline json norm_to_json(const UnitBall& ball) {
  json j;
  if (ball.is_ellipse()) {
    const auto& e = ball.ellipse_shape();
    if (e.qxx == 1 && e.qxy == 0 && e.qyy == 1) {
      j["type"] = "euclidean";
    } else {
      j["type"] = "ellipse";
      j["Q"] = {{round12(e.qxx), round12(e.qxy)}, {round12(e.qxy), round12(e.qyy)}};
    }
    return j;
  }
  const auto& vs = ball.polygon_shape().vertices;
  if (vs.size() == 4 && vs[0] == Point{1, 0} && vs[1] == Point{0, 1}) {
    j["type"] = "rectilinear";
    return j;
  }
  if (vs.size() == 4 && vs[0] == Point{1, 1} && vs[1] == Point{-1, 1}) {
    j["type"] = "linf";
    return j;
  }
  j["type"] = "polygon";
  json arr = json::array();
  for (const Point& v : vs) arr.push_back({round12(v.x), round12(v.y)});
  j["vertices"] = arr;
  return j;
}

inline CostFunction parse_cost(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("cost: expected an object with a \"type\" field");
  std::string type = j.at("type").get<std::string>();
  if (type == "sum") return CostFunction::sum();
  if (type == "power") return CostFunction::power(j.at("p").get<double>());
  if (type == "bottleneck") return CostFunction::bottleneck();
  throw std::invalid_argument("cost: unknown type \"" + type + "\"");
}

inline json cost_to_json(const CostFunction& cf) {
  json j;
  j["type"] = cf.name();
  if (cf.kind == CostFunction::Kind::power) j["p"] = round12(cf.p);
  return j;
}

inline ProblemSpec parse_instance(const json& j) {
  ProblemSpec spec;
  if (!j.is_object()) throw std::invalid_argument("instance: expected a JSON object");
  if (!j.contains("terminals") || !j.at("terminals").is_array() ||
      j.at("terminals").empty())
    throw std::invalid_argument("instance: \"terminals\" must be a non-empty array");
  for (const auto& t : j.at("terminals")) {
    Point p{t.at(0).get<double>(), t.at(1).get<double>()};
    if (!finite(p)) throw std::invalid_argument("instance: non-finite terminal");
    spec.terminals.push_back(p);
  }
  spec.ball = j.contains("norm") ? parse_norm(j.at("norm")) : UnitBall::euclidean();
  spec.k = j.value("k", 1);
  if (spec.k < 1) throw std::invalid_argument("instance: k must be >= 1");
  spec.cost = j.contains("cost") ? parse_cost(j.at("cost")) : CostFunction::sum();
  spec.tol = j.value("tolerance", 1e-9);
  if (!(spec.tol > 0)) throw std::invalid_argument("instance: tolerance must be positive");
  spec.box_inflation = j.value("box_inflation", 3.0);
  if (!(spec.box_inflation > 0))
    throw std::invalid_argument("instance: box_inflation must be positive");
  if (j.contains("seed_direction")) {
    const auto& d = j.at("seed_direction");
    spec.seed_direction = Point{d.at(0).get<double>(), d.at(1).get<double>()};
  }
  return spec;
}

inline ProblemSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return parse_instance(j);
}

inline json instance_to_json(const ProblemSpec& spec) {
  json j;
  json terms = json::array();
  for (const Point& p : spec.terminals) terms.push_back({round12(p.x), round12(p.y)});
  j["terminals"] = terms;
  j["norm"] = norm_to_json(spec.ball);
  j["k"] = spec.k;
  j["cost"] = cost_to_json(spec.cost);
  j["tolerance"] = spec.tol;
  j["box_inflation"] = spec.box_inflation;
  if (spec.seed_direction)
    j["seed_direction"] = {round12(spec.seed_direction->x), round12(spec.seed_direction->y)};
  return j;
}

inline json solution_to_json(const Solution& sol, const ProblemSpec& spec,
                             bool include_wall_ms = true) {
  json j;
  json sp = json::array();
  for (const Point& p : sol.steiner) sp.push_back({round12(p.x), round12(p.y)});
  j["steiner_points"] = sp;
  json edges = json::array();
  for (const auto& e : sol.edges) {
    json refu, refv;
    refu[e.u.steiner ? "s" : "t"] = e.u.index;
    refv[e.v.steiner ? "s" : "t"] = e.v.index;
    edges.push_back({refu, refv});
  }
  j["edges"] = edges;
  j["cost"] = round12(sol.cost);
  j["cost_function"] = cost_to_json(spec.cost);
  j["norm"] = norm_to_json(spec.ball);
  json stats;
  stats["regions"] = sol.stats.regions;
  stats["distinct_labels"] = sol.stats.distinct_labels;
  stats["topologies_evaluated"] = sol.stats.topologies_evaluated;
  stats["warnings"] = sol.stats.warnings;
  if (include_wall_ms) stats["wall_ms"] = sol.stats.wall_ms;
  j["stats"] = stats;
  return j;
}

inline json partition_to_json(const ODCPartition& part) {
  json j;
  j["i"] = part.index;
  j["box"] = {part.box.xmin, part.box.ymin, part.box.xmax, part.box.ymax};
  json cells = json::array();
  for (const auto& [owner, faces] : part.cells()) {
    json cell;
    cell["owner"] = owner;
    json rings = json::array();
    for (int f : faces) {
      const auto& face = part.arrangement.faces()[f];
      json ring = json::array();
      for (const Point& p : face.outer) ring.push_back({round12(p.x), round12(p.y)});
      rings.push_back(ring);
      for (const auto& hole : face.holes) {
        json hr = json::array();
        for (const Point& p : hole) hr.push_back({round12(p.x), round12(p.y)});
        rings.push_back(hr);
      }
    }
    cell["rings"] = rings;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return j;
}

inline json overlay_to_json(const OODCOverlay& ov) {
  json j;
  j["box"] = {ov.box.xmin, ov.box.ymin, ov.box.xmax, ov.box.ymax};
  json cells = json::array();
  for (std::size_t f = 0; f < ov.regions.size(); ++f) {
    json cell;
    json lbl = json::array();
    for (int t : ov.regions[f].label) lbl.push_back(t);
    cell["label"] = lbl;
    const auto& face = ov.arrangement.faces()[f];
    json rings = json::array();
    json ring = json::array();
    for (const Point& p : face.outer) ring.push_back({round12(p.x), round12(p.y)});
    rings.push_back(ring);
    for (const auto& hole : face.holes) {
      json hr = json::array();
      for (const Point& p : hole) hr.push_back({round12(p.x), round12(p.y)});
      rings.push_back(hr);
    }
    cell["rings"] = rings;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return j;
}

}  // namespace ksteiner
