// Command-line front end: solve instances, dump the OODC partition, report
// the MST baseline, and generate random instances.
//
// Exit codes: 0 success, 1 validation/usage error, 2 internal tolerance
// failure (oracle verification mismatch).

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ksteiner/json_io.hpp"
#include "ksteiner/oracle.hpp"
#include "ksteiner/svg.hpp"

namespace {

int env_threads() {
  const char* v = std::getenv("KSTEINER_THREADS");
  if (!v) return 1;
  int t = std::atoi(v);
  return t >= 1 ? t : 1;
}

struct PartitionBundle {
  ksteiner::HexFrame frame;
  ksteiner::Box box;
  std::array<ksteiner::ODCPartition, 6> parts;
  ksteiner::OODCOverlay overlay;
};

PartitionBundle build_overlay(const ksteiner::ProblemSpec& spec,
                              const std::vector<ksteiner::Point>& X) {
  PartitionBundle pb;
  pb.box = ksteiner::working_box(X, spec.box_inflation);
  ksteiner::Point seed = spec.seed_direction.value_or(ksteiner::Point{1, 0});
  pb.frame = ksteiner::construct_hex_frame(spec.ball, spec.ball.boundary_point(seed));
  for (int i = 0; i < 6; ++i)
    pb.parts[i] =
        ksteiner::build_odc_partition(spec.ball, pb.frame, X, i, pb.box, spec.tol);
  pb.overlay = ksteiner::overlay_partitions(spec.ball, pb.frame, X, pb.parts,
                                            pb.box, spec.tol);
  return pb;
}

std::vector<ksteiner::Point> unique_points(const std::vector<ksteiner::Point>& in) {
  std::vector<ksteiner::Point> X;
  for (const auto& p : in) {
    bool dup = false;
    for (const auto& q : X)
      if (p == q) { dup = true; break; }
    if (!dup) X.push_back(p);
  }
  return X;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalised k-Steiner tree solver for normed planes"};
  app.require_subcommand(1);

  std::string instance_path, out_path, svg_path;
  int threads = env_threads();
  bool verify = false;

  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", instance_path, "instance JSON file")->required();
  solve_cmd->add_option("-o,--output", out_path, "write the solution JSON here");
  solve_cmd->add_option("--svg", svg_path, "write an SVG drawing of the tree");
  solve_cmd->add_option("--threads", threads, "worker threads");
  solve_cmd->add_flag("--verify", verify,
                      "cross-check against the grid oracle (n <= 7, k <= 2)");

  auto* part_cmd = app.add_subcommand("partition", "Emit the OODC partition");
  part_cmd->add_option("instance", instance_path, "instance JSON file")->required();
  part_cmd->add_option("--svg", svg_path, "SVG output path")->required();
  part_cmd->add_option("-o,--output", out_path, "also write the partition JSON here");

  auto* mst_cmd = app.add_subcommand("mst", "Report the plain MST baseline");
  mst_cmd->add_option("instance", instance_path, "instance JSON file")->required();

  int gen_n = 8;
  unsigned long long gen_seed = 1;
  int gen_k = 1;
  std::string gen_norm = "euclidean", gen_cost = "sum";
  auto* gen_cmd = app.add_subcommand("gen", "Generate a uniform random instance");
  gen_cmd->add_option("-n", gen_n, "terminal count")->required();
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--k", gen_k, "steiner budget");
  gen_cmd->add_option("--norm", gen_norm, "euclidean|rectilinear|linf");
  gen_cmd->add_option("--cost", gen_cost, "sum|bottleneck");
  gen_cmd->add_option("-o,--output", out_path, "instance output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      if (gen_n < 1) throw std::invalid_argument("gen: n must be >= 1");
      std::mt19937_64 rng(gen_seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      nlohmann::json j;
      nlohmann::json terms = nlohmann::json::array();
      for (int i = 0; i < gen_n; ++i) {
        double x = ksteiner::round12(u(rng)), y = ksteiner::round12(u(rng));
        terms.push_back({x, y});
      }
      j["terminals"] = terms;
      j["norm"] = {{"type", gen_norm}};
      j["k"] = gen_k;
      j["cost"] = {{"type", gen_cost}};
      if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
      } else {
        std::ofstream out(out_path);
        out << j.dump(2) << std::endl;
      }
      return 0;
    }

    ksteiner::ProblemSpec spec = ksteiner::load_instance(instance_path);

    if (mst_cmd->parsed()) {
      auto X = unique_points(spec.terminals);
      ksteiner::SpanningTree t = ksteiner::build_mst(spec.ball, X);
      double cost = ksteiner::evaluate_cost(spec.cost, t.lengths());
      nlohmann::json j;
      j["cost"] = ksteiner::round12(cost);
      j["edges"] = t.edges.size();
      j["cost_function"] = ksteiner::cost_to_json(spec.cost);
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (part_cmd->parsed()) {
      auto X = unique_points(spec.terminals);
      if (X.empty()) throw std::invalid_argument("partition: no terminals");
      PartitionBundle pb = build_overlay(spec, X);
      std::ofstream svg(svg_path);
      if (!svg) throw std::invalid_argument("cannot open SVG output: " + svg_path);
      ksteiner::write_overlay_svg(svg, pb.overlay, X);
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << ksteiner::overlay_to_json(pb.overlay).dump(2) << std::endl;
      }
      std::cerr << "regions: " << pb.overlay.regions.size() << "\n";
      return 0;
    }

    // solve
    spec.threads = threads;
    bool tty_progress = isatty(2);
    if (tty_progress) {
      spec.progress = [](int done, int total) {
        std::cerr << "\r  regions processed " << done << "/" << total << std::flush;
        if (done == total) std::cerr << "\n";
      };
    }
    ksteiner::Solution sol = ksteiner::solve(spec);
    nlohmann::json out_json = ksteiner::solution_to_json(sol, spec);

    if (verify) {
      const int n = static_cast<int>(unique_points(spec.terminals).size());
      if (n > 7 || spec.k > 2) {
        std::cerr << "verify: instance beyond oracle caps (n <= 7, k <= 2)\n";
        return 1;
      }
      auto X = unique_points(spec.terminals);
      ksteiner::Box box = ksteiner::working_box(X, spec.box_inflation);
      auto oracle =
          ksteiner::grid_steiner_oracle(spec.ball, spec.cost, X, spec.k, box);
      double slack = oracle.error_bound + 1e-6 * std::max(1.0, oracle.cost);
      out_json["verify"] = {{"oracle_cost", ksteiner::round12(oracle.cost)},
                            {"oracle_error_bound", ksteiner::round12(oracle.error_bound)}};
      if (sol.cost > oracle.cost + slack) {
        std::cerr << "verify: solver cost " << sol.cost
                  << " exceeds oracle bound " << oracle.cost << " + " << slack
                  << "\n";
        std::cout << out_json.dump(2) << std::endl;
        return 2;
      }
      std::cerr << "verify: ok (oracle " << oracle.cost << ", solver " << sol.cost
                << ")\n";
    }

    if (!svg_path.empty()) {
      std::ofstream svg(svg_path);
      if (!svg) throw std::invalid_argument("cannot open SVG output: " + svg_path);
      ksteiner::write_solution_svg(svg, spec.terminals, sol);
    }
    if (out_path.empty()) {
      std::cout << out_json.dump(2) << std::endl;
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::invalid_argument("cannot open output: " + out_path);
      out << out_json.dump(2) << std::endl;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ksteiner::ToleranceNotReached& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
