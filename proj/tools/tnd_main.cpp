#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tnd/augment.hpp"
#include "tnd/baselines.hpp"
#include "tnd/io.hpp"
#include "tnd/objective.hpp"
#include "tnd/tabu_search.hpp"

namespace {

struct InstanceOpts {
  std::string nodes;
  std::string demand;
  std::string distances;
  bool geo = false;
};

struct OutputOpts {
  std::string out;
  bool quiet = false;
  bool json = false;
};

void add_instance_opts(CLI::App* cmd, InstanceOpts& opts) {
  cmd->add_option("--nodes", opts.nodes, "stations CSV (id,name,x,y)")
      ->required();
  cmd->add_option("--demand", opts.demand, "OD demand CSV (origin,destination,trips)")
      ->required();
  cmd->add_option("--distances", opts.distances,
                  "link distance CSV (i,j,km); derived from coordinates when omitted");
  cmd->add_flag("--geo", opts.geo, "coordinates are latitude/longitude");
}

void add_output_opts(CLI::App* cmd, OutputOpts& opts) {
  const char* env = std::getenv("TND_OUT_DIR");
  opts.out = env != nullptr ? env : "out";
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
  cmd->add_flag("--json", opts.json, "print the summary JSON to stdout");
}

tnd::Instance load(const InstanceOpts& opts) {
  std::optional<std::filesystem::path> distances;
  if (!opts.distances.empty()) distances = opts.distances;
  return tnd::load_instance(opts.nodes, opts.demand, distances, opts.geo);
}

tnd::RunManifest make_manifest(const std::string& method,
                               const InstanceOpts& in, const OutputOpts& out,
                               const tnd::SolverConfig& config, int n) {
  tnd::RunManifest m;
  m.method = method;
  m.nodes_path = in.nodes;
  m.demand_path = in.demand;
  m.distances_path = in.distances;
  m.geographic = in.geo;
  m.distance_mode = !in.distances.empty() ? "file"
                    : in.geo              ? "great-circle"
                                          : "euclidean";
  m.phi = config.phi;
  m.psi = config.psi;
  m.tabu_capacity = config.effective_tabu_capacity(n);
  m.seed = config.seed;
  m.budget = config.budget;
  m.init = config.init == tnd::InitMode::Mst ? "mst" : "random";
  m.out_dir = out.out;
  return m;
}

tnd::DetourProfile full_detour(const Eigen::MatrixXd& dists,
                               const tnd::Instance& instance) {
  const double max_ratio =
      tnd::detour_profile(dists, instance.link_distances(), instance.demand(),
                          {1.0})
          .max_ratio;
  return tnd::detour_profile(dists, instance.link_distances(),
                             instance.demand(),
                             tnd::default_ratio_grid(max_ratio));
}

tnd::RunArtifacts make_artifacts(const tnd::Instance& instance,
                                 tnd::SolveReport report) {
  const Eigen::MatrixXd dists =
      tnd::tree_pair_distances(report.best_tree, instance.link_distances());
  tnd::LinkFlows flows = tnd::link_flows(report.best_tree, instance.demand());
  const double td = tnd::demand_weighted_lower_bound(instance.demand(),
                                                     instance.link_distances());
  return tnd::RunArtifacts{&instance, std::move(report),
                           full_detour(dists, instance), std::move(flows), td};
}

void print_report(const tnd::RunArtifacts& artifacts,
                  const tnd::RunManifest& manifest, const OutputOpts& out) {
  for (const auto& w : artifacts.report.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  if (out.json) {
    nlohmann::json j = tnd::report_to_json(artifacts.report, *artifacts.instance);
    j["manifest_hash"] = manifest.hash();
    j["lower_bound_td"] = artifacts.lower_bound_td;
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (out.quiet) return;
  const auto& r = artifacts.report;
  std::cout << r.method << ": z = " << tnd::format_fixed(r.best_z, 3)
            << " passenger-km (initial " << tnd::format_fixed(r.initial_z, 3)
            << ", lower bound " << tnd::format_fixed(artifacts.lower_bound_td, 3)
            << ")\n"
            << "iterations: " << r.iterations
            << ", wall time: " << tnd::format_fixed(r.wall_time_s, 3) << " s\n"
            << "outputs in " << manifest.out_dir << '\n';
}

tnd::SolveReport report_for_tree(const std::string& method,
                                 const tnd::Instance& instance,
                                 tnd::SpanningTree tree) {
  const double z = tnd::objective(
      tnd::tree_pair_distances(tree, instance.link_distances()),
      instance.demand());
  tnd::SolveReport report{.method = method,
                          .best_tree = std::move(tree),
                          .best_z = z,
                          .initial_z = z,
                          .trace = {},
                          .wall_time_s = 0.0,
                          .iterations = 0,
                          .config = {},
                          .warnings = {}};
  return report;
}

int run(int argc, char** argv) {
  CLI::App app{"Transit network design: minimum passenger-kilometer spanning trees"};
  app.require_subcommand(1);

  InstanceOpts in;
  OutputOpts out;
  tnd::SolverConfig config;
  std::string init_mode = "mst";
  std::optional<int> tabu_capacity;
  std::optional<double> tau;

  auto add_solver_opts = [&](CLI::App* cmd) {
    cmd->add_option("--phi", config.phi, "max iterations")->capture_default_str();
    cmd->add_option("--psi", config.psi, "random removal links per iteration")
        ->capture_default_str();
    cmd->add_option("--tabu", tabu_capacity,
                    "tabu list capacity (default: n/4, at least 1)");
    cmd->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--tau", tau, "passenger-km budget; exit 3 when exceeded");
    cmd->add_option("--init", init_mode, "initial tree: mst|random")
        ->check(CLI::IsMember({"mst", "random"}))
        ->capture_default_str();
  };

  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  int gen_n = 111, gen_centers = 4;
  std::uint64_t gen_seed = 7;
  gen->add_option("--n", gen_n, "station count")->capture_default_str();
  gen->add_option("--centers", gen_centers, "town centers")->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  add_output_opts(gen, out);

  auto* solve_cmd = app.add_subcommand("solve", "link swapping with tabu search");
  add_instance_opts(solve_cmd, in);
  add_solver_opts(solve_cmd);
  add_output_opts(solve_cmd, out);

  auto* mst_cmd = app.add_subcommand("mst", "minimum distance spanning tree");
  add_instance_opts(mst_cmd, in);
  add_output_opts(mst_cmd, out);

  auto* mdst_cmd = app.add_subcommand("mdst", "maximum demand spanning tree");
  add_instance_opts(mdst_cmd, in);
  add_output_opts(mdst_cmd, out);

  auto* brute_cmd = app.add_subcommand("brute", "exact optimum by enumeration (n <= 8)");
  bool force = false;
  add_instance_opts(brute_cmd, in);
  brute_cmd->add_flag("--force", force, "enumerate even when n > 8");
  add_output_opts(brute_cmd, out);

  auto* baseline_cmd = app.add_subcommand("baseline", "reimplemented comparison heuristics");
  std::string baseline_method;
  baseline_cmd->add_option("method", baseline_method, "swap or delete")
      ->required()
      ->check(CLI::IsMember({"swap", "delete"}));
  add_instance_opts(baseline_cmd, in);
  add_output_opts(baseline_cmd, out);

  auto* augment_cmd = app.add_subcommand("augment", "greedy link additions after solving");
  int alpha = 10;
  add_instance_opts(augment_cmd, in);
  add_solver_opts(augment_cmd);
  augment_cmd->add_option("--alpha", alpha, "links to add")->capture_default_str();
  add_output_opts(augment_cmd, out);

  auto* compare_cmd = app.add_subcommand("compare", "run several methods side by side");
  std::string methods_csv = "mst,mdst,tabu";
  add_instance_opts(compare_cmd, in);
  add_solver_opts(compare_cmd);
  compare_cmd->add_option("--methods", methods_csv,
                          "comma list of mst,mdst,tabu,swap,delete,brute")
      ->capture_default_str();
  add_output_opts(compare_cmd, out);

  auto* metrics_cmd = app.add_subcommand("metrics", "evaluate a given tree");
  std::string tree_path;
  add_instance_opts(metrics_cmd, in);
  metrics_cmd->add_option("--tree", tree_path, "tree edge CSV (i,j,...)")
      ->required();
  add_output_opts(metrics_cmd, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  config.tabu_capacity = tabu_capacity;
  config.budget = tau;
  config.init = init_mode == "random" ? tnd::InitMode::RandomTree
                                      : tnd::InitMode::Mst;

  try {
    if (gen->parsed()) {
      const tnd::Instance instance =
          tnd::generate_synthetic(gen_n, gen_centers, gen_seed);
      tnd::RunManifest manifest;
      manifest.method = "gen";
      manifest.distance_mode = "synthetic";
      manifest.seed = gen_seed;
      manifest.gen_n = gen_n;
      manifest.gen_centers = gen_centers;
      manifest.out_dir = out.out;
      tnd::write_instance(instance, manifest, out.out);
      if (!out.quiet) {
        std::cout << "wrote nodes.csv and demand.csv for n=" << gen_n << " to "
                  << out.out << '\n';
      }
      return 0;
    }

    const tnd::Instance instance = load(in);

    if (solve_cmd->parsed()) {
      const tnd::RunManifest manifest =
          make_manifest("solve", in, out, config, instance.n());
      tnd::RunArtifacts artifacts =
          make_artifacts(instance, tnd::solve(instance, config));
      tnd::write_outputs(artifacts, manifest, out.out);
      print_report(artifacts, manifest, out);
      if (!tnd::budget_feasible(artifacts.report.best_z, config.budget)) {
        std::cerr << "best tree exceeds budget tau\n";
        return 3;
      }
      return 0;
    }
    if (mst_cmd->parsed() || mdst_cmd->parsed()) {
      const std::string method = mst_cmd->parsed() ? "mst" : "mdst";
      const tnd::RunManifest manifest =
          make_manifest(method, in, out, config, instance.n());
      tnd::SpanningTree tree =
          mst_cmd->parsed() ? tnd::mst(instance) : tnd::mdst(instance);
      tnd::RunArtifacts artifacts = make_artifacts(
          instance, report_for_tree(method, instance, std::move(tree)));
      tnd::write_outputs(artifacts, manifest, out.out);
      print_report(artifacts, manifest, out);
      return 0;
    }
    if (brute_cmd->parsed()) {
      if (instance.n() > 8 && !force) {
        std::cerr << "brute refuses n=" << instance.n()
                  << " (> 8); pass --force to enumerate anyway\n";
        return 1;
      }
      const tnd::RunManifest manifest =
          make_manifest("brute", in, out, config, instance.n());
      tnd::BruteForceResult result = tnd::brute_force_optimum(instance, force);
      tnd::SolveReport report =
          report_for_tree("brute", instance, std::move(result.tree));
      report.iterations = result.trees_enumerated;
      tnd::RunArtifacts artifacts = make_artifacts(instance, std::move(report));
      tnd::write_outputs(artifacts, manifest, out.out);
      print_report(artifacts, manifest, out);
      return 0;
    }
    if (baseline_cmd->parsed()) {
      const tnd::RunManifest manifest =
          make_manifest("baseline-" + baseline_method, in, out, config,
                        instance.n());
      tnd::SolveReport report = baseline_method == "swap"
                                    ? tnd::heuristic_link_swapping(instance)
                                    : tnd::heuristic_link_deletion(instance);
      tnd::RunArtifacts artifacts = make_artifacts(instance, std::move(report));
      tnd::write_outputs(artifacts, manifest, out.out);
      print_report(artifacts, manifest, out);
      return 0;
    }
    if (augment_cmd->parsed()) {
      tnd::RunManifest manifest =
          make_manifest("augment", in, out, config, instance.n());
      manifest.alpha = alpha;
      tnd::SolveReport solved = tnd::solve(instance, config);
      const tnd::AugmentedNetwork network =
          tnd::augment(solved.best_tree, instance, alpha);
      const double td = tnd::demand_weighted_lower_bound(
          instance.demand(), instance.link_distances());
      const std::vector<double> gaps = tnd::lower_bound_gap_trace(network, td);

      tnd::RunArtifacts artifacts = make_artifacts(instance, std::move(solved));
      // Detour statistics of the augmented graph, not just the tree.
      artifacts.detour = full_detour(network.distances, instance);
      tnd::write_outputs(artifacts, manifest, out.out);
      {
        std::ofstream aug(std::filesystem::path(out.out) / "augment.csv",
                          std::ios::binary);
        aug << "step,added_i,added_j,z,td_over_z,manifest_hash\n";
        const auto& stations = instance.stations();
        const std::string hash = manifest.hash();
        aug << "0,,," << tnd::format_fixed(network.z_trace[0]) << ','
            << tnd::format_fixed(gaps[0]) << ',' << hash << '\n';
        for (std::size_t k = 0; k < network.added.size(); ++k) {
          aug << k + 1 << ',' << stations[network.added[k].first].id << ','
              << stations[network.added[k].second].id << ','
              << tnd::format_fixed(network.z_trace[k + 1]) << ','
              << tnd::format_fixed(gaps[k + 1]) << ',' << hash << '\n';
        }
      }
      for (const auto& w : network.warnings) std::cerr << "warning: " << w << '\n';
      print_report(artifacts, manifest, out);
      if (!out.quiet && !out.json) {
        std::cout << "augmented z after " << network.alpha()
                  << " additions: " << tnd::format_fixed(network.z_trace.back(), 3)
                  << " (td/z = " << tnd::format_fixed(gaps.back(), 4) << ")\n";
      }
      return 0;
    }
    if (compare_cmd->parsed()) {
      std::vector<std::string> methods;
      std::stringstream ss(methods_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) methods.push_back(item);
      }
      if (std::find(methods.begin(), methods.end(), "brute") != methods.end() &&
          instance.n() > 8) {
        std::cerr << "brute refuses n=" << instance.n() << " (> 8)\n";
        return 1;
      }
      tnd::RunManifest manifest =
          make_manifest("compare", in, out, config, instance.n());
      manifest.methods = methods;
      const tnd::CompareReport report = tnd::compare(instance, methods, config);
      tnd::write_compare(report, manifest, out.out);
      if (!out.quiet) {
        for (const auto& row : report.rows) {
          std::cout << row.method << ": z = " << tnd::format_fixed(row.z, 3)
                    << ", wall = " << tnd::format_fixed(row.wall_time_s, 3)
                    << " s, iterations = " << row.iterations << '\n';
        }
        for (std::size_t a = 0; a < report.rows.size(); ++a) {
          for (std::size_t b = a + 1; b < report.rows.size(); ++b) {
            std::cout << report.rows[b].method << " vs " << report.rows[a].method
                      << ": " << tnd::format_fixed(report.delta_pct(a, b), 2)
                      << "%\n";
          }
        }
      }
      return 0;
    }
    if (metrics_cmd->parsed()) {
      const tnd::RunManifest manifest =
          make_manifest("metrics", in, out, config, instance.n());
      tnd::SpanningTree tree = tnd::load_tree(tree_path, instance);
      tnd::RunArtifacts artifacts = make_artifacts(
          instance, report_for_tree("metrics", instance, std::move(tree)));
      tnd::write_outputs(artifacts, manifest, out.out);
      print_report(artifacts, manifest, out);
      return 0;
    }
  } catch (const tnd::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
