#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnd/baselines.hpp"
#include "tnd/instance.hpp"
#include "tnd/objective.hpp"
#include "tnd/tabu_search.hpp"

namespace tnd {

/// Raised for malformed or inconsistent input data; maps to CLI exit 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC-4180-style reader: quoted fields, LF or CRLF line ends, rectangular
/// rows enforced (ragged rows rejected with their row number).
CsvTable read_csv(const std::filesystem::path& path);

/// Quotes a field when it contains a comma, quote, or newline.
std::string csv_field(const std::string& value);

/// Fixed-decimal, locale-independent number formatting for CSV output.
std::string format_fixed(double value, int decimals = 6);

/// Loads an instance from a nodes CSV (`id,name,x,y`, or `id,name,lat,lon`
/// with geographic = true) and a demand CSV (`origin,destination,trips`,
/// unlisted pairs zero, duplicate rows summed). An optional distances CSV
/// (`i,j,km`) must cover every unordered pair; without it distances derive
/// from coordinates. Station ids are re-indexed densely; original ids are
/// kept on the stations.
Instance load_instance(const std::filesystem::path& nodes_path,
                       const std::filesystem::path& demand_path,
                       const std::optional<std::filesystem::path>& distances_path = {},
                       bool geographic = false);

/// Deterministic poly-centric synthetic instance: `centers` town centers,
/// stations scattered around them on a 1e-6 planar grid, Euclidean
/// distances, and integer gravity demand (pop_i * pop_j / distance).
Instance generate_synthetic(int n, int centers, std::uint64_t seed);

/// Everything needed to reproduce a run; echoed into every output file.
struct RunManifest {
  std::string method;
  std::string nodes_path;
  std::string demand_path;
  std::string distances_path;  // empty when distances are derived
  bool geographic = false;
  std::string distance_mode;   // "file", "euclidean", "great-circle", "synthetic"
  std::int64_t phi = 0;
  int psi = 0;
  int tabu_capacity = 0;
  std::uint64_t seed = 0;
  std::optional<double> budget;
  std::string init = "mst";
  int alpha = 0;
  std::vector<std::string> methods;
  std::string out_dir;
  int gen_n = 0;
  int gen_centers = 0;

  nlohmann::json to_json() const;
  std::string hash() const;  // FNV-1a 64 over the canonical JSON dump
};

/// Bundle written by write_outputs.
struct RunArtifacts {
  const Instance* instance = nullptr;
  SolveReport report;
  DetourProfile detour;
  LinkFlows flows;
  double lower_bound_td = 0.0;
};

/// Writes summary.json, trace.csv, detour.csv, tree_edges.csv and, for
/// geographic instances, edges.geojson. Every file carries the manifest
/// hash; CSV numbers are fixed-decimal with '\n' line ends.
void write_outputs(const RunArtifacts& artifacts, const RunManifest& manifest,
                   const std::filesystem::path& dir);

/// Writes nodes.csv, demand.csv and manifest.json for a generated instance.
void write_instance(const Instance& instance, const RunManifest& manifest,
                    const std::filesystem::path& dir);

/// Writes compare.json with per-method rows and pairwise deltas.
void write_compare(const CompareReport& report, const RunManifest& manifest,
                   const std::filesystem::path& dir);

/// Reads a tree edge list (`i,j,...` with original station ids, extra
/// columns ignored) back into a SpanningTree on the instance.
SpanningTree load_tree(const std::filesystem::path& path,
                       const Instance& instance);

nlohmann::json report_to_json(const SolveReport& report,
                              const Instance& instance);

}  // namespace tnd
