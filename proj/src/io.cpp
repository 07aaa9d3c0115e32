#include "tnd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tnd/augment.hpp"
#include "tnd/random.hpp"

namespace tnd {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& what,
                    std::size_t row) {
  const std::string s = trimmed(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("row " + std::to_string(row) + ": cannot parse " + what +
                    " '" + field + "'");
  }
  return value;
}

long long parse_id(const std::string& field, const std::string& what,
                   std::size_t row) {
  const std::string s = trimmed(field);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("row " + std::to_string(row) + ": cannot parse " + what +
                    " '" + field + "'");
  }
  return value;
}

void require_header(const CsvTable& table, const std::vector<std::string>& want,
                    const std::filesystem::path& path) {
  std::vector<std::string> got;
  for (const auto& h : table.header) got.push_back(trimmed(h));
  if (got != want) {
    std::string expect;
    for (const auto& w : want) expect += (expect.empty() ? "" : ",") + w;
    throw DataError(path.string() + ": expected header '" + expect + "'");
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Integers print without decimals so generated instances round-trip
/// byte-exactly; everything else is fixed 6-decimal.
std::string format_number(double v) {
  if (std::abs(v) < 9.0e15 && v == std::floor(v)) {
    return std::to_string(static_cast<long long>(v));
  }
  return format_fixed(v, 6);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  return out;
}

nlohmann::json edges_json(const SpanningTree& tree, const Instance& instance,
                          const LinkFlows& flows) {
  const auto& stations = instance.stations();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [i, j] : tree.edges()) {
    arr.push_back({{"i", stations[i].id},
                   {"j", stations[j].id},
                   {"name_i", stations[i].name},
                   {"name_j", stations[j].name},
                   {"km", instance.link_distances()(i, j)},
                   {"flow_ij", flows.at({i, j})},
                   {"flow_ji", flows.at({j, i})}});
  }
  return arr;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t k = 0; k < data.size(); ++k) {
    const char c = data[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < data.size() && data[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) {
    throw DataError(path.string() + ": unterminated quoted field");
  }
  if (field_started || !record.empty()) end_record();

  if (records.empty()) {
    throw DataError(path.string() + ": empty file");
  }
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() == 1 && records[r][0].empty()) continue;  // blank line
    if (records[r].size() != table.header.size()) {
      throw DataError(path.string() + ": row " + std::to_string(r + 1) +
                      " has " + std::to_string(records[r].size()) +
                      " fields, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_fixed(double value, int decimals) {
  char buf[512];  // fixed format of 1e308 needs room
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

Instance load_instance(const std::filesystem::path& nodes_path,
                       const std::filesystem::path& demand_path,
                       const std::optional<std::filesystem::path>& distances_path,
                       bool geographic) {
  const CsvTable nodes = read_csv(nodes_path);
  if (geographic) {
    require_header(nodes, {"id", "name", "lat", "lon"}, nodes_path);
  } else {
    require_header(nodes, {"id", "name", "x", "y"}, nodes_path);
  }

  std::vector<Station> stations;
  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    const auto& row = nodes.rows[r];
    Station s;
    s.id = static_cast<int>(parse_id(row[0], "station id", r + 2));
    s.name = row[1];
    s.x = parse_double(row[2], geographic ? "latitude" : "x", r + 2);
    s.y = parse_double(row[3], geographic ? "longitude" : "y", r + 2);
    stations.push_back(std::move(s));
  }
  if (stations.size() < 2) {
    throw DataError(nodes_path.string() + ": need at least 2 stations");
  }
  std::sort(stations.begin(), stations.end(),
            [](const Station& a, const Station& b) { return a.id < b.id; });
  std::map<long long, int> index;  // original id -> dense index
  for (std::size_t k = 0; k < stations.size(); ++k) {
    if (!index.emplace(stations[k].id, static_cast<int>(k)).second) {
      throw DataError(nodes_path.string() + ": duplicate station id " +
                      std::to_string(stations[k].id));
    }
  }
  const int n = static_cast<int>(stations.size());
  const CoordMode mode =
      geographic ? CoordMode::Geographic : CoordMode::Planar;

  const auto lookup = [&](long long id, const std::filesystem::path& path,
                          std::size_t row) {
    const auto it = index.find(id);
    if (it == index.end()) {
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      ": unknown station id " + std::to_string(id));
    }
    return it->second;
  };

  const CsvTable demand_csv = read_csv(demand_path);
  require_header(demand_csv, {"origin", "destination", "trips"}, demand_path);
  Eigen::MatrixXd demand = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < demand_csv.rows.size(); ++r) {
    const auto& row = demand_csv.rows[r];
    const std::size_t line = r + 2;
    const long long o = parse_id(row[0], "origin id", line);
    const long long t = parse_id(row[1], "destination id", line);
    const double trips = parse_double(row[2], "trips", line);
    if (o == t) {
      throw DataError(demand_path.string() + ": row " + std::to_string(line) +
                      ": self-loop demand for station " + std::to_string(o));
    }
    if (trips < 0.0) {
      throw DataError(demand_path.string() + ": row " + std::to_string(line) +
                      ": negative trips");
    }
    demand(lookup(o, demand_path, line), lookup(t, demand_path, line)) += trips;
  }

  Eigen::MatrixXd t;
  if (distances_path.has_value()) {
    const CsvTable dist_csv = read_csv(*distances_path);
    require_header(dist_csv, {"i", "j", "km"}, *distances_path);
    t = Eigen::MatrixXd::Constant(n, n, -1.0);
    t.diagonal().setZero();
    for (std::size_t r = 0; r < dist_csv.rows.size(); ++r) {
      const auto& row = dist_csv.rows[r];
      const std::size_t line = r + 2;
      const int a = lookup(parse_id(row[0], "station id", line),
                           *distances_path, line);
      const int b = lookup(parse_id(row[1], "station id", line),
                           *distances_path, line);
      const double km = parse_double(row[2], "km", line);
      if (a == b) {
        throw DataError(distances_path->string() + ": row " +
                        std::to_string(line) + ": self-loop distance");
      }
      if (km < 0.0) {
        throw DataError(distances_path->string() + ": row " +
                        std::to_string(line) + ": negative distance");
      }
      if (t(a, b) >= 0.0 && t(a, b) != km) {
        throw DataError(distances_path->string() + ": row " +
                        std::to_string(line) + ": conflicting distance for pair");
      }
      t(a, b) = km;
      t(b, a) = km;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (t(i, j) < 0.0) {
          throw DataError(distances_path->string() + ": missing distance for pair (" +
                          std::to_string(stations[i].id) + "," +
                          std::to_string(stations[j].id) + ")");
        }
      }
    }
  } else {
    t = derive_distances(stations, mode);
  }

  try {
    return Instance(std::move(stations), std::move(t), std::move(demand), {},
                    mode);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

Instance generate_synthetic(int n, int centers, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (centers < 1 || centers > n) {
    throw std::invalid_argument("need 1 <= centers <= n");
  }
  Rng rng(seed);

  const auto snap = [](double v) { return std::round(v * 1e6) / 1e6; };

  // Town centers: one at the origin, the rest on spokes around it.
  std::vector<std::pair<double, double>> hubs;
  hubs.push_back({0.0, 0.0});
  for (int k = 1; k < centers; ++k) {
    const double angle =
        2.0 * 3.141592653589793 * (k - 1) / std::max(1, centers - 1) +
        0.35 * uniform_unit(rng);
    const double radius = 9.0 + 4.0 * uniform_unit(rng);
    hubs.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }

  std::vector<Station> stations(n);
  std::vector<double> population(n);
  for (int i = 0; i < n; ++i) {
    double x, y;
    if (i < centers) {
      x = hubs[i].first;
      y = hubs[i].second;
      population[i] = 30000.0 + 20000.0 * uniform_unit(rng);
    } else {
      const int cluster = static_cast<int>(uniform_below(rng, centers));
      x = hubs[cluster].first + 2.0 * standard_normal(rng);
      y = hubs[cluster].second + 2.0 * standard_normal(rng);
      population[i] = 500.0 + 7500.0 * uniform_unit(rng);
    }
    stations[i] = {i, "stn-" + std::to_string(i), snap(x), snap(y)};
  }
  // Distinct coordinates keep all direct distances positive.
  for (int i = 1; i < n; ++i) {
    bool clash = true;
    while (clash) {
      clash = false;
      for (int j = 0; j < i; ++j) {
        if (stations[j].x == stations[i].x && stations[j].y == stations[i].y) {
          stations[i].x = snap(stations[i].x + 1e-5);
          clash = true;
        }
      }
    }
  }

  const Eigen::MatrixXd t = derive_distances(stations, CoordMode::Planar);
  Eigen::MatrixXd demand = Eigen::MatrixXd::Zero(n, n);
  constexpr double kGravityScale = 1.0 / 15000.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double trips = kGravityScale * population[i] * population[j] /
                           std::max(t(i, j), 2.0);
      demand(i, j) = std::floor(trips);
      demand(j, i) = demand(i, j);
    }
  }
  return Instance(std::move(stations), t, std::move(demand), {},
                  CoordMode::Planar);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j{{"method", method},
                   {"nodes_path", nodes_path},
                   {"demand_path", demand_path},
                   {"distances_path", distances_path},
                   {"geographic", geographic},
                   {"distance_mode", distance_mode},
                   {"phi", phi},
                   {"psi", psi},
                   {"tabu_capacity", tabu_capacity},
                   {"seed", seed},
                   {"init", init},
                   {"alpha", alpha},
                   {"methods", methods},
                   {"out_dir", out_dir},
                   {"gen_n", gen_n},
                   {"gen_centers", gen_centers}};
  if (budget.has_value()) {
    j["budget"] = *budget;
  } else {
    j["budget"] = nullptr;
  }
  return j;
}

std::string RunManifest::hash() const { return hex64(fnv1a64(to_json().dump())); }

nlohmann::json report_to_json(const SolveReport& report,
                              const Instance& instance) {
  const LinkFlows flows = link_flows(report.best_tree, instance.demand());
  nlohmann::json j{
      {"method", report.method},
      {"n", instance.n()},
      {"total_demand", instance.total_demand()},
      {"best_z", report.best_z},
      {"initial_z", report.initial_z},
      {"iterations", report.iterations},
      {"wall_time_s", report.wall_time_s},
      {"tree", edges_json(report.best_tree, instance, flows)},
      {"warnings", report.warnings},
      {"config",
       {{"phi", report.config.phi},
        {"psi", report.config.psi},
        {"tabu_capacity", report.config.effective_tabu_capacity(instance.n())},
        {"seed", report.config.seed},
        {"init", report.config.init == InitMode::Mst          ? "mst"
                 : report.config.init == InitMode::RandomTree ? "random"
                                                              : "given"}}}};
  if (report.config.budget.has_value()) {
    j["budget"] = {{"tau", *report.config.budget},
                   {"feasible", budget_feasible(report.best_z,
                                                report.config.budget)}};
  } else {
    j["budget"] = {{"tau", nullptr}, {"feasible", true}};
  }
  return j;
}

void write_outputs(const RunArtifacts& artifacts, const RunManifest& manifest,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Instance& instance = *artifacts.instance;
  const std::string hash = manifest.hash();

  nlohmann::json summary = report_to_json(artifacts.report, instance);
  summary["manifest"] = manifest.to_json();
  summary["manifest_hash"] = hash;
  summary["lower_bound_td"] = artifacts.lower_bound_td;
  summary["detour"] = {{"max_ratio", artifacts.detour.max_ratio},
                       {"excluded_pairs", artifacts.detour.excluded_pairs},
                       {"pair_count", artifacts.detour.pair_count}};
  {
    auto out = open_out(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "trace.csv");
    out << "iteration,current_z,best_z,elapsed_s,tabu_hit,manifest_hash\n";
    for (const auto& rec : artifacts.report.trace) {
      out << rec.iteration << ',' << format_fixed(rec.current_z) << ','
          << format_fixed(rec.best_z) << ',' << format_fixed(rec.elapsed_s)
          << ',' << (rec.tabu_hit ? 1 : 0) << ',' << hash << '\n';
    }
  }
  {
    auto out = open_out(dir / "detour.csv");
    out << "threshold,cum_demand_frac,cum_pair_frac,manifest_hash\n";
    for (std::size_t k = 0; k < artifacts.detour.thresholds.size(); ++k) {
      out << format_fixed(artifacts.detour.thresholds[k]) << ','
          << format_fixed(artifacts.detour.cum_demand_frac[k]) << ','
          << format_fixed(artifacts.detour.cum_pair_frac[k]) << ',' << hash
          << '\n';
    }
  }
  {
    auto out = open_out(dir / "tree_edges.csv");
    out << "i,j,km,flow_ij,flow_ji,manifest_hash\n";
    const auto& stations = instance.stations();
    for (const auto& [i, j] : artifacts.report.best_tree.edges()) {
      out << stations[i].id << ',' << stations[j].id << ','
          << format_fixed(instance.link_distances()(i, j)) << ','
          << format_fixed(artifacts.flows.at({i, j})) << ','
          << format_fixed(artifacts.flows.at({j, i})) << ',' << hash << '\n';
    }
  }
  if (instance.coord_mode() == CoordMode::Geographic) {
    nlohmann::json features = nlohmann::json::array();
    const auto& stations = instance.stations();
    const auto& d = instance.demand();
    for (const auto& [i, j] : artifacts.report.best_tree.edges()) {
      features.push_back(
          {{"type", "Feature"},
           {"geometry",
            {{"type", "LineString"},
             // GeoJSON wants [lon, lat]; stations store (lat, lon).
             {"coordinates", {{stations[i].y, stations[i].x},
                              {stations[j].y, stations[j].x}}}}},
           {"properties",
            {{"i", stations[i].id},
             {"j", stations[j].id},
             {"name_i", stations[i].name},
             {"name_j", stations[j].name},
             {"km", instance.link_distances()(i, j)},
             {"flow_ij", artifacts.flows.at({i, j})},
             {"flow_ji", artifacts.flows.at({j, i})},
             {"demand_ij", d(i, j)},
             {"demand_ji", d(j, i)}}}});
    }
    nlohmann::json geo{{"type", "FeatureCollection"},
                       {"manifest_hash", hash},
                       {"features", features}};
    auto out = open_out(dir / "edges.geojson");
    out << geo.dump(2) << '\n';
  }
}

void write_instance(const Instance& instance, const RunManifest& manifest,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const bool geo = instance.coord_mode() == CoordMode::Geographic;
  {
    auto out = open_out(dir / "nodes.csv");
    out << (geo ? "id,name,lat,lon\n" : "id,name,x,y\n");
    for (const auto& s : instance.stations()) {
      out << s.id << ',' << csv_field(s.name) << ',' << format_fixed(s.x) << ','
          << format_fixed(s.y) << '\n';
    }
  }
  {
    auto out = open_out(dir / "demand.csv");
    out << "origin,destination,trips\n";
    const auto& d = instance.demand();
    const auto& stations = instance.stations();
    for (int i = 0; i < instance.n(); ++i) {
      for (int j = 0; j < instance.n(); ++j) {
        if (i == j || d(i, j) == 0.0) continue;
        out << stations[i].id << ',' << stations[j].id << ','
            << format_number(d(i, j)) << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "manifest.json");
    nlohmann::json j = manifest.to_json();
    j["manifest_hash"] = manifest.hash();
    out << j.dump(2) << '\n';
  }
}

void write_compare(const CompareReport& report, const RunManifest& manifest,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, j] : row.edges) edges.push_back({i, j});
    rows.push_back({{"method", row.method},
                    {"z", row.z},
                    {"wall_time_s", row.wall_time_s},
                    {"iterations", row.iterations},
                    {"edges", edges}});
  }
  nlohmann::json deltas = nlohmann::json::array();
  for (Eigen::Index a = 0; a < report.delta_pct.rows(); ++a) {
    nlohmann::json line = nlohmann::json::array();
    for (Eigen::Index b = 0; b < report.delta_pct.cols(); ++b) {
      line.push_back(report.delta_pct(a, b));
    }
    deltas.push_back(line);
  }
  nlohmann::json j{{"manifest", manifest.to_json()},
                   {"manifest_hash", manifest.hash()},
                   {"rows", rows},
                   {"delta_pct", deltas}};
  auto out = open_out(dir / "compare.json");
  out << j.dump(2) << '\n';
}

SpanningTree load_tree(const std::filesystem::path& path,
                       const Instance& instance) {
  const CsvTable csv = read_csv(path);
  if (csv.header.size() < 2 || trimmed(csv.header[0]) != "i" ||
      trimmed(csv.header[1]) != "j") {
    throw DataError(path.string() + ": expected header starting with 'i,j'");
  }
  std::map<long long, int> index;
  for (std::size_t k = 0; k < instance.stations().size(); ++k) {
    index[instance.stations()[k].id] = static_cast<int>(k);
  }
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::size_t line = r + 2;
    const long long a = parse_id(csv.rows[r][0], "station id", line);
    const long long b = parse_id(csv.rows[r][1], "station id", line);
    const auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw DataError(path.string() + ": row " + std::to_string(line) +
                      ": unknown station id");
    }
    edges.push_back(make_edge(ia->second, ib->second));
  }
  try {
    return SpanningTree(instance.n(), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace tnd
