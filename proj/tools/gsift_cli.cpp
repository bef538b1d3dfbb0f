// Command-line front end: synthetic data generation, scattered-CSV ingestion,
// decomposition runs, spectrum export, the timing harness, and the
// convergence self-check.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <gsift.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gsift;

namespace {

// ---------------------------------------------------------------------------
// Run configuration (JSON round-trippable)

struct RunConfig {
  std::string method = "db_if";  // db_if | gft_if | fif
  std::string graph_kind = "ring";  // ring | delaunay | edge_list
  int neighbors_per_side = 2;
  std::string points_file;
  std::string edges_file;
  std::string signal_file;

  double nu = 1.6;
  std::string cutoff = "auto";  // "auto" or comma-separated positive reals
  std::string window_mode = "row_stochastic";  // row_stochastic | symmetrized

  std::string distance_source = "embedding";  // embedding | shortest_path | file
  std::string distance_method = "dijkstra";   // dijkstra | floyd_warshall
  std::string edge_length = "inverse_weight"; // weight | inverse_weight
  std::string distance_file;

  std::string stopping_mode = "relative_change";
  int max_iterations = -1;  // unset: 200 for relative_change, 10 for fixed
  double delta = 1e-3;

  int max_imfs = 10;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool quiet = false;
};

json to_json(const RunConfig& c) {
  return json{
      {"method", c.method},
      {"graph",
       {{"kind", c.graph_kind},
        {"neighbors_per_side", c.neighbors_per_side},
        {"points", c.points_file},
        {"edges", c.edges_file}}},
      {"signal", c.signal_file},
      {"nu", c.nu},
      {"cutoff", c.cutoff},
      {"window_mode", c.window_mode},
      {"distance",
       {{"source", c.distance_source},
        {"method", c.distance_method},
        {"edge_length", c.edge_length},
        {"file", c.distance_file}}},
      {"stopping",
       {{"mode", c.stopping_mode},
        {"max_iterations", c.max_iterations},
        {"delta", c.delta}}},
      {"max_imfs", c.max_imfs},
      {"seed", c.seed},
      {"out", c.out_dir},
      {"quiet", c.quiet},
  };
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.method = j.value("method", c.method);
  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    c.graph_kind = g.value("kind", c.graph_kind);
    c.neighbors_per_side = g.value("neighbors_per_side", c.neighbors_per_side);
    c.points_file = g.value("points", c.points_file);
    c.edges_file = g.value("edges", c.edges_file);
  }
  c.signal_file = j.value("signal", c.signal_file);
  c.nu = j.value("nu", c.nu);
  if (j.contains("cutoff")) {
    const auto& cut = j.at("cutoff");
    if (cut.is_string())
      c.cutoff = cut.get<std::string>();
    else if (cut.is_number())
      c.cutoff = format_double(cut.get<double>());
    else if (cut.is_array()) {
      std::string list;
      for (const auto& v : cut) {
        if (!list.empty()) list += ',';
        list += format_double(v.get<double>());
      }
      c.cutoff = list;
    }
  }
  c.window_mode = j.value("window_mode", c.window_mode);
  if (j.contains("distance")) {
    const auto& d = j.at("distance");
    c.distance_source = d.value("source", c.distance_source);
    c.distance_method = d.value("method", c.distance_method);
    c.edge_length = d.value("edge_length", c.edge_length);
    c.distance_file = d.value("file", c.distance_file);
  }
  if (j.contains("stopping")) {
    const auto& s = j.at("stopping");
    c.stopping_mode = s.value("mode", c.stopping_mode);
    c.max_iterations = s.value("max_iterations", c.max_iterations);
    c.delta = s.value("delta", c.delta);
  }
  c.max_imfs = j.value("max_imfs", c.max_imfs);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out", c.out_dir);
  c.quiet = j.value("quiet", c.quiet);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_failure("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw invalid_input("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Shared pipeline plumbing

StoppingRule stopping_rule(const RunConfig& c) {
  StoppingRule rule;
  if (c.stopping_mode == "fixed_iterations")
    rule = StoppingRule::fixed(c.max_iterations < 0 ? 10 : c.max_iterations);
  else if (c.stopping_mode == "relative_change")
    rule = StoppingRule::relative(
        c.delta, c.max_iterations < 0 ? 200 : c.max_iterations);
  else
    throw invalid_input("unknown stopping mode '" + c.stopping_mode + "'");
  rule.validate();
  return rule;
}

WindowMode window_mode(const RunConfig& c) {
  if (c.window_mode == "row_stochastic") return WindowMode::row_stochastic;
  if (c.window_mode == "symmetrized") return WindowMode::symmetrized;
  throw invalid_input("unknown window mode '" + c.window_mode + "'");
}

GftCutoff parse_cutoff(const std::string& text) {
  if (text == "auto") return GftCutoff::auto_rule();
  std::vector<double> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ','))
    values.push_back(csv::parse_double(field, "cutoff"));
  if (values.empty()) throw invalid_input("empty cutoff list");
  for (double v : values)
    if (!(v > 0.0)) throw invalid_input("cutoffs must be positive");
  return GftCutoff::manual_list(values);
}

/// Binds a signal file to the vertex order of a points file by id.
Vector bind_signal(const std::vector<long>& point_ids, const SignalFile& sig) {
  std::map<long, double> by_id;
  for (std::size_t i = 0; i < sig.ids.size(); ++i)
    if (!by_id.emplace(sig.ids[i], sig.values[static_cast<Eigen::Index>(i)])
             .second)
      throw invalid_input("duplicate id " + std::to_string(sig.ids[i]) +
                          " in signal file");
  {
    std::set<long> pids(point_ids.begin(), point_ids.end());
    if (pids.size() != point_ids.size())
      throw invalid_input("duplicate ids in points file");
    std::string missing, extra;
    for (long id : point_ids)
      if (!by_id.count(id)) missing += " " + std::to_string(id);
    for (const auto& [id, _] : by_id)
      if (!pids.count(id)) extra += " " + std::to_string(id);
    if (!missing.empty() || !extra.empty())
      throw invalid_input(
          "point and signal ids do not match bijectively:" +
          (missing.empty() ? "" : " missing from signal:" + missing) +
          (extra.empty() ? "" : " missing from points:" + extra));
  }
  Vector s(point_ids.size());
  for (std::size_t i = 0; i < point_ids.size(); ++i)
    s[static_cast<Eigen::Index>(i)] = by_id.at(point_ids[i]);
  return s;
}

struct LoadedProblem {
  Graph graph;
  Vector signal;
};

LoadedProblem load_problem(const RunConfig& c) {
  if (c.signal_file.empty()) throw invalid_input("no signal file configured");
  const SignalFile sig = read_signal_csv(c.signal_file);

  if (c.graph_kind == "edge_list") {
    if (c.edges_file.empty()) throw invalid_input("no edge file configured");
    const auto edges = read_edge_list_csv(c.edges_file);
    int n = 0;
    for (const auto& e : edges) n = std::max({n, e.i + 1, e.j + 1});
    n = std::max(n, static_cast<int>(sig.values.size()));
    Graph g = make_graph(n, edges);
    std::vector<long> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    return {std::move(g), bind_signal(ids, sig)};
  }

  if (c.points_file.empty()) throw invalid_input("no points file configured");
  const PointsFile pts = read_points_csv(c.points_file);
  const Vector s = bind_signal(pts.ids, sig);
  if (c.graph_kind == "ring") {
    if (pts.two_d)
      throw invalid_input("ring graphs need 1D coordinates (header id,x)");
    return {build_ring_graph(pts.coords.col(0), c.neighbors_per_side), s};
  }
  if (c.graph_kind == "delaunay") {
    if (!pts.two_d)
      throw invalid_input("delaunay graphs need 2D coordinates (id,x,y)");
    return {build_delaunay_graph(pts.coords), s};
  }
  throw invalid_input("unknown graph kind '" + c.graph_kind + "'");
}

DistanceMatrix distances_for(const RunConfig& c, const Graph& g) {
  if (c.distance_source == "file") {
    if (c.distance_file.empty())
      throw invalid_input("distance source 'file' needs distance.file");
    Matrix m = read_distance_matrix_csv(c.distance_file);
    if (m.rows() != g.n)
      throw invalid_input("distance matrix size does not match the graph");
    return DistanceMatrix{std::move(m)};
  }
  if (c.distance_source == "shortest_path") {
    const auto method = c.distance_method == "floyd_warshall"
                            ? ShortestPathMethod::floyd_warshall
                            : ShortestPathMethod::dijkstra;
    const auto len = c.edge_length == "weight" ? EdgeLength::weight
                                               : EdgeLength::inverse_weight;
    return shortest_path_matrix(g, method, len);
  }
  if (c.distance_source != "embedding")
    throw invalid_input("unknown distance source '" + c.distance_source + "'");
  switch (g.embedding_kind) {
    case EmbeddingKind::circle_angles:
      return circular_distance_matrix(g.angles);
    case EmbeddingKind::plane_points:
      return euclidean_distance_matrix(g.points);
    case EmbeddingKind::none:
      throw invalid_input(
          "graph has no embedding; set distance.source to shortest_path");
  }
  throw invalid_input("unreachable");
}

void require_equispaced_circle(const Graph& g) {
  if (g.embedding_kind != EmbeddingKind::circle_angles)
    throw invalid_input("fif needs an equispaced 1D grid; this input is not "
                        "a 1D grid. Use gft_if or db_if instead.");
  const int n = g.n;
  const double step = two_pi / n;
  for (int i = 0; i < n; ++i) {
    const double expected = g.angles[0] + i * step;
    if (std::abs(g.angles[i] - expected) > 1e-9 * step)
      throw invalid_input(
          "fif cannot run on non-equispaced samples (vertex " +
          std::to_string(i) + " is off the uniform grid); use gft_if or "
          "db_if, which handle non-uniform sampling");
  }
}

json meta_json(const DecompositionResult& result, const RunConfig& c) {
  json imfs = json::array();
  for (const auto& m : result.meta) {
    imfs.push_back({{"iterations", m.iterations},
                    {"kind", m.op.kind},
                    {"length", m.op.length},
                    {"mode", m.op.mode},
                    {"experimental", m.op.experimental},
                    {"seconds", m.seconds},
                    {"extrema", m.extrema}});
  }
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(result.input_checksum));
  return json{{"method", c.method},
              {"n", result.residual.size()},
              {"imf_count", result.imfs.size()},
              {"input_checksum", checksum},
              {"imfs", imfs},
              {"config", to_json(c)}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw io_failure("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw io_failure("failed writing " + path);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string cpu_description() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(colon + 2);
    }
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Commands

int cmd_generate(int example, int n, std::uint64_t seed,
                 const std::string& out, bool equispaced, bool quiet) {
  if (n < 8) throw invalid_input("need n >= 8");
  fs::create_directories(out);
  Rng rng(seed);
  Vector fast(n), slow(n);
  if (example == 1) {
    const Vector angles =
        equispaced ? equispaced_angles(n) : random_sorted_angles(n, rng);
    write_points_csv((fs::path(out) / "points.csv").string(), angles);
    for (int i = 0; i < n; ++i) {
      fast[i] = chirp_fast(angles[i]);
      slow[i] = chirp_slow(angles[i]);
    }
  } else if (example == 2) {
    const Matrix pts = random_points_square(n, rng);
    write_points_csv((fs::path(out) / "points.csv").string(), pts);
    for (int i = 0; i < n; ++i) {
      fast[i] = plane_wave_fast(pts(i, 0), pts(i, 1));
      slow[i] = plane_wave_slow(pts(i, 0), pts(i, 1));
    }
  } else {
    throw invalid_input("example must be 1 or 2");
  }
  // the signal column is the exact sum of the emitted component columns
  write_signal_csv((fs::path(out) / "signal.csv").string(), fast + slow);
  write_signal_csv((fs::path(out) / "component_0.csv").string(), fast);
  write_signal_csv((fs::path(out) / "component_1.csv").string(), slow);
  if (!quiet)
    std::cout << "wrote points.csv, signal.csv, component_0.csv, "
                 "component_1.csv to " << out << '\n';
  return 0;
}

int cmd_ingest(const std::string& points_path, const std::string& signal_path,
               const std::string& graph_kind, const std::string& out,
               int neighbors_per_side, bool quiet) {
  const PointsFile pts = read_points_csv(points_path);
  const SignalFile sig = read_signal_csv(signal_path);
  const Vector bound = bind_signal(pts.ids, sig);
  const int n = static_cast<int>(pts.ids.size());
  fs::create_directories(out);
  json meta{{"source_points", points_path},
            {"source_signal", signal_path},
            {"n", n}};

  if (graph_kind == "ring") {
    if (pts.two_d) throw invalid_input("ring ingestion needs 1D coordinates");
    // sort by coordinate, then map affinely onto the circle leaving one
    // mean gap between the last and first sample
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return pts.coords(a, 0) < pts.coords(b, 0);
    });
    const double t0 = pts.coords(order.front(), 0);
    const double t1 = pts.coords(order.back(), 0);
    if (!(t1 > t0))
      throw invalid_input("1D coordinates span zero length");
    const double span = (t1 - t0) * (1.0 + 1.0 / (n - 1));
    Vector angles(n), values(n);
    for (int i = 0; i < n; ++i) {
      angles[i] = two_pi * (pts.coords(order[i], 0) - t0) / span;
      values[i] = bound[order[i]];
    }
    build_ring_graph(angles, neighbors_per_side);  // validation
    write_points_csv((fs::path(out) / "points.csv").string(), angles);
    write_signal_csv((fs::path(out) / "signal.csv").string(), values);
    meta["graph"] = {{"kind", "ring"},
                     {"neighbors_per_side", neighbors_per_side}};
    meta["transform"] = "sorted 1D coordinates mapped to angles in [0, 2*pi)";
  } else if (graph_kind == "delaunay") {
    if (!pts.two_d)
      throw invalid_input("delaunay ingestion needs 2D coordinates");
    build_delaunay_graph(pts.coords);  // validation
    write_points_csv((fs::path(out) / "points.csv").string(), pts.coords);
    write_signal_csv((fs::path(out) / "signal.csv").string(), bound);
    meta["graph"] = {{"kind", "delaunay"}};
  } else {
    throw invalid_input("ingest graph must be ring or delaunay");
  }
  write_json((fs::path(out) / "meta.json").string(), meta);
  if (!quiet) std::cout << "bundle ready in " << out << '\n';
  return 0;
}

int cmd_decompose(const RunConfig& c) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto [graph, signal] = load_problem(c);
  const StoppingRule rule = stopping_rule(c);
  fs::create_directories(c.out_dir);

  DecompositionResult result;
  if (c.method == "db_if") {
    const DistanceMatrix dist = distances_for(c, graph);
    result = db_if(graph, dist, signal, c.nu, rule, c.max_imfs,
                   window_mode(c));
  } else if (c.method == "gft_if") {
    const SpectralBasis basis = eigendecompose(laplacian(graph));
    result = gft_if(graph, basis, signal, parse_cutoff(c.cutoff), rule,
                    c.max_imfs);
    for (std::size_t k = 0; k < result.imfs.size(); ++k) {
      const std::string path =
          (fs::path(c.out_dir) / ("imf_" + std::to_string(k) + "_spectrum.csv"))
              .string();
      write_imf_spectrum_csv(path, result.eigenvalues, result.kernels[k],
                             result.imf_spectra[k]);
    }
  } else if (c.method == "fif") {
    require_equispaced_circle(graph);
    result = fif_1d(signal, c.nu, rule, c.max_imfs);
  } else {
    throw invalid_input("unknown method '" + c.method + "'");
  }

  write_imfs_csv((fs::path(c.out_dir) / "imfs.csv").string(), result);
  json meta = meta_json(result, c);
  meta["total_seconds"] = seconds_since(t_start);
  write_json((fs::path(c.out_dir) / "meta.json").string(), meta);
  if (!c.quiet)
    std::cout << "extracted " << result.imfs.size() << " components into "
              << c.out_dir << '\n';
  return 0;
}

int cmd_spectrum(const RunConfig& c) {
  const auto [graph, signal] = load_problem(c);
  const SpectralBasis basis = eigendecompose(laplacian(graph));
  const Vector coeffs = gft(basis, signal);
  double cutoff_value;
  const GftCutoff cut = parse_cutoff(c.cutoff);
  if (cut.automatic)
    cutoff_value = auto_gft_cutoff(basis, count_extrema(graph, signal));
  else
    cutoff_value = cut.manual.front();
  const SpectralKernel kernel = hann_spectral_kernel(basis, cutoff_value);
  fs::create_directories(c.out_dir);
  write_spectrum_csv((fs::path(c.out_dir) / "spectrum.csv").string(),
                     basis.eigenvalues, coeffs, &kernel.values);
  if (!c.quiet)
    std::cout << "wrote spectrum.csv (cutoff " << format_double(cutoff_value)
              << ") to " << c.out_dir << '\n';
  return 0;
}

int cmd_benchmark(const std::vector<int>& sizes,
                  const std::vector<std::string>& methods, int inner, int imfs,
                  std::uint64_t seed, const std::string& out, bool quiet) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw invalid_input("sizes must be strictly ascending");
  for (const auto& m : methods)
    if (m != "gft_if" && m != "db_if" && m != "fif")
      throw invalid_input("unknown method '" + m + "'");
  fs::create_directories(out);
  const StoppingRule rule = StoppingRule::fixed(inner);

  struct Row {
    int n;
    std::string method;
    double precompute = 0.0, run = 0.0;
    bool ok = true;
    std::string note;
  };
  std::vector<Row> rows;

  for (int n : sizes) {
    Rng rng(seed ^ static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ull);
    const Vector angles = random_sorted_angles(n, rng);
    const Vector eq = equispaced_angles(n);
    for (const auto& method : methods) {
      Row row;
      row.n = n;
      row.method = method;
      try {
        // warm-up pass first; the measured pass follows
        for (int pass = 0; pass < 2; ++pass) {
          if (method == "gft_if") {
            const Graph g = build_ring_graph(angles, 2);
            const Vector s = chirp_sum(angles);
            auto t0 = std::chrono::steady_clock::now();
            const SpectralBasis basis = eigendecompose(laplacian(g));
            row.precompute = seconds_since(t0);
            t0 = std::chrono::steady_clock::now();
            gft_if(g, basis, s, GftCutoff::auto_rule(), rule, imfs, true);
            row.run = seconds_since(t0);
          } else if (method == "db_if") {
            const Graph g = build_ring_graph(angles, 2);
            const Vector s = chirp_sum(angles);
            auto t0 = std::chrono::steady_clock::now();
            const DistanceMatrix dist = circular_distance_matrix(angles);
            row.precompute = seconds_since(t0);
            t0 = std::chrono::steady_clock::now();
            db_if(g, dist, s, 1.6, rule, imfs, WindowMode::row_stochastic,
                  WindowStorage::dense, true);
            row.run = seconds_since(t0);
          } else {
            const Vector s = chirp_sum(eq);
            row.precompute = 0.0;  // the transform grid is fixed
            const auto t0 = std::chrono::steady_clock::now();
            fif_1d(s, 1.6, rule, imfs, true);
            row.run = seconds_since(t0);
          }
        }
      } catch (const std::bad_alloc&) {
        row.ok = false;
        row.note = "out of memory";
      } catch (const error& e) {
        row.ok = false;
        row.note = e.what();
      }
      if (!quiet)
        std::cout << "n=" << row.n << " method=" << row.method
                  << (row.ok ? " precompute=" + format_double(row.precompute) +
                                   "s run=" + format_double(row.run) + "s"
                             : " FAILED: " + row.note)
                  << '\n';
      rows.push_back(std::move(row));
    }
  }

  {
    auto csv_out = csv::open_out((fs::path(out) / "benchmark.csv").string());
    csv_out << "n,method,precompute_seconds,run_seconds,status\n";
    for (const auto& r : rows)
      csv_out << r.n << ',' << r.method << ',' << format_double(r.precompute)
              << ',' << format_double(r.run) << ','
              << (r.ok ? "ok" : "failed") << '\n';
  }
  json report{{"environment", {{"cpu", cpu_description()}}},
              {"inner_iterations", inner},
              {"imfs", imfs},
              {"seed", seed},
              {"rows", json::array()}};
  for (const auto& r : rows)
    report["rows"].push_back({{"n", r.n},
                              {"method", r.method},
                              {"precompute_seconds", r.precompute},
                              {"run_seconds", r.run},
                              {"status", r.ok ? "ok" : "failed"},
                              {"note", r.note}});
  write_json((fs::path(out) / "benchmark.json").string(), report);
  return 0;
}

int cmd_limit_check(int trials, int n, std::uint64_t seed,
                    const std::string& out, bool quiet) {
  const LimitCheckReport report = run_limit_check(trials, n, seed);
  json j{{"trials", report.trials},
         {"n", n},
         {"seed", seed},
         {"max_relative_error", report.max_relative_error},
         {"divergence_detected", report.divergence_detected},
         {"zero_operator_error", report.zero_operator_error}};
  if (!out.empty()) {
    fs::create_directories(out);
    write_json((fs::path(out) / "limit_check.json").string(), j);
  }
  if (!quiet) {
    std::cout << "limit check: " << report.trials
              << " trials, max relative error "
              << format_double(report.max_relative_error) << '\n'
              << "divergence detection on a planted eigenvalue 2.1: "
              << (report.divergence_detected ? "detected" : "MISSED") << '\n'
              << "zero-operator limit error "
              << format_double(report.zero_operator_error) << '\n';
  }
  return report.divergence_detected ? 0 : 3;
}

int exit_code_for(error_kind kind) {
  switch (kind) {
    case error_kind::invalid_input:
      return 2;
    case error_kind::numeric_failure:
      return 3;
    case error_kind::io_failure:
      return 4;
  }
  return 1;
}

const char* kind_name(error_kind kind) {
  switch (kind) {
    case error_kind::invalid_input:
      return "invalid_input";
    case error_kind::numeric_failure:
      return "numeric_failure";
    case error_kind::io_failure:
      return "io_failure";
  }
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph iterative-filtering toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::string> out_flag;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed_flag, "seed for all randomness");
  app.add_option("--out", out_flag, "output directory");
  app.add_flag("--quiet", quiet, "suppress progress output");

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic example");
  int gen_example = 1, gen_n = 512;
  bool gen_equispaced = false;
  gen->add_option("--example", gen_example, "example id (1: ring, 2: planar)")
      ->check(CLI::Range(1, 2));
  gen->add_option("--n", gen_n, "number of vertices");
  gen->add_flag("--equispaced", gen_equispaced,
                "equispaced grid instead of random angles (example 1)");

  // ingest
  auto* ing = app.add_subcommand("ingest", "turn scattered CSVs into a bundle");
  std::string ing_points, ing_signal, ing_graph = "ring";
  int ing_neighbors = 2;
  ing->add_option("--points", ing_points, "points CSV (id,x[,y])")->required();
  ing->add_option("--signal", ing_signal, "signal CSV (id,value)")->required();
  ing->add_option("--graph", ing_graph, "ring | delaunay");
  ing->add_option("--neighbors-per-side", ing_neighbors,
                  "ring neighbors per side");

  // decompose / spectrum share the RunConfig surface
  auto add_run_options = [&](CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--method", c.method, "db_if | gft_if | fif");
    cmd->add_option("--graph", c.graph_kind, "ring | delaunay | edge_list");
    cmd->add_option("--neighbors-per-side", c.neighbors_per_side,
                    "ring neighbors per side");
    cmd->add_option("--points", c.points_file, "points CSV");
    cmd->add_option("--edges", c.edges_file, "edge list CSV");
    cmd->add_option("--signal", c.signal_file, "signal CSV");
    cmd->add_option("--nu", c.nu, "window-length tuning parameter");
    cmd->add_option("--cutoff", c.cutoff,
                    "'auto' or comma-separated spectral cutoffs");
    cmd->add_option("--window-mode", c.window_mode,
                    "row_stochastic | symmetrized");
    cmd->add_option("--distance-source", c.distance_source,
                    "embedding | shortest_path | file");
    cmd->add_option("--distance-method", c.distance_method,
                    "dijkstra | floyd_warshall");
    cmd->add_option("--edge-length", c.edge_length,
                    "weight | inverse_weight");
    cmd->add_option("--distance-file", c.distance_file,
                    "distance matrix CSV");
    cmd->add_option("--stopping", c.stopping_mode,
                    "relative_change | fixed_iterations");
    cmd->add_option("--max-iterations", c.max_iterations,
                    "inner iteration cap");
    cmd->add_option("--delta", c.delta, "relative-change threshold");
    cmd->add_option("--max-imfs", c.max_imfs, "outer-loop cap");
  };
  RunConfig dec_cfg, spec_cfg;
  auto* dec = app.add_subcommand("decompose", "run a decomposition");
  add_run_options(dec, dec_cfg);
  auto* spec = app.add_subcommand("spectrum",
                                  "export transform coefficients and kernel");
  add_run_options(spec, spec_cfg);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "timing harness");
  std::vector<int> bench_sizes{128, 512, 2048};
  std::vector<std::string> bench_methods{"gft_if", "db_if", "fif"};
  int bench_inner = 10, bench_imfs = 10;
  bench->add_option("--sizes", bench_sizes, "ascending vertex counts")
      ->delimiter(',');
  bench->add_option("--methods", bench_methods, "methods to time")
      ->delimiter(',');
  bench->add_option("--inner-iterations", bench_inner,
                    "fixed inner iterations per component");
  bench->add_option("--imfs", bench_imfs, "forced component count");

  // limit-check
  auto* lim = app.add_subcommand("limit-check",
                                 "verify iterated sifting against the "
                                 "closed-form limit");
  int lim_trials = 100, lim_n = 8;
  lim->add_option("--trials", lim_trials, "number of random operators");
  lim->add_option("--n", lim_n, "operator size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << json{{"error",
                       {{"kind", "invalid_input"}, {"message", e.what()}}}}
                     .dump()
              << '\n';
    return 2;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_example, gen_n, seed_flag.value_or(0),
                          out_flag.value_or("."), gen_equispaced, quiet);
    }
    if (ing->parsed()) {
      return cmd_ingest(ing_points, ing_signal, ing_graph,
                        out_flag.value_or("."), ing_neighbors, quiet);
    }
    if (dec->parsed() || spec->parsed()) {
      RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
      // flags override the config file
      RunConfig& flags = dec->parsed() ? dec_cfg : spec_cfg;
      CLI::App* cmd = dec->parsed() ? dec : spec;
      auto overridden = [&](const std::string& name) {
        return cmd->count(name) > 0;
      };
      if (config_path.empty()) {
        cfg = flags;
      } else {
        if (overridden("--method")) cfg.method = flags.method;
        if (overridden("--graph")) cfg.graph_kind = flags.graph_kind;
        if (overridden("--neighbors-per-side"))
          cfg.neighbors_per_side = flags.neighbors_per_side;
        if (overridden("--points")) cfg.points_file = flags.points_file;
        if (overridden("--edges")) cfg.edges_file = flags.edges_file;
        if (overridden("--signal")) cfg.signal_file = flags.signal_file;
        if (overridden("--nu")) cfg.nu = flags.nu;
        if (overridden("--cutoff")) cfg.cutoff = flags.cutoff;
        if (overridden("--window-mode")) cfg.window_mode = flags.window_mode;
        if (overridden("--distance-source"))
          cfg.distance_source = flags.distance_source;
        if (overridden("--distance-method"))
          cfg.distance_method = flags.distance_method;
        if (overridden("--edge-length")) cfg.edge_length = flags.edge_length;
        if (overridden("--distance-file"))
          cfg.distance_file = flags.distance_file;
        if (overridden("--stopping")) cfg.stopping_mode = flags.stopping_mode;
        if (overridden("--max-iterations"))
          cfg.max_iterations = flags.max_iterations;
        if (overridden("--delta")) cfg.delta = flags.delta;
        if (overridden("--max-imfs")) cfg.max_imfs = flags.max_imfs;
      }
      if (seed_flag) cfg.seed = *seed_flag;
      if (out_flag) cfg.out_dir = *out_flag;
      cfg.quiet = cfg.quiet || quiet;
      return dec->parsed() ? cmd_decompose(cfg) : cmd_spectrum(cfg);
    }
    if (bench->parsed()) {
      return cmd_benchmark(bench_sizes, bench_methods, bench_inner, bench_imfs,
                           seed_flag.value_or(0), out_flag.value_or("."),
                           quiet);
    }
    if (lim->parsed()) {
      return cmd_limit_check(lim_trials, lim_n, seed_flag.value_or(0),
                             out_flag.value_or(""), quiet);
    }
  } catch (const error& e) {
    std::cerr << json{{"error",
                       {{"kind", kind_name(e.kind())},
                        {"message", e.what()}}}}
                     .dump()
              << '\n';
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << json{{"error",
                       {{"kind", "numeric_failure"},
                        {"message", "out of memory"}}}}
                     .dump()
              << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error",
                       {{"kind", "internal"}, {"message", e.what()}}}}
                     .dump()
              << '\n';
    return 1;
  }
  return 0;
}
