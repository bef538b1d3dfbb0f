// End-to-end checks of the command-line tool. The binary path arrives via
// the GSIFT_BIN environment variable (set by CTest).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"

using namespace gsift;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* bin = std::getenv("GSIFT_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

struct Run {
  int exit_code;
  std::string stderr_text;
};

Run run_cli(const std::string& args, const fs::path& dir) {
  const std::string err_file = (dir / "stderr.txt").string();
  const std::string cmd =
      binary() + " " + args + " 2>" + err_file + " >/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream err(err_file);
  std::stringstream buf;
  buf << err.rdbuf();
  return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("gsift_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& sub = "") const {
    return (sub.empty() ? path : path / sub).string();
  }
};

Vector column_sum_from_imfs_csv(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> sums;
  while (std::getline(in, line)) {
    const auto f = csv::split(line);
    double total = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i)
      total += csv::parse_double(f[i], "column");
    sums.push_back(total);
  }
  Vector v(static_cast<Eigen::Index>(sums.size()));
  for (std::size_t i = 0; i < sums.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = sums[i];
  return v;
}

}  // namespace

TEST_CASE("generate writes the synthetic bundle deterministically") {
  TempDir a("gen_a"), b("gen_b"), c("gen_c");
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 7 --out " + a.str(), a.path)
              .exit_code == 0);
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 7 --out " + b.str(), b.path)
              .exit_code == 0);
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 8 --out " + c.str(), c.path)
              .exit_code == 0);

  for (const char* name :
       {"points.csv", "signal.csv", "component_0.csv", "component_1.csv"}) {
    REQUIRE(slurp(a.path / name) == slurp(b.path / name));
  }
  REQUIRE(slurp(a.path / "points.csv") != slurp(c.path / "points.csv"));

  // the signal equals the sum of the emitted components, exactly
  const SignalFile s = read_signal_csv(a.str("signal.csv"));
  const SignalFile c0 = read_signal_csv(a.str("component_0.csv"));
  const SignalFile c1 = read_signal_csv(a.str("component_1.csv"));
  REQUIRE((s.values - (c0.values + c1.values)).cwiseAbs().maxCoeff() == 0.0);

  // component formulas at the sampled points
  const PointsFile pts = read_points_csv(a.str("points.csv"));
  for (int i = 0; i < 64; ++i) {
    REQUIRE(c0.values[i] == chirp_fast(pts.coords(i, 0)));
    REQUIRE(c1.values[i] == chirp_slow(pts.coords(i, 0)));
  }
}

TEST_CASE("decompose round-trips the input signal") {
  TempDir dir("dec");
  REQUIRE(run_cli("generate --example 1 --n 128 --seed 3 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  const std::string out = dir.str("run");
  REQUIRE(run_cli("decompose --method db_if --graph ring --points " +
                      dir.str("points.csv") + " --signal " +
                      dir.str("signal.csv") + " --max-imfs 2 --out " + out,
                  dir.path)
              .exit_code == 0);

  const SignalFile input = read_signal_csv(dir.str("signal.csv"));
  const Vector sums = column_sum_from_imfs_csv(fs::path(out) / "imfs.csv");
  REQUIRE((sums - input.values).norm() <= 1e-10 * input.values.norm());

  const json meta = json::parse(slurp(fs::path(out) / "meta.json"));
  REQUIRE(meta.at("method") == "db_if");
  REQUIRE(meta.at("imf_count").get<int>() >= 1);
  REQUIRE(meta.at("imfs")[0].at("iterations").get<int>() >= 1);
}

TEST_CASE("decompose is reproducible byte for byte") {
  TempDir dir("repro");
  REQUIRE(run_cli("generate --example 1 --n 96 --seed 11 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  json cfg{{"method", "db_if"},
           {"graph", {{"kind", "ring"}, {"neighbors_per_side", 2},
                      {"points", dir.str("points.csv")}}},
           {"signal", dir.str("signal.csv")},
           {"max_imfs", 2}};
  std::ofstream(dir.str("cfg.json")) << cfg.dump();
  for (const char* run : {"r1", "r2"}) {
    REQUIRE(run_cli("decompose --config " + dir.str("cfg.json") + " --out " +
                        dir.str(run),
                    dir.path)
                .exit_code == 0);
  }
  REQUIRE(slurp(dir.path / "r1" / "imfs.csv") ==
          slurp(dir.path / "r2" / "imfs.csv"));
}

TEST_CASE("command-line flags override config-file fields") {
  TempDir dir("override");
  REQUIRE(run_cli("generate --example 1 --n 96 --seed 13 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  json cfg{{"method", "db_if"},
           {"graph", {{"kind", "ring"}, {"points", dir.str("points.csv")}}},
           {"signal", dir.str("signal.csv")},
           {"max_imfs", 1}};
  std::ofstream(dir.str("cfg.json")) << cfg.dump();
  REQUIRE(run_cli("decompose --config " + dir.str("cfg.json") +
                      " --max-imfs 2 --out " + dir.str("run"),
                  dir.path)
              .exit_code == 0);
  const json meta = json::parse(slurp(dir.path / "run" / "meta.json"));
  REQUIRE(meta.at("imf_count").get<int>() == 2);
  REQUIRE(meta.at("config").at("max_imfs").get<int>() == 2);
}

TEST_CASE("gft_if decompose exports per-component spectra") {
  TempDir dir("gft");
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 5 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  const std::string out = dir.str("run");
  REQUIRE(run_cli("decompose --method gft_if --graph ring --points " +
                      dir.str("points.csv") + " --signal " +
                      dir.str("signal.csv") +
                      " --cutoff auto --max-imfs 2 --out " + out,
                  dir.path)
              .exit_code == 0);
  REQUIRE(fs::exists(fs::path(out) / "imf_0_spectrum.csv"));
  const std::string spectrum = slurp(fs::path(out) / "imf_0_spectrum.csv");
  REQUIRE(spectrum.rfind("index,eigenvalue,kernel_value,imf_coefficient", 0) ==
          0);
}

TEST_CASE("fif rejects non-equispaced input naming the alternatives") {
  TempDir dir("fif");
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 2 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  const Run r = run_cli("decompose --method fif --graph ring --points " +
                            dir.str("points.csv") + " --signal " +
                            dir.str("signal.csv") + " --out " + dir.str("x"),
                        dir.path);
  REQUIRE(r.exit_code == 2);
  const json err = json::parse(r.stderr_text);
  REQUIRE(err.at("error").at("kind") == "invalid_input");
  const std::string msg = err.at("error").at("message");
  REQUIRE(msg.find("gft_if") != std::string::npos);
  REQUIRE(msg.find("db_if") != std::string::npos);

  // the equispaced variant is accepted
  TempDir eq("fifeq");
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 2 --equispaced --out " +
                      eq.str(),
                  eq.path)
              .exit_code == 0);
  REQUIRE(run_cli("decompose --method fif --graph ring --points " +
                      eq.str("points.csv") + " --signal " +
                      eq.str("signal.csv") + " --max-imfs 2 --out " +
                      eq.str("run"),
                  eq.path)
              .exit_code == 0);
}

TEST_CASE("invalid cutoffs exit with the invalid-input code") {
  TempDir dir("cut");
  REQUIRE(run_cli("generate --example 1 --n 64 --seed 4 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  const Run r = run_cli("decompose --method gft_if --graph ring --points " +
                            dir.str("points.csv") + " --signal " +
                            dir.str("signal.csv") + " --cutoff 0 --out " +
                            dir.str("x"),
                        dir.path);
  REQUIRE(r.exit_code == 2);
}

TEST_CASE("spectrum emits coefficients, kernel, and satisfies Parseval") {
  TempDir dir("spec");
  REQUIRE(run_cli("generate --example 1 --n 96 --seed 9 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  REQUIRE(run_cli("spectrum --graph ring --points " + dir.str("points.csv") +
                      " --signal " + dir.str("signal.csv") +
                      " --cutoff auto --out " + dir.str("run"),
                  dir.path)
              .exit_code == 0);

  std::ifstream in(dir.str("run") + "/spectrum.csv");
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "index,eigenvalue,coefficient,kernel");
  double energy = 0.0;
  double prev_lambda = -1.0;
  while (std::getline(in, line)) {
    const auto f = csv::split(line);
    REQUIRE(f.size() == 4);
    const double lambda = csv::parse_double(f[1], "eigenvalue");
    const double coeff = csv::parse_double(f[2], "coefficient");
    const double kernel = csv::parse_double(f[3], "kernel");
    REQUIRE(lambda >= prev_lambda - 1e-12);
    prev_lambda = lambda;
    REQUIRE(kernel >= 0.0);
    REQUIRE(kernel <= 1.0);
    energy += coeff * coeff;
  }
  const SignalFile input = read_signal_csv(dir.str("signal.csv"));
  REQUIRE(energy ==
          Catch::Approx(input.values.squaredNorm()).epsilon(1e-10));

  // constant signal: only the null-mode coefficient survives
  TempDir cdir("spec_const");
  {
    Rng rng(31);
    const Vector angles = random_sorted_angles(32, rng);
    write_points_csv(cdir.str("points.csv"), angles);
    write_signal_csv(cdir.str("signal.csv"), Vector::Constant(32, 1.5));
  }
  REQUIRE(run_cli("spectrum --graph ring --points " + cdir.str("points.csv") +
                      " --signal " + cdir.str("signal.csv") +
                      " --cutoff 1.0 --out " + cdir.str("run"),
                  cdir.path)
              .exit_code == 0);
  std::ifstream cin(cdir.str("run") + "/spectrum.csv");
  std::getline(cin, line);
  int index = 0;
  while (std::getline(cin, line)) {
    const auto f = csv::split(line);
    const double coeff = csv::parse_double(f[2], "coefficient");
    if (index++ == 0)
      REQUIRE(std::abs(coeff) > 1.0);
    else
      REQUIRE(std::abs(coeff) <= 1e-10);
  }
}

TEST_CASE("ingest validates ids and builds bundles") {
  TempDir dir("ingest");
  {
    std::ofstream p(dir.str("points.csv"));
    p << "id,x\n3,0.5\n1,2.25\n2,9.0\n0,4.5\n";
    std::ofstream s(dir.str("signal.csv"));
    s << "id,value\n0,1.0\n1,2.0\n2,3.0\n3,4.0\n";
  }
  REQUIRE(run_cli("ingest --points " + dir.str("points.csv") + " --signal " +
                      dir.str("signal.csv") +
                      " --graph ring --neighbors-per-side 1 --out " +
                      dir.str("bundle"),
                  dir.path)
              .exit_code == 0);
  const PointsFile bundle = read_points_csv(dir.str("bundle") + "/points.csv");
  const SignalFile bsig = read_signal_csv(dir.str("bundle") + "/signal.csv");
  REQUIRE(bundle.coords.rows() == 4);
  // sorted by coordinate and mapped into [0, 2*pi)
  for (int i = 1; i < 4; ++i)
    REQUIRE(bundle.coords(i, 0) > bundle.coords(i - 1, 0));
  REQUIRE(bundle.coords(0, 0) == 0.0);
  REQUIRE(bundle.coords(3, 0) < two_pi);
  // signal followed the sort: coordinate order 0.5,2.25,4.5,9.0 -> ids 3,1,0,2
  REQUIRE(bsig.values[0] == 4.0);
  REQUIRE(bsig.values[1] == 2.0);
  REQUIRE(bsig.values[2] == 1.0);
  REQUIRE(bsig.values[3] == 3.0);

  SECTION("id mismatch is rejected with the missing ids") {
    std::ofstream s(dir.str("bad_signal.csv"));
    s << "id,value\n0,1.0\n1,2.0\n2,3.0\n9,4.0\n";
    s.close();
    const Run r = run_cli("ingest --points " + dir.str("points.csv") +
                              " --signal " + dir.str("bad_signal.csv") +
                              " --graph ring --out " + dir.str("b2"),
                          dir.path);
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.stderr_text.find("3") != std::string::npos);
    REQUIRE(r.stderr_text.find("9") != std::string::npos);
  }
  SECTION("duplicate ids are rejected") {
    std::ofstream p(dir.str("dup_points.csv"));
    p << "id,x\n0,0.5\n0,2.25\n1,9.0\n2,4.5\n";
    p.close();
    const Run r = run_cli("ingest --points " + dir.str("dup_points.csv") +
                              " --signal " + dir.str("signal.csv") +
                              " --graph ring --out " + dir.str("b3"),
                          dir.path);
    REQUIRE(r.exit_code == 2);
  }
  SECTION("non-finite signal values are rejected") {
    std::ofstream s(dir.str("nan_signal.csv"));
    s << "id,value\n0,1.0\n1,nan\n2,3.0\n3,4.0\n";
    s.close();
    const Run r = run_cli("ingest --points " + dir.str("points.csv") +
                              " --signal " + dir.str("nan_signal.csv") +
                              " --graph ring --out " + dir.str("b4"),
                          dir.path);
    REQUIRE(r.exit_code == 2);
  }
}

TEST_CASE("2D ingest produces a delaunay bundle") {
  TempDir dir("ingest2d");
  {
    Rng rng(41);
    const Matrix pts = random_points_square(24, rng);
    write_points_csv(dir.str("points.csv"), pts);
    write_signal_csv(dir.str("signal.csv"), plane_wave_sum(pts));
  }
  REQUIRE(run_cli("ingest --points " + dir.str("points.csv") + " --signal " +
                      dir.str("signal.csv") + " --graph delaunay --out " +
                      dir.str("bundle"),
                  dir.path)
              .exit_code == 0);
  const json meta = json::parse(slurp(dir.path / "bundle" / "meta.json"));
  REQUIRE(meta.at("graph").at("kind") == "delaunay");
}

TEST_CASE("edge-list graphs decompose with shortest-path distances") {
  TempDir dir("edges");
  {
    // hexagon with unit weights
    std::ofstream e(dir.str("edges.csv"));
    e << "i,j,weight\n0,1,1\n1,2,1\n2,3,1\n3,4,1\n4,5,1\n5,0,1\n";
    std::ofstream s(dir.str("signal.csv"));
    s << "id,value\n0,1\n1,-1\n2,1\n3,-1\n4,1\n5,-1\n";
  }
  REQUIRE(run_cli("decompose --method db_if --graph edge_list --edges " +
                      dir.str("edges.csv") + " --signal " +
                      dir.str("signal.csv") +
                      " --distance-source shortest_path --edge-length weight "
                      "--max-imfs 2 --out " + dir.str("run"),
                  dir.path)
              .exit_code == 0);
  const SignalFile input = read_signal_csv(dir.str("signal.csv"));
  const Vector sums = column_sum_from_imfs_csv(dir.path / "run" / "imfs.csv");
  REQUIRE((sums - input.values).norm() <= 1e-10 * input.values.norm());
}

TEST_CASE("degenerate triangulations exit with the numeric-failure code") {
  TempDir dir("collinear");
  {
    std::ofstream p(dir.str("points.csv"));
    p << "id,x,y\n0,0,0\n1,1,1\n2,2,2\n3,3,3\n";
    std::ofstream s(dir.str("signal.csv"));
    s << "id,value\n0,1\n1,2\n2,3\n3,4\n";
  }
  const Run r = run_cli("decompose --method db_if --graph delaunay --points " +
                            dir.str("points.csv") + " --signal " +
                            dir.str("signal.csv") + " --out " + dir.str("x"),
                        dir.path);
  REQUIRE(r.exit_code == 3);
  const json err = json::parse(r.stderr_text);
  REQUIRE(err.at("error").at("kind") == "numeric_failure");
}

TEST_CASE("missing inputs exit with the io-error code") {
  TempDir dir("ioerr");
  const Run r = run_cli("decompose --method db_if --graph ring --points " +
                            dir.str("nope.csv") + " --signal " +
                            dir.str("nope2.csv") + " --out " + dir.str("x"),
                        dir.path);
  REQUIRE(r.exit_code == 4);
  const json err = json::parse(r.stderr_text);
  REQUIRE(err.at("error").at("kind") == "io_failure");
}

TEST_CASE("an imported distance matrix reproduces the embedding run") {
  TempDir dir("distfile");
  REQUIRE(run_cli("generate --example 1 --n 48 --seed 6 --out " + dir.str(),
                  dir.path)
              .exit_code == 0);
  {
    const PointsFile pts = read_points_csv(dir.str("points.csv"));
    const DistanceMatrix c = circular_distance_matrix(pts.coords.col(0));
    write_distance_matrix_csv(dir.str("dist.csv"), c.values);
  }
  const std::string common = "decompose --method db_if --graph ring --points " +
                             dir.str("points.csv") + " --signal " +
                             dir.str("signal.csv") + " --max-imfs 1 ";
  REQUIRE(run_cli(common + "--out " + dir.str("embed"), dir.path).exit_code ==
          0);
  REQUIRE(run_cli(common + "--distance-source file --distance-file " +
                      dir.str("dist.csv") + " --out " + dir.str("file"),
                  dir.path)
              .exit_code == 0);
  REQUIRE(slurp(dir.path / "embed" / "imfs.csv") ==
          slurp(dir.path / "file" / "imfs.csv"));
}

TEST_CASE("limit-check reports convergence and flags the violation") {
  TempDir dir("limit");
  REQUIRE(run_cli("limit-check --trials 20 --n 8 --seed 1 --out " +
                      dir.str("run"),
                  dir.path)
              .exit_code == 0);
  const json report = json::parse(slurp(dir.path / "run" / "limit_check.json"));
  REQUIRE(report.at("max_relative_error").get<double>() <= 1e-6);
  REQUIRE(report.at("divergence_detected").get<bool>());
  REQUIRE(report.at("zero_operator_error").get<double>() <= 1e-12);
}

TEST_CASE("benchmark covers the requested grid") {
  TempDir dir("bench");
  REQUIRE(run_cli("benchmark --sizes 32,64 --methods gft_if,db_if,fif "
                  "--inner-iterations 2 --imfs 2 --seed 1 --quiet --out " +
                      dir.str("run"),
                  dir.path)
              .exit_code == 0);
  const json report = json::parse(slurp(dir.path / "run" / "benchmark.json"));
  REQUIRE(report.at("rows").size() == 6);
  for (const auto& row : report.at("rows")) {
    REQUIRE(row.at("status") == "ok");
    REQUIRE(row.at("precompute_seconds").get<double>() >= 0.0);
    REQUIRE(row.at("run_seconds").get<double>() >= 0.0);
    if (row.at("method") == "fif")
      REQUIRE(row.at("precompute_seconds").get<double>() == 0.0);
  }
  // descending sizes are rejected
  REQUIRE(run_cli("benchmark --sizes 64,32 --out " + dir.str("x"), dir.path)
              .exit_code == 2);
}
