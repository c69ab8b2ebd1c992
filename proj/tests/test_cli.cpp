#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "interlink/cli.hpp"

using namespace interlink;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<std::string> args, std::optional<std::string> env_outdir = std::nullopt) {
  std::vector<std::string> owned{"interlink-dse"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, env_outdir);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("interlink_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("eval prints the baseline metrics", "[cli]") {
  const auto r = cli({"eval", "--g", "1e6", "--kappa", "1e6", "--gamma", "1e6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("fom = 666666.333") != std::string::npos);
  CHECK(r.out.find("cooperativity = 1\n") != std::string::npos);
  CHECK(r.out.find("efficiency = 0.666666\n") != std::string::npos);

  const auto j = cli({"eval", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(std::abs(parsed["metrics"]["fom"].get<double>() / 6.6667e5 - 1) < 1e-3);
  CHECK(parsed["regime"] == "unclassified");
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"eval", "--alpha", "1.0"}).code == 1);
  CHECK(cli({"eval", "--g", "0"}).code == 1);
  CHECK(cli({"eval", "--nonsense", "3"}).code == 1);
  CHECK(cli({"sweep", "--xn", "0"}).code == 1);
  CHECK(cli({"contour", "--metric", "fom"}).code == 1);
  CHECK(cli({"bench", "--registry", "/nonexistent/file.csv"}).code == 2);
  CHECK(cli({"eval", "--config", "/nonexistent/run.cfg"}).code == 1);
  CHECK(cli({"--help"}).code == 0);

  TempDir t;
  const auto bad = t.path / "bad.csv";
  std::ofstream(bad) << "name,qubit_type,reference,g_hz,kappa_hz,gamma_hz\nx,trapped_ion,r,1e6,-1,1e6\n";
  const auto r = cli({"bench", "--registry", bad.string(), "--outdir", t.path.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":2:") != std::string::npos);

  // output path blocked by a regular file
  const auto blocker = t.path / "blocker";
  std::ofstream(blocker) << "x";
  CHECK(cli({"sens", "--gn", "5", "--outdir", (blocker / "sub").string()}).code == 2);
}

TEST_CASE("config file with flag override", "[cli]") {
  TempDir t;
  const auto cfg = t.path / "run.cfg";
  std::ofstream(cfg) << "alpha=0.3\ng=1e6\n";
  const auto from_file = cli({"eval", "--config", cfg.string(), "--format", "json"});
  const auto overridden = cli({"eval", "--config", cfg.string(), "--alpha", "0.7", "--format", "json"});
  REQUIRE(from_file.code == 0);
  REQUIRE(overridden.code == 0);
  const double f3 = nlohmann::json::parse(from_file.out)["metrics"]["fom"];
  const double f7 = nlohmann::json::parse(overridden.out)["metrics"]["fom"];
  CHECK(f7 / f3 == Catch::Approx((0.7 / 0.3) / (0.3 / 0.7)).epsilon(1e-12));

  std::ofstream(cfg, std::ios::app) << "unknown=1\n";
  const auto rejected = cli({"eval", "--config", cfg.string()});
  CHECK(rejected.code == 1);
  CHECK(rejected.err.find("unknown") != std::string::npos);
}

TEST_CASE("sweep writes a deterministic grid CSV", "[cli]") {
  TempDir t;
  const auto a = t.path / "a";
  const auto b = t.path / "b";
  REQUIRE(cli({"sweep", "--xn", "2", "--yn", "2", "--outdir", a.string()}).code == 0);
  const auto text = slurp(a / "sweep_gk.csv");
  auto rows = csv_rows(text);
  REQUIRE(rows.size() == 5);
  CHECK(text.substr(0, text.find('\n')) == kGridCsvHeader);

  REQUIRE(cli({"sweep", "--xmin", "1e5", "--xmax", "1e9", "--xn", "9", "--yn", "7", "--outdir", a.string()}).code == 0);
  REQUIRE(cli({"sweep", "--xmin", "1e5", "--xmax", "1e9", "--xn", "9", "--yn", "7", "--workers", "4", "--outdir",
               b.string()})
              .code == 0);
  const auto one = slurp(a / "sweep_gk.csv");
  CHECK(one == slurp(b / "sweep_gk.csv"));

  // every row re-checked against a direct engine call at 9 significant digits
  rows = csv_rows(one);
  REQUIRE(rows.size() == 1 + 9 * 7);
  const auto grid = sweep_2d({Parameter::G, 1e5, 1e9, 9}, {Parameter::Kappa, 1e4, 1e10, 7}, {});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    REQUIRE(row.size() == 10);
    const auto& m = grid.values[i - 1];
    CHECK(row[0] == "g");
    CHECK(row[2] == "kappa");
    CHECK(row[1] == format_sig9(grid.xs[(i - 1) / 7]));
    CHECK(row[3] == format_sig9(grid.ys[(i - 1) % 7]));
    CHECK(row[4] == format_sig9(m.cooperativity));
    CHECK(row[5] == format_sig9(m.efficiency));
    CHECK(row[6] == format_sig9(m.infidelity));
    CHECK(row[7] == format_sig9(m.latency));
    CHECK(row[8] == format_sig9(m.fom));
    CHECK(row[9] == m.flags.to_string());
    if (m.efficiency > 1.0) CHECK(row[9].find("exceeds-unity") != std::string::npos);
  }
  CHECK(rows[1][9] == "exceeds-unity;external-exceeds-total");  // g=1e5, kappa=1e4
  CHECK(!fs::exists(a / "sweep_gk.csv.tmp"));
}

TEST_CASE("environment variable picks the output directory", "[cli]") {
  TempDir t;
  REQUIRE(cli({"sweep", "--plane", "ggamma", "--xn", "3", "--yn", "3"}, t.path.string()).code == 0);
  CHECK(fs::exists(t.path / "sweep_ggamma.csv"));
  const auto flag_dir = t.path / "flag";
  REQUIRE(cli({"sweep", "--xn", "3", "--yn", "3", "--outdir", flag_dir.string()}, t.path.string()).code == 0);
  CHECK(fs::exists(flag_dir / "sweep_gk.csv"));
}

TEST_CASE("contour output", "[cli]") {
  TempDir t;
  const auto r = cli({"contour", "--metric", "efficiency", "--levels", "0.5,0.7,0.8", "--xn", "60", "--yn", "60",
                      "--outdir", t.path.string(), "--plot-script"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(slurp(t.path / "contour_efficiency_gk.csv"));
  REQUIRE(rows.size() > 10);
  CHECK(rows[0].size() == 9);
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 60}, {Parameter::Kappa, 1e4, 1e10, 60}, {});
  const auto lines = extract_contours(grid, MetricId::Efficiency, {0.5, 0.7, 0.8});
  std::size_t n = 0;
  for (const auto& l : lines) n += l.vertices.size();
  CHECK(rows.size() == n + 1);
  CHECK(rows[1][6] == format_sig9(lines[0].vertices[0].x));
  CHECK(rows[1][8] == format_sig9(lines[0].vertices[0].y));
  CHECK(fs::exists(t.path / "plot_contour_efficiency_gk.py"));

  REQUIRE(cli({"contour", "--metric", "infidelity", "--xn", "20", "--yn", "20", "--format", "json", "--outdir",
               t.path.string()})
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(t.path / "contour_infidelity_gk.json"));
  CHECK(j["polylines"].size() >= 3);
}

TEST_CASE("bench on the bundled registry", "[cli]") {
  TempDir t;
  const auto r = cli({"bench", "--outdir", t.path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("9 records, 8 ranked, 1 unranked") != std::string::npos);
  const auto rows = csv_rows(slurp(t.path / "bench.csv"));
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 1; i <= 8; ++i) {
    CHECK(rows[i][0] == std::to_string(i));
    CHECK(rows[i].back() == "ranked");
  }
  CHECK(rows[9][0].empty());
  CHECK(rows[9][1] == "Magnard");
  CHECK(rows[9].back() == "gamma-missing");

  CHECK(csv_rows(slurp(t.path / "overlay_gk.csv")).size() == 10);
  CHECK(csv_rows(slurp(t.path / "overlay_ggamma.csv")).size() == 9);

  const auto bundled_path = std::string(INTERLINK_SOURCE_DIR) + "/data/technologies.csv";
  const auto from_file = t.path / "file";
  REQUIRE(cli({"bench", "--registry", bundled_path, "--outdir", from_file.string()}).code == 0);
  CHECK(slurp(from_file / "bench.csv") == slurp(t.path / "bench.csv"));

  REQUIRE(cli({"bench", "--format", "json", "--outdir", t.path.string()}).code == 0);
  const auto j = nlohmann::json::parse(slurp(t.path / "bench.json"));
  CHECK(j["ranking"].size() == 8);
  CHECK(j["omitted"][0]["reason"] == "gamma-missing");
  CHECK(j["overlay"]["gk"].size() == 9);
  CHECK(j["overlay"]["ggamma"].size() == 8);
}

TEST_CASE("sens output", "[cli]") {
  TempDir t;
  const auto r = cli({"sens", "--pairs", "1e4:1e4,1e6:1e6,1e8:1e8", "--gn", "21", "--outdir", t.path.string()});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(slurp(t.path / "sensitivity.csv"));
  REQUIRE(rows.size() == 1 + 3 * 21);
  CHECK(rows[1][2] == format_sig9(1e5));
  const std::vector<DecayPair> pairs{{1e4, 1e4}, {1e6, 1e6}, {1e8, 1e8}};
  const auto series = sensitivity_curves(pairs, {Parameter::G, 1e4, 1e12, 21}, {});
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 21; ++i) {
      const auto& row = rows[1 + k * 21 + i];
      CHECK(row[3] == format_sig9(series[k].g_values[i]));
      CHECK(row[4] == format_sig9(series[k].fom_values[i]));
    }
  }
}
