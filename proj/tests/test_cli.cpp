#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

struct CliResult {
  int code = -1;
  std::string output;  // stdout and stderr merged
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + PARAMP_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    r.output.append(buf, got);
  const int status = pclose(pipe);
  REQUIRE(status != -1);
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  return r;
}

std::string config_path(const char* name) {
  return std::string(PARAMP_CONFIG_DIR) + "/" + name;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("paramp_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

// Data rows of a CSV without quoted fields: skips '#' comments and the
// header, splits on commas.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

TEST_CASE("cli steady-state reports roots as json") {
  const CliResult r = run_cli("steady-state --delta 0 --zeta 0");
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("tool").get<std::string>() == "paramp-lab v0.1.0");
  CHECK(doc.at("schema").get<int>() == 1);
  CHECK(doc.at("delta").get<double>() == 0.0);
  CHECK(doc.at("bistable").get<bool>() == false);
  REQUIRE(doc.at("roots").size() == 1);
  CHECK(doc.at("roots")[0].at("n").get<double>() == Catch::Approx(4.0).margin(1e-12));
  CHECK(doc.at("roots")[0].at("stable").get<bool>() == true);
}

TEST_CASE("cli steady-state flags a bistable drive") {
  const CliResult r = run_cli("steady-state --delta -1.2 --zeta -0.35");
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("bistable").get<bool>() == true);
  REQUIRE(doc.at("roots").size() == 3);
  int stable = 0;
  for (const auto& root : doc.at("roots"))
    if (root.at("stable").get<bool>()) ++stable;
  CHECK(stable == 2);
}

TEST_CASE("cli steady-state rejects half of a drive pair") {
  const CliResult r = run_cli("steady-state --delta 0.5");
  CHECK(r.code == 2);
  CHECK_THAT(r.output, ContainsSubstring("error:"));
}

TEST_CASE("cli reference prints single cells") {
  CliResult r = run_cli("reference --table 1 --row JPA --column Gain");
  REQUIRE(r.code == 0);
  CHECK(r.output == "20-25 dB\n");

  r = run_cli("reference --table 1 --row JPA --column \"Noise Figure\"");
  REQUIRE(r.code == 0);
  CHECK(r.output == "~0.0065 dB\n");

  r = run_cli("reference --table 2 --row \"Single JJ\" --column \"P_{1dB}\"");
  REQUIRE(r.code == 0);
  CHECK(r.output == "–115 to –133 dBm\n");
}

TEST_CASE("cli reference prints whole tables and rejects half queries") {
  CliResult r = run_cli("reference --table 1");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Cryogenic amplifier families"));
  CHECK_THAT(r.output, ContainsSubstring("Scalability"));

  r = run_cli("reference --table 2");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Parametric amplifier architectures"));

  r = run_cli("reference --table 1 --row JPA");
  CHECK(r.code == 2);
  CHECK_THAT(r.output, ContainsSubstring("both --row and --column"));

  r = run_cli("reference --table 3 --row JPA --column Gain");
  CHECK(r.code != 0);
}

TEST_CASE("cli modes writes the eigenmode table") {
  TempDir tmp;
  const CliResult r = run_cli("modes --config " +
                              config_path("reference_single_jj.json") +
                              " --out " + tmp.str());
  REQUIRE(r.code == 0);
  CHECK_THAT(r.output, ContainsSubstring("wrote"));
  const std::string csv = read_file(tmp.path / "modes.csv");
  CHECK_THAT(csv, StartsWith("# paramp-lab v0.1.0, schema 1\n"));
  CHECK_THAT(csv, ContainsSubstring("single_junction"));
  CHECK_THAT(csv, ContainsSubstring("mode_index,freq_ghz,c_eff_fF"));
  const auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 1);
  // The junction plasma frequency for this config lands at 6.0 GHz.
  CHECK(std::stod(rows[0][1]) == Catch::Approx(6.0).margin(1e-9));
}

TEST_CASE("cli modes json variant") {
  TempDir tmp;
  const CliResult r = run_cli("modes --config " +
                              config_path("reference_single_jj.json") +
                              " --format json --out " + tmp.str());
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(read_file(tmp.path / "modes.json"));
  REQUIRE(doc.at("modes").size() == 1);
  CHECK(doc.at("modes")[0].at("freq_ghz").get<double>() ==
        Catch::Approx(6.0).margin(1e-9));
  CHECK(doc.at("modes")[0].at("z_eff_ohm").get<double>() > 0.0);
}

TEST_CASE("cli gain runs are deterministic") {
  TempDir a, b;
  const std::string args = "gain --config " +
                           config_path("reference_single_jj.json") +
                           " --points 201 --out ";
  const CliResult ra = run_cli(args + a.str());
  const CliResult rb = run_cli(args + b.str());
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(read_file(a.path / "gain.csv") == read_file(b.path / "gain.csv"));
}

TEST_CASE("cli gain json carries the detuning axis") {
  TempDir tmp;
  const CliResult r = run_cli("gain --config " +
                              config_path("reference_single_jj.json") +
                              " --points 11 --format json --out " + tmp.str());
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(read_file(tmp.path / "gain.json"));
  CHECK(doc.at("x_label").get<std::string>() == "delta");
  CHECK(doc.at("architecture").get<std::string>() == "single_junction");
  REQUIRE(doc.at("points").size() == 11);
  // Midpoint of the default -3..3 axis sits on the pump; the operating
  // point (delta -0.6, zeta -0.15) gives |s11|^2 = 6.76 there.
  const Json& mid = doc.at("points")[5];
  CHECK(mid.at("delta").get<double>() == Catch::Approx(0.0).margin(1e-12));
  CHECK(mid.at("signal_gain_db").get<double>() ==
        Catch::Approx(10.0 * std::log10(6.76)).margin(1e-3));
}

TEST_CASE("cli gain over a frequency window") {
  TempDir tmp;
  const CliResult r = run_cli(
      "gain --config " + config_path("reference_single_jj.json") +
      " --from 5.9ghz --to 6.1ghz --points 5 --format json --plot --out " +
      tmp.str());
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(read_file(tmp.path / "gain.json"));
  CHECK(doc.at("x_label").get<std::string>() == "freq_ghz");
  REQUIRE(doc.at("points").size() == 5);
  CHECK(doc.at("points")[0].at("freq_ghz").get<double>() ==
        Catch::Approx(5.9).margin(1e-12));
  const std::string svg = read_file(tmp.path / "gain.svg");
  CHECK_THAT(svg, StartsWith("<svg "));
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
}

TEST_CASE("cli gain needs a matched frequency pair") {
  const CliResult r = run_cli("gain --config " +
                              config_path("reference_single_jj.json") +
                              " --from 5.9");
  CHECK(r.code == 2);
  CHECK_THAT(r.output, ContainsSubstring("--from and --to"));
}

TEST_CASE("cli sweep writes point files and a manifest") {
  TempDir a, b;
  const std::string args = "sweep --config " + config_path("sweep_zeta.json") +
                           " --points 9 --delta-from -2 --delta-to 2 --out ";
  const CliResult ra = run_cli(args + a.str());
  REQUIRE(ra.code == 0);
  CHECK_THAT(ra.output, ContainsSubstring("3 points"));

  const std::string manifest_text = read_file(a.path / "manifest.json");
  const Json manifest = Json::parse(manifest_text);
  CHECK(manifest.at("mode").get<std::string>() == "cartesian");
  REQUIRE(manifest.at("axes").size() == 1);
  CHECK(manifest.at("axes")[0].at("path").get<std::string>() ==
        "drive.strength.zeta");
  REQUIRE(manifest.at("points").size() == 3);
  for (const auto& point : manifest.at("points")) {
    CHECK(point.at("status").get<std::string>() == "ok");
    REQUIRE(point.at("files").size() == 1);
    CHECK(fs::exists(a.path / point.at("files")[0].get<std::string>()));
  }

  // Same command, fresh directory: identical bytes.
  const CliResult rb = run_cli(args + b.str());
  REQUIRE(rb.code == 0);
  CHECK(read_file(b.path / "manifest.json") == manifest_text);
  CHECK(read_file(a.path / "point_0000.csv") ==
        read_file(b.path / "point_0000.csv"));
}

TEST_CASE("cli p1db reports a compression point") {
  TempDir tmp;
  const CliResult r = run_cli("p1db --config " +
                              config_path("reference_single_jj.json") +
                              " --p-min -165 --p-max -125 --points 81 --out " +
                              tmp.str());
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("status").get<std::string>() == "compressed");
  const double p1db = doc.at("p1db_dbm").get<double>();
  CHECK(p1db > -165.0);
  CHECK(p1db < -125.0);
  const double ref_gain = doc.at("reference_gain_db").get<double>();
  CHECK(ref_gain > 6.0);
  CHECK(ref_gain < 7.5);
  REQUIRE(doc.at("curve").size() == 81);
  CHECK(doc.at("curve")[0].at("gain_db").get<double>() ==
        Catch::Approx(ref_gain));
  // The file copy matches what was printed.
  CHECK(Json::parse(read_file(tmp.path / "p1db.json")) == doc);
}

TEST_CASE("cli oracle steady matches the analytic root") {
  const CliResult r = run_cli("oracle --what steady --config " +
                              config_path("reference_single_jj.json") +
                              " --compare");
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("converged").get<bool>() == true);
  const double n = doc.at("n").get<double>();
  const double analytic = doc.at("analytic_n").get<double>();
  CHECK(analytic == Catch::Approx(4.0).margin(1e-9));
  CHECK(n == Catch::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("cli oracle gain tracks the scattering prediction") {
  TempDir tmp;
  const CliResult r = run_cli(
      "oracle --what gain --config " + config_path("reference_single_jj.json") +
      " --points 3 --delta-from 0.4 --delta-to 1.2 --compare --out " +
      tmp.str());
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(read_file(tmp.path / "oracle_gain.csv"));
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 5);
    const double measured = std::stod(row[1]);
    const double analytic = std::stod(row[3]);
    CHECK(measured == Catch::Approx(analytic).margin(0.1));
  }
}

TEST_CASE("cli selfcheck passes") {
  const CliResult r = run_cli("selfcheck");
  CHECK(r.code == 0);
  CHECK_THAT(r.output, ContainsSubstring("[PASS]"));
  CHECK(r.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("cli error surfaces") {
  // Unknown flag / unknown subcommand: argument parser exit path.
  CHECK(run_cli("gain --config x.json --no-such-flag").code != 0);
  CHECK(run_cli("frobnicate").code != 0);
  CHECK(run_cli("").code != 0);

  // Missing or malformed configuration: usage error path.
  CHECK(run_cli("modes --config /no/such/file.json").code == 2);
  TempDir tmp;
  {
    std::ofstream bad(tmp.path / "bad.json");
    bad << "{not json";
  }
  const CliResult r =
      run_cli("modes --config " + (tmp.path / "bad.json").string());
  CHECK(r.code == 2);
  CHECK_THAT(r.output, ContainsSubstring("error:"));

  // Help is not an error.
  CHECK(run_cli("--help").code == 0);
}
