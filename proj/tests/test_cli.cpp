#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace cli = sosgibbs::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "sosgibbs_cli_test";
  fs::create_directories(d);
  return d;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve-ti") {
  const auto r = run({"solve-ti", "--k", "2", "--m", "2", "--J", "-1", "--beta", "2"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["symmetric_roots"].size() == 3);
  CHECK(j["classification"] == "THREE");
  CHECK(j["beta_cr"].get<double>() == doctest::Approx(std::log(17.0) / 2));
  const json manifest = json::parse(r.err);
  CHECK(manifest["command"] == "solve-ti");
  CHECK(manifest["params"]["k"] == 2);

  const json afm = json::parse(run({"solve-ti", "--k", "2", "--m", "2", "--J", "1", "--beta", "2"}).out);
  CHECK(afm["symmetric_roots"].size() == 1);
  REQUIRE(afm["full_solutions"].size() == 1);
  CHECK(std::abs(afm["full_solutions"][0][0].get<double>() - 1.0) <= 1e-9);

  const json hot = json::parse(run({"solve-ti", "--k", "2", "--m", "2", "--J", "-1", "--beta", "0"}).out);
  REQUIRE(hot["symmetric_roots"].size() == 1);
  CHECK(hot["symmetric_roots"][0].get<double>() == doctest::Approx(1.0));

  const json th = json::parse(run({"solve-ti", "--k", "3", "--theta", "0.2"}).out);
  CHECK(th["params"]["theta_given"] == true);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"solve-ti", "--k", "2", "--m", "2", "--J", "-1"}).code == cli::kUsage);
  CHECK(run({"solve-ti", "--k", "0", "--J", "-1", "--beta", "1"}).code == cli::kUsage);
  CHECK(run({"solve-ti", "--k", "2", "--J", "-1", "--beta", "1", "--theta", "0.5"}).code == cli::kUsage);
  CHECK(run({"solve-ti", "--k", "2", "--theta", "-1"}).code == cli::kUsage);
  CHECK(run({"no-such-command"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"solve-ti", "--k", "2", "--theta", "0.5", "--format", "xml"}).code == cli::kUsage);
  CHECK(run({"critical-beta", "--k", "2", "--J", "1"}).code == cli::kUsage);
  CHECK(run({"phase-diagram", "--k", "2", "--J", "-1", "--beta-min", "2", "--beta-max", "1"}).code == cli::kUsage);
  CHECK(run({"build-nonti", "--k", "2", "--J", "-1", "--beta", "0.5", "--t", "0", "--s", "0"}).code == cli::kUsage);
  CHECK(run({"build-nonti", "--k", "2", "--J", "-1", "--beta", "2", "--t", "0", "--s", "9"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("critical-beta") {
  const auto r = run({"critical-beta", "--k", "3", "--J", "-1"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["beta_cr"].get<double>() == doctest::Approx(std::log(7.0) / 2));
  CHECK(j["count_transition"].get<double>() == doctest::Approx(1.4957444122).epsilon(1e-8));
}

TEST_CASE("phase diagram") {
  // The closed-form value is flagged, but the count stays at one across it.
  const auto r = run({"phase-diagram", "--k", "2", "--m", "2", "--J", "-1", "--beta-min", "1.3", "--beta-max", "1.55",
                      "--step", "1e-3"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 252);
  CHECK(rows[0] == std::vector<std::string>{"beta", "root_count", "z_minus", "z_mid", "z_plus", "beta_cr_flag"});
  int flagged = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "1");
    if (rows[i][5] == "1") {
      ++flagged;
      CHECK(std::stod(rows[i][0]) >= 1.41661);
      CHECK(std::stod(rows[i][0]) - 1e-3 < 1.41661);
    }
  }
  CHECK(flagged == 1);

  // The observed jump sits near 1.9562.
  const auto jump = parse_csv(run({"phase-diagram", "--k", "2", "--J", "-1", "--beta-min", "1.95", "--beta-max", "1.96",
                                   "--step", "1e-3"}).out);
  for (std::size_t i = 1; i < jump.size(); ++i) {
    const double beta = std::stod(jump[i][0]);
    CHECK(jump[i][1] == (beta < 1.9562 ? "1" : "3"));
    if (jump[i][1] == "3") CHECK_FALSE(jump[i][2].empty());
  }

  const auto k3 = parse_csv(run({"phase-diagram", "--k", "3", "--J", "-1", "--beta-min", "0.9", "--beta-max", "1.6",
                                 "--step", "0.01"}).out);
  bool saw_three = false;
  for (std::size_t i = 1; i < k3.size(); ++i) {
    const double beta = std::stod(k3[i][0]);
    if (beta < 1.4957) CHECK(k3[i][1] == "1");
    if (beta > 1.4958) CHECK(k3[i][1] == "3");
    saw_three = saw_three || k3[i][1] == "3";
  }
  CHECK(saw_three);

  const auto afm = parse_csv(run({"phase-diagram", "--k", "2", "--J", "1", "--beta-min", "0.1", "--beta-max", "5",
                                  "--step", "0.1"}).out);
  REQUIRE(afm.size() == 51);
  for (std::size_t i = 1; i < afm.size(); ++i) {
    CHECK(afm[i][1] == "1");
    CHECK(afm[i][5] == "0");
  }
}

TEST_CASE("solve-periodic") {
  const auto r = run({"solve-periodic", "--k", "200", "--m", "2", "--theta", "1.07", "--subgroup", "full"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["solutions"].size() == 3);
  CHECK(j["I_nonempty"] == false);
  CHECK(j["condition_414"]["holds"] == true);

  const json proper = json::parse(run({"solve-periodic", "--k", "2", "--J", "1", "--beta", "1", "--subgroup", "1"}).out);
  CHECK(proper["I_nonempty"] == true);
  CHECK(proper["solutions"].size() == 1);
  CHECK(run({"solve-periodic", "--k", "2", "--J", "1", "--beta", "1", "--subgroup", "1,2,3"}).code == cli::kOk);
  CHECK(run({"solve-periodic", "--k", "2", "--J", "1", "--beta", "1", "--subgroup", "7"}).code == cli::kUsage);
}

TEST_CASE("build-nonti") {
  const auto r = run({"build-nonti", "--k", "2", "--m", "2", "--J", "-1", "--beta", "2", "--t", "0", "--s", "0", "--depth", "6"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  const double hp = std::log(j["labels"]["z_plus"].get<double>());
  for (const auto& e : j["entries"]) CHECK(e["h"][1].get<double>() == doctest::Approx(hp).epsilon(1e-12));
  CHECK(j["entries"].size() == 189);
}

TEST_CASE("verify") {
  const std::vector<std::string> base{"verify", "--k", "2", "--m", "2", "--J", "-1", "--beta", "2", "--depth", "2"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  for (const char* src : {"ti", "nonti"}) {
    const auto r = with({"--source", src, "--t", "0.2", "--s", "1.3"});
    CHECK(r.code == cli::kOk);
    CHECK(json::parse(r.out)["pass"] == true);
  }
  const auto bad = with({"--source", "ti", "--perturb", "0.1"});
  CHECK(bad.code == cli::kVerificationFailed);
  const json report = json::parse(bad.out);
  CHECK(report["pass"] == false);
  bool compat_failed = false;
  for (const auto& c : report["checks"])
    if (c["name"] == "compatibility_residual") compat_failed = c["pass"] == false;
  CHECK(compat_failed);

  CHECK(run({"verify", "--k", "2", "--m", "2", "--theta", "1", "--source", "uniform", "--depth", "2"}).code == cli::kOk);
  CHECK(run({"verify", "--k", "2", "--m", "2", "--theta", "0.5", "--source", "uniform", "--depth", "2"}).code ==
        cli::kVerificationFailed);
  CHECK(run({"verify", "--k", "2", "--m", "2", "--theta", "5", "--source", "period2", "--depth", "2"}).code == cli::kOk);
  CHECK(run({"verify", "--k", "2", "--m", "2", "--theta", "5", "--source", "bogus"}).code == cli::kUsage);
}

TEST_CASE("sample output is byte-identical across reruns and from the manifest") {
  const fs::path dir = scratch_dir();
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::vector<std::string> args{"sample", "--k", "2", "--m", "2", "--J", "-1", "--beta", "2", "--source", "ti",
                                      "--depth", "3", "--count", "2000", "--seed", "42", "--out", a};
  REQUIRE(run(args).code == cli::kOk);
  const std::string first = slurp(a);
  CHECK(first.rfind("e,1,2,3,", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 2001);
  CHECK(first.find('\r') == std::string::npos);

  const json manifest = json::parse(slurp(a + ".manifest.json"));
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["command"] == "sample");
  auto rerun = manifest["argv"].get<std::vector<std::string>>();
  std::replace(rerun.begin(), rerun.end(), a, b);
  REQUIRE(run(rerun).code == cli::kOk);
  CHECK(slurp(b) == first);

  const auto other = run({"sample", "--k", "2", "--J", "-1", "--beta", "2", "--source", "ti", "--depth", "3", "--count",
                          "2000", "--seed", "43"});
  CHECK(other.out != first);
}

TEST_CASE("config file supplies defaults") {
  const fs::path cfg = scratch_dir() / "run.ini";
  {
    std::ofstream f(cfg);
    f << "[solve-ti]\nk = 2\nm = 2\nJ = -1\nbeta = 2\n";
  }
  const auto r = run({"solve-ti", "--config", cfg.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(json::parse(r.out)["symmetric_roots"].size() == 3);
  const auto over = run({"solve-ti", "--config", cfg.string(), "--beta", "0.5"});
  CHECK(json::parse(over.out)["symmetric_roots"].size() == 1);
}
