#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sigvol/digest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sigvol_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  fs::path out = scratch_dir() / "stdout.txt";
  fs::path err = scratch_dir() / "stderr.txt";
  std::string cmd = std::string(SIGVOL_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

json smile_config() {
  return json{
      {"model",
       {{"alphabet_dim", 2},
        {"rho", -0.9},
        {"s0", 1.0},
        {"horizon", 1.0},
        {"sigma_protocol", {{"order", 3}, {"leading", 1.0}, {"coeff_seed", 7}}}}},
      {"sim", {{"n_paths", 1500}, {"n_steps", 50}, {"seed", 42}}},
      {"k_grid", {{"lo", -0.2}, {"hi", 0.2}, {"n", 5}}}};
}

}  // namespace

TEST_CASE("shuffle command") {
  CHECK(run_cli("shuffle 12 3").out == "123 + 132 + 312\n");
  CHECK(run_cli("shuffle \"\" 21").out == "21\n");
  CHECK(run_cli("shuffle 2 2").out == "2·22\n");
  auto bad = run_cli("shuffle 2x 1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("radford command") {
  auto r = run_cli("radford 212");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("21 ⧢ 2 − 2·221") != std::string::npos);

  auto r2 = run_cli("radford 2");
  CHECK(r2.out.find("2") != std::string::npos);

  auto r3 = run_cli("radford 12 --avoid-letter 2");
  CHECK(r3.out.find("1 ⧢ 2 − 21") != std::string::npos);

  auto r4 = run_cli("radford 122");
  CHECK(r4.out.find("1/2·1 ⧢ 2^⧢2 − 21 ⧢ 2 + 221") != std::string::npos);
}

TEST_CASE("lyndon command") {
  CHECK(run_cli("lyndon 2 3").out == "2 1 21 221 211\n");
  CHECK(run_cli("lyndon 3 2").out == "3 2 1 32 31 21\n");
}

TEST_CASE("sig command") {
  // Single time-augmented segment: tensor-exponential entries.
  fs::path csv = scratch_dir() / "segment.csv";
  write_file(csv, "t,x1,x2\n0,0,0\n1,1,0.5\n");
  auto r = run_cli("sig --path " + csv.string() + " --level 3");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["level"] == 3);
  bool seen = false;
  for (const auto& e : j["entries"])
    if (e["word"] == "222") {
      seen = true;
      CHECK(e["value"].get<double>() == doctest::Approx(0.5 * 0.5 * 0.5 / 6).epsilon(1e-12));
    }
  CHECK(seen);

  // 1-d staircase: word 22 carries (total increment)^2 / 2.
  fs::path stairs = scratch_dir() / "stairs.csv";
  write_file(stairs, "t,x1,x2\n0,0,0\n0.25,0.25,1\n0.5,0.5,1\n0.75,0.75,2\n1,1,2\n");
  auto r2 = run_cli("sig --path " + stairs.string() + " --level 2");
  REQUIRE(r2.exit_code == 0);
  json j2 = json::parse(r2.out);
  for (const auto& e : j2["entries"])
    if (e["word"] == "22") CHECK(e["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));

  // Random-walk path at level 3 against the quadrature oracle.
  std::mt19937 gen(2024);
  sigvol::PathSample path = sigvol::oracles::random_time_augmented_path(gen, 2, 12);
  std::stringstream buf;
  path.write_csv(buf);
  fs::path walk = scratch_dir() / "walk.csv";
  write_file(walk, buf.str());
  auto r3 = run_cli("sig --path " + walk.string() + " --level 3");
  REQUIRE(r3.exit_code == 0);
  json j3 = json::parse(r3.out);
  sigvol::oracles::QuadratureSignature quad(path, 10000);
  for (const auto& e : j3["entries"]) {
    double expected = quad.entry(sigvol::Word::parse(e["word"].get<std::string>()));
    CHECK(e["value"].get<double>() == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
  }

  CHECK(run_cli("sig --path /nonexistent.csv --level 2").exit_code == 2);
}

TEST_CASE("expected-sig command") {
  auto r = run_cli("expected-sig --t 1 --bm-dim 1 --level 3");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  for (const auto& e : j["entries"]) {
    if (e["word"] == "22") CHECK(e["value"].get<double>() == doctest::Approx(0.5));
    CHECK(e["word"] != "2");  // odd moments are zero and never listed
  }
}

TEST_CASE("config schema violations exit with code 2 and a field path") {
  fs::path dir = scratch_dir();

  json bad_rho = smile_config();
  bad_rho["model"]["rho"] = 1.5;
  write_file(dir / "bad_rho.json", bad_rho.dump());
  auto r = run_cli("smile --config " + (dir / "bad_rho.json").string() + " --out " +
                   (dir / "o1").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("model.rho") != std::string::npos);

  json bad_order = smile_config();
  bad_order["model"]["sigma"] = {{"alphabet_dim", 2},
                                 {"terms", {{{"word", "22"}, {"num", 1}, {"den", 1}}}}};
  bad_order["model"].erase("sigma_protocol");
  bad_order["model"]["order"] = 4;
  write_file(dir / "bad_order.json", bad_order.dump());
  auto r2 = run_cli("smile --config " + (dir / "bad_order.json").string() + " --out " +
                    (dir / "o2").string());
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("order") != std::string::npos);

  json bad_t = smile_config();
  bad_t["model"]["horizon"] = 0.0;
  write_file(dir / "bad_t.json", bad_t.dump());
  CHECK(run_cli("smile --config " + (dir / "bad_t.json").string() + " --out " +
                (dir / "o3").string())
            .exit_code == 2);

  // Zero leading coefficient where a theorem predicate is requested.
  json no_lead = smile_config();
  no_lead["model"]["sigma"] = {{"alphabet_dim", 2},
                               {"terms", {{{"word", "21"}, {"num", 1}, {"den", 1}}}}};
  no_lead["model"].erase("sigma_protocol");
  no_lead["m"] = 2.0;
  write_file(dir / "no_lead.json", no_lead.dump());
  auto r3 = run_cli("moments --config " + (dir / "no_lead.json").string() + " --out " +
                    (dir / "o4").string());
  CHECK(r3.exit_code == 2);
  CHECK(r3.err.find("hypothesis") != std::string::npos);
}

TEST_CASE("explode with zero volatility reports no explosions") {
  fs::path dir = scratch_dir();
  json cfg{{"model",
            {{"alphabet_dim", 2},
             {"rho", 0.5},
             {"s0", 1.0},
             {"horizon", 1.0},
             {"sigma", {{"alphabet_dim", 2}, {"terms", json::array()}}}}},
           {"sim", {{"n_paths", 500}, {"n_steps", 50}, {"seed", 3}, {"x_cap", 100.0}}}};
  write_file(dir / "explode0.json", cfg.dump());
  auto r = run_cli("explode --config " + (dir / "explode0.json").string() + " --out " +
                   (dir / "ex0").string());
  REQUIRE(r.exit_code == 0);
  json out = json::parse(slurp(dir / "ex0" / "explode.json"));
  CHECK(out["explosion"]["p_hat"] == 0.0);
  CHECK(out["explosion"]["n_exploded"] == 0);
  CHECK(out["cap_sensitivity"]["within_ci_width"] == true);
}

TEST_CASE("critical command verdicts") {
  fs::path dir = scratch_dir();
  json cfg{{"critical", {{"alpha", 1.0}, {"beta", 0.0}, {"m", 2.0}, {"T", 1.0}}},
           {"mode", "analytic"}};
  write_file(dir / "crit.json", cfg.dump());
  auto r = run_cli("critical --config " + (dir / "crit.json").string() + " --out " +
                   (dir / "crit_out").string());
  REQUIRE(r.exit_code == 0);
  json out = json::parse(slurp(dir / "crit_out" / "critical.json"));
  CHECK(out["verdict"] == "finite");

  json bad = cfg;
  bad["critical"]["rho"] = -0.5;  // not the critical correlation
  write_file(dir / "crit_bad.json", bad.dump());
  auto r2 = run_cli("critical --config " + (dir / "crit_bad.json").string() + " --out " +
                    (dir / "crit_bad_out").string());
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("moment_predicate") != std::string::npos);
}

TEST_CASE("manifest round trip and worker independence") {
  fs::path dir = scratch_dir();
  write_file(dir / "smile.json", smile_config().dump());

  auto r1 = run_cli("smile --config " + (dir / "smile.json").string() + " --out " +
                    (dir / "m1").string() + " --workers 1");
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("smile --config " + (dir / "smile.json").string() + " --out " +
                    (dir / "m2").string() + " --workers 2");
  REQUIRE(r2.exit_code == 0);

  CHECK(slurp(dir / "m1" / "smile.csv") == slurp(dir / "m2" / "smile.csv"));
  CHECK(slurp(dir / "m1" / "smile.json") == slurp(dir / "m2" / "smile.json"));

  // Digests recorded in the manifest match the files on disk.
  json manifest = json::parse(slurp(dir / "m1" / "manifest.json"));
  CHECK(manifest["command"] == "smile");
  for (const auto& [file, digest] : manifest["outputs"].items())
    CHECK(sigvol::sha256_hex(slurp(dir / "m1" / file)) == digest.get<std::string>());

  // Re-running from the manifest reproduces the files byte for byte.
  auto r3 = run_cli("smile --from-manifest " + (dir / "m1" / "manifest.json").string() +
                    " --out " + (dir / "m3").string() + " --workers 2");
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp(dir / "m1" / "smile.csv") == slurp(dir / "m3" / "smile.csv"));
  CHECK(slurp(dir / "m1" / "smile.json") == slurp(dir / "m3" / "smile.json"));

  // A manifest from another command is rejected.
  auto r4 = run_cli("explode --from-manifest " + (dir / "m1" / "manifest.json").string() +
                    " --out " + (dir / "m4").string());
  CHECK(r4.exit_code == 2);

  // The seed override changes results.
  auto r5 = run_cli("smile --config " + (dir / "smile.json").string() + " --out " +
                    (dir / "m5").string() + " --seed 777");
  REQUIRE(r5.exit_code == 0);
  CHECK(slurp(dir / "m1" / "smile.csv") != slurp(dir / "m5" / "smile.csv"));
}
