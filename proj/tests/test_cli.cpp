#include <doctest.h>

#include <cstdio>
#include <numbers>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#ifndef QSYNC_CLI_PATH
#error "QSYNC_CLI_PATH must be defined by the build"
#endif

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.tmp";
  const std::string cmd = std::string(QSYNC_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> cli_stderr.tmp";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = (status >= 0) ? WEXITSTATUS(static_cast<unsigned>(status)) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  std::remove("cli_stderr.tmp");
  return r;
}

nlohmann::json parse(const CliResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("sync-check reports the known witness") {
  const CliResult r = run_cli("sync-check --n 1 --word ABA");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  CHECK(j["synchronizing"] == true);
  CHECK(j["image_diameter"].get<double>() <= 1e-12);
  CHECK(j["word"] == "ABA");
  // Common image is |e2><e2|.
  CHECK(j["common_image"][1][1][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  // Lower case accepted and upcased.
  const CliResult r2 = run_cli("sync-check --n 1 --word aba");
  CHECK(parse(r2)["word"] == "ABA");

  // Non-synchronizing word still exits zero with a null image.
  const CliResult r3 = run_cli("sync-check --n 1 --word B");
  CHECK(r3.exit_code == 0);
  CHECK(parse(r3)["synchronizing"] == false);
  CHECK(parse(r3)["common_image"].is_null());
}

TEST_CASE("search subcommand") {
  const CliResult r = run_cli("search --n 1 --max-len 5 --quiet");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  CHECK(j["found"] == true);
  CHECK(j["word"] == "ABA");
  CHECK(j["length"] == 3);

  const CliResult none = run_cli("search --n 63 --max-len 4 --quiet");
  CHECK(none.exit_code == 0);
  const auto jn = parse(none);
  CHECK(jn["found"] == false);
  CHECK(jn["word"].is_null());
  CHECK(jn["words_checked"] == 30);
}

TEST_CASE("bound subcommand and epsilon range") {
  const CliResult r = run_cli("bound --l 4 --epsilon 0.4");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  CHECK(j["n"] == 63);
  CHECK(j["epsilon_prime"].get<double>() == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(j["theta"].get<double>() == doctest::Approx(std::numbers::pi / 126.0).epsilon(1e-12));

  // epsilon >= 1/2 is a usage error.
  CHECK(run_cli("bound --l 4 --epsilon 0.6").exit_code == 2);
  CHECK(run_cli("bound --l 4 --epsilon 0.5").exit_code == 2);
}

TEST_CASE("certify subcommand") {
  const CliResult r = run_cli("certify --n 63 --l 4 --quiet");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  CHECK(j["validates"] == true);
  CHECK(j["words_checked"] == 30);
  CHECK(j["theoretical_floor"].get<double>() ==
        doctest::Approx(1.0 - 32.0 * std::numbers::pi / 126.0).epsilon(1e-12));

  // Nonpositive floor: report only, exit 1.
  const CliResult bad = run_cli("certify --n 1 --l 1 --quiet");
  CHECK(bad.exit_code == 1);
  const auto jb = parse(bad);
  CHECK(jb["floor_positive"] == false);
  CHECK(jb["validates"] == false);
}

TEST_CASE("explore subcommand formats") {
  const CliResult json1 = run_cli("explore --n 1 --depth 6 --quiet");
  CHECK(json1.exit_code == 0);
  const auto j = parse(json1);
  CHECK(j["nodes"].size() == 3);
  CHECK(j["edges"].size() == 6);

  // Byte-deterministic across consecutive runs.
  const CliResult json2 = run_cli("explore --n 1 --depth 6 --quiet");
  CHECK(json1.out == json2.out);

  const CliResult dot1 = run_cli("explore --n 1 --depth 6 --format dot --quiet");
  const CliResult dot2 = run_cli("explore --n 1 --depth 6 --format dot --quiet");
  CHECK(dot1.exit_code == 0);
  CHECK(dot1.out == dot2.out);
  CHECK(dot1.out.find("digraph") != std::string::npos);

  // dot output is explore-only.
  CHECK(run_cli("search --n 1 --max-len 3 --format dot --quiet").exit_code == 2);
}

TEST_CASE("channels subcommand") {
  const CliResult r = run_cli("channels --n 2");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  CHECK(j["A"]["factors"].size() == 2);
  CHECK(j["B"]["factors"].size() == 1);
  CHECK(j["A"]["completeness_defect"].get<double>() <= 1e-15);
  CHECK(j["B"]["label"] == "B_2");
  // B_2 rotates by pi/4.
  CHECK(j["B"]["factors"][0][0][0][0].get<double>() ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("verify subcommand aggregates five reports") {
  const CliResult r = run_cli("verify --n 8 --trials 300 --quiet");
  CHECK(r.exit_code == 0);
  const auto j = parse(r);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 5);
  for (const auto& rep : j) CHECK(rep["failures"] == 0);
  CHECK(j[0]["check_name"] == "contraction");
  CHECK(j[4]["check_name"] == "word_decomposition_random");

  // Identical invocations give identical bytes.
  const CliResult r2 = run_cli("verify --n 8 --trials 300 --quiet");
  CHECK(r.out == r2.out);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("sync-check --n 1 --word ABA --bogus-flag").exit_code == 2);
  CHECK(run_cli("sync-check --word ABA").exit_code == 2);       // missing --n
  CHECK(run_cli("sync-check --n 1 --word ABC").exit_code == 2); // bad letter
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("search --n 1 --max-len 30 --quiet").exit_code == 2);
  CHECK(run_cli("explore --n 0 --depth 3 --quiet").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("output flag writes the file") {
  const std::string path = "cli_out_test.json";
  const CliResult r = run_cli("bound --l 1 --epsilon 0.4 --output " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["n"] == 16);
  std::remove(path.c_str());
}
