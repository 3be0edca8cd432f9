#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "ontoscope/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = ONTOSCOPE_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "ontoscope_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("cli zoo writes loadable models") {
  TempDir dir;
  const auto ks = dir.file("ks.json");
  REQUIRE(run("zoo ks --n 2000 --states 2 -o " + ks) == 0);
  const auto model = ontoscope::load_model(ks);
  CHECK(model.space()->size() == 2000);
  CHECK(model.preparations().size() == 14);  // 10 named + 2 random + 2 mixed

  const auto witness = dir.file("witness.json");
  REQUIRE(run("zoo witness -o " + witness) == 0);
  CHECK(ontoscope::load_model(witness).space()->size() == 6);

  const auto bb = dir.file("bb.json");
  REQUIRE(run("zoo bb --n 2000 --states 3 -o " + bb) == 0);
  // the snap count equals the request when nothing collides
  CHECK(ontoscope::load_model(bb).preparations().size() == 3);

  CHECK(run("zoo nosuch -o " + dir.file("x.json")) == 2);
}

TEST_CASE("cli classify reports the expected table") {
  TempDir dir;
  const auto ks = dir.file("ks.json");
  REQUIRE(run("zoo ks --n 4000 --states 8 --seed 42 -o " + ks) == 0);
  const auto report_path = dir.file("report.json");
  REQUIRE(run("classify " + ks + " --pairs 60 -o " + report_path) == 0);
  const auto j = read_json(report_path);
  CHECK(j["ontic_or_epistemic"] == "psi-epistemic");
  CHECK(j["max_psi_epistemic_1"]["verdict"] == "yes");
  CHECK(j["max_psi_epistemic_2"]["verdict"] == "yes");
  CHECK(j["determinism"]["deterministic"] == true);
  CHECK(j["pure_pnc"]["noncontextual"] == true);
  CHECK(j["mixed_pnc"]["noncontextual"] == false);

  const auto bb = dir.file("bb.json");
  REQUIRE(run("zoo bb --n 4000 --states 8 --seed 42 -o " + bb) == 0);
  const auto bb_report = dir.file("bb_report.json");
  REQUIRE(run("classify " + bb + " --pairs 60 -o " + bb_report) == 0);
  const auto jb = read_json(bb_report);
  CHECK(jb["ontic_or_epistemic"] == "psi-ontic");
  CHECK(jb["max_psi_epistemic_1"]["verdict"] == "no");
  CHECK(jb["max_psi_epistemic_2"]["verdict"] == "no");
  CHECK(jb["determinism"]["deterministic"] == false);
}

TEST_CASE("cli classify rejects corrupted documents") {
  TempDir dir;
  const auto bad = dir.file("bad.json");
  std::ofstream(bad) << "{\"schema_version\": \"1\", \"space\": 3}";
  CHECK(run("classify " + bad) == 2);
  CHECK(run("classify " + dir.file("missing.json")) == 2);
}

TEST_CASE("cli theorem subcommands") {
  TempDir dir;

  SECTION("theorem 1 on a freshly built model") {
    const auto out = dir.file("t1.json");
    REQUIRE(run("theorem 1 --chi 0 --eta + --n 4000 -o " + out) == 0);
    const auto j = read_json(out);
    CHECK(j["conclusion"] == true);
    CHECK(std::abs(j["support_sum"].get<double>() - 2.0) <= 3e-2);
  }
  SECTION("theorem 1 rejects bad state tokens") {
    CHECK(run("theorem 1 --chi nope --eta +") == 2);
  }
  SECTION("theorem 2 auto-detects a twin pure preparation") {
    const auto witness = dir.file("witness.json");
    REQUIRE(run("zoo witness -o " + witness) == 0);
    const auto out = dir.file("t2.json");
    REQUIRE(run("theorem 2 --model " + witness + " -o " + out) == 0);
    const auto j = read_json(out);
    CHECK(j["implication_holds"] == true);
    CHECK(j["pair_is_max_epistemic_2"] == false);  // densities differ by design
  }
  SECTION("theorem 2 needs a model") { CHECK(run("theorem 2") == 2); }
  SECTION("a failed verdict exits with status 1") {
    const auto damaged = dir.file("truncated.json");
    REQUIRE(run("zoo truncated --n 2000 --states 0 -o " + damaged) == 0);
    CHECK(run("theorem 1 --model " + damaged + " --chi 0 --eta + -o " +
              dir.file("t1_bad.json")) == 1);
  }
  SECTION("theorem 3 certificates") {
    const auto out = dir.file("t3.json");
    REQUIRE(run("theorem 3 --mode both-nc --lp -o " + out) == 0);
    const auto j = read_json(out);
    CHECK(j["feasible"] == false);
    CHECK(j["per_pattern_sums"].size() == 8);
    CHECK(j["lp"]["agrees"] == true);

    REQUIRE(run("theorem 3 --mode pure-ctx -o " + dir.file("t3p.json")) == 0);
    REQUIRE(run("theorem 3 --mode mixed-ctx -o " + dir.file("t3m.json")) == 0);
    CHECK(run("theorem 3 --mode nonsense") == 2);
  }
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("cli overlaps emits csv") {
  TempDir dir;
  const auto ks = dir.file("ks.json");
  REQUIRE(run("zoo ks --n 4000 --states 2 -o " + ks) == 0);

  const auto csv_path = dir.file("overlaps.csv");
  REQUIRE(run("overlaps " + ks + " --pairs 5 -o " + csv_path) == 0);
  const auto rows = read_csv_rows(csv_path);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"pair", "overlap_sq", "l_q", "l_c",
                                            "f", "deficit"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 6);
    // the hemisphere model keeps the signed deficit within quadrature error
    CHECK(std::abs(std::stod(rows[r][5])) <= 2e-2 * std::sqrt(20000.0 / 4000.0));
  }

  const auto bb = dir.file("bb.json");
  REQUIRE(run("zoo bb --n 4000 --states 6 -o " + bb) == 0);
  const auto bb_csv = dir.file("bb_overlaps.csv");
  REQUIRE(run("overlaps " + bb + " --pairs 8 -o " + bb_csv) == 0);
  const auto bb_rows = read_csv_rows(bb_csv);
  for (std::size_t r = 1; r < bb_rows.size(); ++r)
    CHECK(std::stod(bb_rows[r][3]) == 0.0);  // point masses never overlap

  const auto empty_path = dir.file("empty.csv");
  REQUIRE(run("overlaps " + ks + " --pairs 0 -o " + empty_path) == 0);
  std::ifstream empty(empty_path);
  std::ostringstream content;
  content << empty.rdbuf();
  CHECK(content.str() == "pair,overlap_sq,l_q,l_c,f,deficit\n");
}

TEST_CASE("cli seed env override keeps runs reproducible") {
  TempDir dir;
  const auto ks = dir.file("ks.json");
  REQUIRE(run("zoo ks --n 2000 --states 2 -o " + ks) == 0);
  const auto a = dir.file("a.csv");
  const auto b = dir.file("b.csv");
  REQUIRE(std::system(("ONTOSCOPE_SEED=7 " + kCli + " overlaps " + ks +
                       " --pairs 5 -o " + a + " 2>/dev/null")
                          .c_str()) == 0);
  REQUIRE(std::system(("ONTOSCOPE_SEED=7 " + kCli + " overlaps " + ks +
                       " --pairs 5 -o " + b + " 2>/dev/null")
                          .c_str()) == 0);
  std::ifstream fa(a), fb(b);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find('\n') != std::string::npos);
}
