#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;  // stdout and stderr interleaved
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HSL_CLI + "\" " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), got);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path scratch() {
  const fs::path dir = fs::path(HSL_TEST_DIR) / "cli_scratch";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

// Drops wall_ms, the one column that legitimately differs between runs.
std::string without_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, kept;
  while (std::getline(in, line)) kept += line.substr(0, line.rfind(',')) + "\n";
  return kept;
}

}  // namespace

TEST_CASE("cli generate") {
  SUBCASE("n_train = 0 writes only the header") {
    const auto cfg = write_file("empty.json", R"({"marginal": {"d": 3}, "n_train": 0})");
    const auto out = scratch() / "empty.csv";
    REQUIRE(cli("generate --config " + cfg.string() + " --out " + out.string()).code == 0);
    CHECK(slurp(out) == "x0,x1,x2,y\n");
  }
  SUBCASE("shape and determinism") {
    const auto cfg = write_file("small.json", R"({"marginal": {"d": 2}, "n_train": 5, "seed": 42})");
    const auto a = scratch() / "a.csv";
    const auto b = scratch() / "b.csv";
    REQUIRE(cli("generate --config " + cfg.string() + " --out " + a.string()).code == 0);
    REQUIRE(cli("generate --config " + cfg.string() + " --out " + b.string()).code == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(count_lines(text) == 6);
    std::istringstream rows(text);
    std::string line;
    while (std::getline(rows, line)) CHECK(std::count(line.begin(), line.end(), ',') == 2);

    const auto c = scratch() / "c.csv";
    REQUIRE(cli("generate --config " + cfg.string() + " --out " + c.string() + " --seed 43").code == 0);
    CHECK(slurp(c) != text);
  }
  SUBCASE("unwritable output is an I/O error") {
    const auto cfg = write_file("small2.json", R"({"marginal": {"d": 2}, "n_train": 5})");
    CHECK(cli("generate --config " + cfg.string() + " --out /nonexistent-dir/x.csv").code == 1);
  }
}

TEST_CASE("cli run") {
  SUBCASE("report on stdout and in --out") {
    const auto cfg = write_file("avg.json", R"({
      "marginal": {"d": 10}, "learner": {"kind": "averaging"},
      "n_train": 50000, "n_eval": 20000, "seed": 2})");
    const auto rep = scratch() / "avg_report.json";
    const auto o = cli("run --config " + cfg.string() + " --out " + rep.string());
    REQUIRE(o.code == 0);
    CHECK(o.out == slurp(rep));
    CHECK(o.out.find("\"angle\"") != std::string::npos);
  }
  SUBCASE("a misspelled key exits 2 and names the key") {
    const auto cfg = write_file("typo.json", R"({"marginal": {"d": 3}, "n_trian": 5})");
    const auto o = cli("run --config " + cfg.string());
    CHECK(o.code == 2);
    CHECK(o.out.find("n_trian") != std::string::npos);
  }
  SUBCASE("malformed JSON exits 2") {
    const auto cfg = write_file("broken.json", "{\"marginal\": ");
    CHECK(cli("run --config " + cfg.string()).code == 2);
  }
  SUBCASE("a missing config file exits 1") {
    CHECK(cli("run --config " + (scratch() / "missing.json").string()).code == 1);
  }
  SUBCASE("lp on contradictory data exits 3") {
    const auto cfg = write_file("lp.json", R"({
      "marginal": {"d": 2}, "noise": {"kind": "rcn", "nu": 0.3},
      "learner": {"kind": "lp"}, "n_train": 500, "n_eval": 100})");
    const auto o = cli("run --config " + cfg.string());
    CHECK(o.code == 3);
    CHECK(o.out.find("NoFeasibleSeparator") != std::string::npos);
  }
  SUBCASE("unknown flags exit 2") {
    CHECK(cli("run --bogus").code == 2);
  }
}

TEST_CASE("cli properties") {
  const auto ok = cli("properties --marginal gaussian --d 10 --n 200000 --seed 1");
  CHECK(ok.code == 0);
  CHECK(count_lines(ok.out) == 10);

  const auto tiny = cli("properties --n 10");
  CHECK(tiny.code == 0);
  CHECK(tiny.out.find("\"underpowered\":true") != std::string::npos);

  CHECK(cli("properties --marginal scaled_stub --n 20000").code == 4);
  CHECK(cli("properties --marginal cauchy").code == 2);
}

TEST_CASE("cli sweep") {
  const auto cfg = write_file("sweep.json", R"({
    "marginal": {"d": 3},
    "noise": {"kind": "rcn", "nu": {"sweep": [0.0, 0.2]}},
    "learners": [{"kind": "averaging"}, {"kind": "poly", "degree": 2}],
    "n_train": 1000, "n_eval": 5000, "seeds": [1, 2, 3]})");
  const auto out = scratch() / "sweep.csv";
  const auto o = cli("sweep --config " + cfg.string() + " --threads 2 --out " + out.string());
  REQUIRE(o.code == 0);
  CHECK(o.out == slurp(out));
  CHECK(count_lines(o.out) == 1 + 2 * 2 * 3);
  CHECK(without_last_column(o.out) == without_last_column(cli("sweep --config " + cfg.string() + " --threads 1").out));

  const auto none = write_file("nosweep.json", R"({"marginal": {"d": 3}})");
  CHECK(cli("sweep --config " + none.string()).code == 2);
  const auto two = write_file("twosweeps.json",
                              R"({"marginal": {"d": {"sweep": [2, 3]}}, "epsilon": {"sweep": [0.1, 0.2]}})");
  CHECK(cli("sweep --config " + two.string()).code == 2);
}
