#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the packaged binary through the shell, merging stderr into the
// captured output.
RunResult run(const std::string& args) {
  const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ltad-cli-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }

  std::string write(const std::string& name, const std::string& content) const {
    const std::filesystem::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

std::string outlier_column_csv() { return "x\n0\n1\n2\n10\n"; }

std::string wide_csv(int n) {
  std::string text = "a,b\n";
  for (int i = 0; i < n; ++i)
    text += std::to_string(i % 7) + "." + std::to_string(i % 10) + "," +
            std::to_string((i * 3) % 11) + "\n";
  return text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("estimate with an absolute coverage count") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());
  const RunResult r = run("estimate --input " + file + " --h 3");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["method"] == "lp");
  CHECK(out["h"] == 3);
  CHECK(out["selection"] == json::array({1, 2, 3}));  // reported 1-based
  CHECK(out["m"].size() == 1);
  CHECK(out["m"][0].get<double>() == doctest::Approx(1.0));
  CHECK(out["objective"].get<double>() == doctest::Approx(2.0));
  CHECK(out["converged"].get<bool>());
  CHECK(out.contains("m_refit"));
  CHECK(out.contains("m_shift"));
  CHECK(out.contains("integrality_gap"));
}

TEST_CASE("fractional coverage resolves against the row count") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());

  const RunResult half = run("estimate --input " + file + " --h 0.5");
  REQUIRE(half.code == 0);
  const json hj = json::parse(half.out);
  CHECK(hj["h"] == 2);
  CHECK(hj["selection"].size() == 2);
  CHECK(hj["objective"].get<double>() <= 1.0 + 1e-9);

  const RunResult full = run("estimate --input " + file + " --h 1.0");
  REQUIRE(full.code == 0);
  const json fj = json::parse(full.out);
  CHECK(fj["h"] == 4);
  CHECK(fj["m"][0].get<double>() == doctest::Approx(1.5));  // median of all four rows
  CHECK(fj["selection"] == json::array({1, 2, 3, 4}));
}

TEST_CASE("oracle and heuristic methods agree on the easy instance") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());

  const RunResult oracle = run("estimate --input " + file + " --h 3 --method oracle");
  REQUIRE(oracle.code == 0);
  const json oj = json::parse(oracle.out);
  CHECK(oj["m"][0].get<double>() == doctest::Approx(1.0));
  CHECK(oj["objective"].get<double>() == doctest::Approx(2.0));

  const RunResult heur = run("estimate --input " + file + " --h 3 --method heuristic --seed 9");
  REQUIRE(heur.code == 0);
  const json hj = json::parse(heur.out);
  CHECK(hj["objective"].get<double>() == doctest::Approx(2.0));
  CHECK(hj["selection"] == json::array({1, 2, 3}));
}

TEST_CASE("output is byte-identical across runs") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", wide_csv(24));
  const std::string cmd = "estimate --input " + file + " --h 0.5 --method lp";
  const RunResult a = run(cmd);
  const RunResult b = run(cmd);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("csv output format carries the same answer") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());
  const RunResult r = run("estimate --input " + file + " --h 3 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("method,h,objective,converged,integrality_gap,iterations,selection,m_1",
                    0) == 0);
  CHECK(r.out.find("lp,3,2,") != std::string::npos);
  CHECK(r.out.find("1;2;3") != std::string::npos);
}

TEST_CASE("config overrides reach the driver") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());
  const RunResult r =
      run("estimate --input " + file + " --h 3 --set refit_median=false");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["m"] == out["m_shift"]);

  const RunResult bad = run("estimate --input " + file + " --h 3 --set warp_factor=9");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("unknown config key") != std::string::npos);
}

TEST_CASE("bad inputs exit with code 2") {
  TempDir tmp;
  const std::string file = tmp.write("data.csv", outlier_column_csv());

  const RunResult missing = run("estimate --input " + (tmp.path / "absent.csv").string());
  CHECK(missing.code == 2);
  CHECK(missing.out.find("error: cannot read") != std::string::npos);

  const RunResult zero = run("estimate --input " + file + " --h 0");
  CHECK(zero.code == 2);
  CHECK(zero.out.find("invalid coverage") != std::string::npos);

  const RunResult over = run("estimate --input " + file + " --h 9");
  CHECK(over.code == 2);

  const RunResult kind = run("simulate --n 10 --epsilon 0.2 --kind bogus --reps 1");
  CHECK(kind.code == 2);

  const RunResult none = run("");
  CHECK(none.code != 0);
}

TEST_CASE("oversized oracle instances exit with code 3") {
  TempDir tmp;
  const std::string file = tmp.write("wide.csv", wide_csv(40));
  const RunResult r = run("estimate --input " + file + " --h 20 --method oracle");
  CHECK(r.code == 3);
  CHECK(r.out.find("oracle size guard") != std::string::npos);
}

TEST_CASE("oracle-check reports the lp-to-exact ratio") {
  TempDir tmp;
  const std::string file = tmp.write("small.csv", wide_csv(12));
  const RunResult r = run("oracle-check --input " + file + " --h 6");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["trimmed"]["objective"].get<double>() > 0.0);
  CHECK(out["penalized"]["objective"].get<double>() >=
        out["trimmed"]["objective"].get<double>() - 1e-12);
  CHECK(out["lp"]["objective_ratio"].get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("simulate runs a small scenario end to end") {
  const RunResult r = run(
      "simulate --n 16 --p 1 --epsilon 0.25 --kind strong --h 0.5 --reps 2 --seed 3 "
      "--estimators lp-ltad,mean");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["n"] == 16);
  CHECK(out["h"] == 8);
  CHECK(out["mse"].contains("lp-ltad"));
  CHECK(out["mse"].contains("mean"));
  CHECK(out["skipped"].empty());
}

TEST_CASE("worker count env var does not change results") {
  const std::string args =
      "simulate --n 14 --p 2 --epsilon 0.2 --kind intermediate --h 0.5 --reps 3 --seed 5";
  const std::string base = std::string(CLI_BINARY_PATH) + " " + args;
  RunResult one, four;
  {
    FILE* pipe = ::popen(("TRIMMED_L1_THREADS=1 " + base + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) one.out.append(buf, got);
    one.code = WEXITSTATUS(::pclose(pipe));
  }
  {
    FILE* pipe = ::popen(("TRIMMED_L1_THREADS=4 " + base + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) four.out.append(buf, got);
    four.code = WEXITSTATUS(::pclose(pipe));
  }
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("tables command fails loudly on an unwritable directory") {
  const RunResult r = run("tables --out-dir /dev/null/tables --seed 1");
  CHECK(r.code == 2);
  CHECK(r.out.find("/dev/null/tables") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const RunResult r = run("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("estimate") != std::string::npos);
  CHECK(r.out.find("tables") != std::string::npos);
}

}  // TEST_SUITE
