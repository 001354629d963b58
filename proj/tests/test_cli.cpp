#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "condmpc/bench.hpp"
#include "condmpc/heat3d.hpp"
#include "condmpc/problem_io.hpp"

using namespace condmpc;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "condmpc-cli-tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path scratch_file(const std::string& stem) {
  static int counter = 0;
  return scratch_dir() / (stem + "-" + std::to_string(counter++));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out_path = scratch_file("stdout");
  const fs::path err_path = scratch_file("stderr");
  const std::string cmd = std::string(CONDMPC_CLI_PATH) + " " + args + " > '" +
                          out_path.string() + "' 2> '" + err_path.string() + "'";
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

fs::path write_heat_file(Index N, Index T) {
  heat3d::HeatParams params;
  params.N = N;
  params.T = T;
  const fs::path path = scratch_file("heat.prob");
  write_problem_file(path.string(), heat3d::build_heat_problem(params));
  return path;
}

}  // namespace

TEST_CASE("gen emits a problem file on stdout") {
  const RunResult run = run_cli("gen --N 1 --T 2");
  CHECK(run.code == 0);
  CHECK(run.out.rfind("condmpc-problem v1", 0) == 0);
  CHECK(run.err.empty());
}

TEST_CASE("gen then solve round-trips through the file format") {
  const fs::path prob = scratch_file("gen.prob");
  const RunResult gen = run_cli("gen --N 2 --T 5 --dump '" + prob.string() + "'");
  REQUIRE(gen.code == 0);
  REQUIRE(fs::exists(prob));

  const RunResult solve = run_cli("solve '" + prob.string() + "'");
  CHECK(solve.code == 0);
  CHECK(solve.out.find("status      converged") != std::string::npos);
  CHECK(solve.out.find("iterations") != std::string::npos);
  CHECK(solve.out.find("objective") != std::string::npos);
  CHECK(solve.err.empty());
}

TEST_CASE("iteration logging prints one six-column line per step") {
  const fs::path prob = write_heat_file(1, 4);
  const RunResult run = run_cli("solve --log-iters '" + prob.string() + "'");
  REQUIRE(run.code == 0);

  int logged = 0;
  for (const std::string& line : lines_of(run.out)) {
    if (line.rfind("status", 0) == 0) break;  // summary block reached
    const auto tokens = tokens_of(line);
    REQUIRE(tokens.size() == 6);
    CHECK(tokens[0] == std::to_string(++logged));
  }
  CHECK(logged >= 1);
}

TEST_CASE("solve --csv appends a record with the pinned header") {
  const fs::path prob = write_heat_file(2, 5);
  const RunResult run = run_cli("solve --csv '" + prob.string() + "'");
  REQUIRE(run.code == 0);
  const auto lines = lines_of(run.out);
  std::size_t header = 0;
  while (header < lines.size() && lines[header] != std::string(bench::kCsvHeader)) ++header;
  REQUIRE(header + 1 < lines.size());
  const std::string& row = lines[header + 1];
  CHECK(row.rfind(prob.string() + ",0,5,8,6,", 0) == 0);
  CHECK(row.find("converged") != std::string::npos);
}

TEST_CASE("solve --dump writes the reduced dense QP") {
  const fs::path prob = write_heat_file(1, 3);
  const fs::path qp = scratch_file("dump.qp");
  const RunResult run = run_cli("solve --dump '" + qp.string() + "' '" + prob.string() + "'");
  REQUIRE(run.code == 0);
  CHECK(slurp(qp).rfind("condmpc-dense-qp v1", 0) == 0);
}

TEST_CASE("a missing input file is an input error") {
  const RunResult run = run_cli("solve /nonexistent/never.prob");
  CHECK(run.code == 4);
  CHECK(run.err.find("error:") != std::string::npos);
  CHECK(run.err.find("never.prob") != std::string::npos);
}

TEST_CASE("an invalid problem is rejected with the offending field named") {
  heat3d::HeatParams params;
  params.N = 1;
  params.T = 2;
  LqProblemData data = heat3d::build_heat_problem(params);
  data.R(0, 1) += 0.3;  // break symmetry
  const fs::path prob = scratch_file("bad.prob");
  write_problem_file(prob.string(), data);

  const RunResult run = run_cli("solve '" + prob.string() + "'");
  CHECK(run.code == 4);
  CHECK(run.err.find("invalid problem") != std::string::npos);
  CHECK(run.err.find("R not symmetric") != std::string::npos);
}

TEST_CASE("an exhausted iteration budget maps to its own exit code") {
  const fs::path prob = write_heat_file(1, 4);
  const RunResult run = run_cli("solve --max-iter 1 '" + prob.string() + "'");
  CHECK(run.code == 2);
  CHECK(run.out.find("status      max_iter") != std::string::npos);
}

TEST_CASE("an unknown backend is an input error") {
  const fs::path prob = write_heat_file(1, 3);
  const RunResult run = run_cli("solve --backend cuda '" + prob.string() + "'");
  CHECK(run.code == 4);
  CHECK(run.err.find("unknown factorization backend") != std::string::npos);
}

TEST_CASE("bench prints the CSV grid and a commented summary") {
  const RunResult run = run_cli("bench --N 1 --T 4,8 --reps 1");
  REQUIRE(run.code == 0);
  const auto lines = lines_of(run.out);
  REQUIRE(!lines.empty());
  CHECK(lines[0] == std::string(bench::kCsvHeader));
  CHECK(run.out.find("heat3d,1,4,1,6,") != std::string::npos);
  CHECK(run.out.find("heat3d,1,8,1,6,") != std::string::npos);
  CHECK(run.out.find("# slope log total_s / log T at N=1") != std::string::npos);
}

TEST_CASE("verify runs a small ensemble end to end") {
  const RunResult run = run_cli("verify --count 3 --seed 5");
  CHECK(run.code == 0);
  CHECK(run.out.find("3/3 instances passed") != std::string::npos);
}

TEST_CASE("a missing subcommand is an input error") {
  const RunResult run = run_cli("");
  CHECK(run.code == 4);
}

TEST_CASE("an unknown flag is an input error") {
  const RunResult run = run_cli("solve --what metal.prob");
  CHECK(run.code == 4);
}
