// Drives the built binary end to end through a shell. DMF_CLI_BIN is injected
// by the build.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "dmf/data.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args, bool raw_command = false) {
  const std::string cmd =
      (raw_command ? args : std::string(DMF_CLI_BIN) + " " + args) + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

struct Workspace {
  fs::path dir;
  Workspace() : dir(fs::temp_directory_path() / "dmf_cli_test") {
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path file(const std::string& name) const { return dir / name; }
};

}  // namespace

TEST_CASE("cli end to end") {
  Workspace ws;

  // rank-5 synthetic, saved in the canonical matrix format
  const auto syn = testsupport::make_low_rank(40, 5, 2024);
  const fs::path matrix = ws.file("syn.txt");
  dmf::save_matrix(syn.truth, matrix);

  SUBCASE("run emits at least one snapshot row and is reproducible") {
    const std::string flags = "run --dataset " + matrix.string() +
                              " --mode active --rank 5 --lambda 1 --loss l1 "
                              "--nonneg --k 8 --seed 7 --rounds 30";
    const auto out1 = run_cli(flags + " --out " + ws.file("a.csv").string());
    CHECK(out1.exit_code == 0);
    const std::string csv = slurp(ws.file("a.csv"));
    CHECK(csv.rfind("measurements_per_node,stress,mae,ree_p50,ree_p90\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);

    const auto out2 = run_cli(flags + " --out " + ws.file("b.csv").string());
    CHECK(out2.exit_code == 0);
    CHECK(slurp(ws.file("b.csv")) == csv);

    // stdout emission matches the file path output
    const auto out3 = run_cli(flags);
    CHECK(out3.exit_code == 0);
    CHECK(out3.output == csv);

    // the input dataset is never touched
    CHECK(slurp(matrix) == dmf::matrix_to_string(syn.truth));
  }

  SUBCASE("invalid flags exit with code 2 and write nothing") {
    const fs::path out = ws.file("never.csv");
    const auto r = run_cli("run --dataset " + matrix.string() +
                           " --rank 0 --out " + out.string());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli("run --rank 3").exit_code == 2);            // missing dataset
    CHECK(run_cli("run --dataset " + matrix.string() + " --loss l3").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
  }

  SUBCASE("dataset errors exit with code 1") {
    const fs::path bad = ws.file("bad.txt");
    std::ofstream(bad) << "2\n0 x\n0 0\n";
    CHECK(run_cli("run --dataset " + bad.string()).exit_code == 1);
    CHECK(run_cli("analyze --dataset " + bad.string()).exit_code == 1);
  }

  SUBCASE("analyze reports the triangle's tiv ratio") {
    const fs::path tri = ws.file("tri.txt");
    std::ofstream(tri, std::ios::binary) << "3\n-1 5 2\n5 -1 2\n2 2 -1\n";
    const auto r = run_cli("analyze --dataset " + tri.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output == "n,3\ndensity,1\ntiv_ratio,0.333333\n");
  }

  SUBCASE("svd-profile on a rank-1 synthetic") {
    // u v^T with a zero diagonal stays exactly rank 1
    dmf::PartialMatrix m(4);
    const double u[] = {1, 2, 0, 0};
    const double v[] = {0, 0, 3, 4};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) m.set(i, j, u[i] * v[j]);
      }
    }
    const fs::path path = ws.file("rank1.txt");
    dmf::save_matrix(m, path);
    const auto r = run_cli("svd-profile --dataset " + path.string() + " --count 2");
    CHECK(r.exit_code == 0);
    REQUIRE(r.output.rfind("index,sigma_normalized\n1,1\n2,", 0) == 0);
    const double second = std::stod(r.output.substr(r.output.rfind(",") + 1));
    CHECK(second < 1e-8);
  }

  SUBCASE("compare emits one column group per method") {
    const auto r = run_cli("compare --dataset " + matrix.string() +
                           " --rank 5 --k 8 --seed 3 --rounds 80 --landmark-count 8");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("measurements_per_node,dmfsgd_stress,dmfsgd_mae,"
                         "vivaldi_stress,vivaldi_mae,landmark_stress,landmark_mae\n",
                         0) == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') >= 2);

    // factorization beats the Euclidean embedding on this TIV-heavy synthetic
    const auto last_line_start = r.output.rfind('\n', r.output.size() - 2) + 1;
    std::istringstream last(r.output.substr(last_line_start));
    std::string cell;
    std::vector<double> row;
    while (std::getline(last, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 7);
    CHECK(row[1] < row[3]);  // dmfsgd_stress < vivaldi_stress
  }

  SUBCASE("landmark mode accepts explicit ids") {
    const auto r = run_cli("run --dataset " + matrix.string() +
                           " --mode landmark --landmarks 0 1 2 3 --rank 5 --k 4 "
                           "--seed 2 --rounds 20");
    CHECK(r.exit_code == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') >= 2);
  }

  SUBCASE("DMF_LOG diagnostics stay on stderr") {
    const std::string flags = "run --dataset " + matrix.string() +
                              " --rank 5 --k 8 --seed 7 --rounds 10";
    const auto quiet = run_cli(flags);
    // popen captures stdout only; stderr chatter must not leak into the CSV
    const auto noisy =
        run_cli("DMF_LOG=debug " + std::string(DMF_CLI_BIN) + " " + flags, true);
    CHECK(noisy.exit_code == 0);
    CHECK(noisy.output == quiet.output);
  }

  SUBCASE("passive mode replays a trace file") {
    const fs::path trace = ws.file("trace.csv");
    std::ofstream(trace, std::ios::binary)
        << "t_ms,src,dst,rtt_ms\n0,0,1,10\n100,1,0,10\n200,0,1,11\n300,1,0,9\n";
    const auto r = run_cli("run --dataset " + trace.string() +
                           " --mode passive --rank 2 --seed 1 --snapshot-every 2");
    CHECK(r.exit_code == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 3);  // header + 2
  }
}
