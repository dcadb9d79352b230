#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tribuild/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("tribuild_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string(TRIBUILD_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write_text(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenSinger) {
  auto r = run("gen-singer 8");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "q 8 modulus 73\n0 1 3 7 15 31 36 54 63\n");
  r = run("gen-singer 2 --raw");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "q 2 modulus 7\n0 1 3\n");
  EXPECT_EQ(run("gen-singer 6").code, 2);
  EXPECT_EQ(run("gen-singer 11").code, 3);
  EXPECT_EQ(run("gen-singer").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(Cli, GenSingerMatrixFileParses) {
  const auto path = scratch() / "classical5.txt";
  ASSERT_EQ(run("gen-singer 5 --matrix " + path.string()).code, 0);
  const auto M = tribuild::io::parse_matrix(read_text(path));
  EXPECT_EQ(M.q(), 5);
  EXPECT_EQ(M.column(2).entries(), (std::vector<int>{0, 1, 3, 8, 12, 18}));
}

TEST(Cli, VerifyDs) {
  auto r = run("verify-ds 3 0 1 3 9");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("perfect difference set mod 13"), std::string::npos);
  EXPECT_NE(r.out.find("stabilizer in AGL(1,13): 3"), std::string::npos);
  EXPECT_NE(r.out.find("desarguesian: yes"), std::string::npos);
  EXPECT_EQ(run("verify-ds 2 0 1 2").code, 2);
  EXPECT_EQ(run("verify-ds 2 0 1 9").code, 2);
}

TEST(Cli, BuildPlane) {
  const auto m = write_text("m2.txt", "q 2\ncolumn 0 1 3\ncolumn 1 3 0\ncolumn 3 0 1\n");
  const auto out = scratch() / "plane.txt";
  ASSERT_EQ(run("build-plane " + m + " --column 1 -o " + out.string()).code, 0);
  std::ifstream in(out);
  const auto P = tribuild::io::parse_plane(in);
  EXPECT_EQ(P.num_points(), 7);
  EXPECT_EQ(P.label(0, 1), 0);
  EXPECT_EQ(run("build-plane " + m + " --column 3").code, 2);
  EXPECT_EQ(run("build-plane " + (scratch() / "missing.txt").string()).code, 2);
}

TEST(Cli, BadMatrixFileReportsLine) {
  const auto m = write_text("bad.txt", "q 2\ncolumn 0 1 3\ncolumn 0 1 2\ncolumn 0 1 3\n");
  const std::string cmd = std::string(TRIBUILD_CLI) + " certify " + m + " 2>&1";
  std::string text;
  if (FILE* f = popen(cmd.c_str(), "r")) {
    char buf[512];
    while (fgets(buf, sizeof buf, f)) text += buf;
    EXPECT_EQ(WEXITSTATUS(pclose(f)), 2);
  }
  EXPECT_NE(text.find("line 3: column: not a perfect difference set"), std::string::npos) << text;
}

TEST(Cli, Certify) {
  const auto classical = write_text("c5.txt", "q 5\ncolumn 0 1 3 8 12 18\ncolumn 0 1 3 8 12 18\ncolumn 0 1 3 8 12 18\n");
  auto r = run("certify " + classical);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict Inconclusive"), std::string::npos);
  EXPECT_EQ(run("certify --require-candidate " + classical).code, 0);

  const auto exotic = write_text("e5.txt", "q 5\ncolumn 0 1 3 8 12 18\ncolumn 1 0 3 8 12 18\ncolumn 0 1 3 8 12 18\n");
  r = run("certify " + exotic);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict CertifiedExotic"), std::string::npos);
  EXPECT_NE(r.out.find("witness G0!=G1"), std::string::npos);
  EXPECT_EQ(run("certify --require-candidate " + exotic).code, 1);
  r = run("certify --search " + exotic);
  EXPECT_NE(r.out.find("verdict CertifiedExotic"), std::string::npos);

  const auto q4 = write_text("c4.txt", "q 4\ncolumn 0 1 4 14 16\ncolumn 1 0 4 14 16\ncolumn 16 14 4 1 0\n");
  r = run("certify " + q4);
  EXPECT_NE(r.out.find("verdict Inconclusive"), std::string::npos);
}

TEST(Cli, ClassifyWritesCensus) {
  const auto dir = scratch() / "census";
  auto r = run("classify 3 --extra-moves --threads 2 --out-dir " + dir.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("coarse: 576 matrices, 24 classes, 0 certified exotic, 24 inconclusive (bound 64)"),
            std::string::npos);
  EXPECT_NE(r.out.find("extended: 576 matrices, 7 classes"), std::string::npos);
  std::ifstream census(dir / "census_q3.jsonl");
  EXPECT_EQ(tribuild::io::parse_census(census).size(), 24u);
  std::ifstream ext(dir / "census_q3_extended.jsonl");
  EXPECT_EQ(tribuild::io::parse_census(ext).size(), 7u);
  std::ifstream summary(dir / "summary_q3.tsv");
  EXPECT_EQ(tribuild::io::parse_summary(summary).at(0).classes, 24u);
  EXPECT_EQ(run("classify 7").code, 3);
  EXPECT_EQ(run("classify 6").code, 2);
  EXPECT_EQ(run("classify 3 --threads 0").code, 2);
}

TEST(Cli, Bounds) {
  const auto r = run("bounds 2 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "q\tB\tA\tB/A\n2\t4\t2/9\t1.800000e+01\n5\t1600\t3200\t5.000000e-01\n");
  EXPECT_EQ(run("bounds 6").code, 2);
}

TEST(Cli, Ball) {
  const auto m = write_text("b2.txt", "q 2\ncolumn 0 1 3\ncolumn 1 3 0\ncolumn 3 0 1\n");
  const auto out = scratch() / "ball.txt";
  auto r = run("ball " + m + " -r 2 --hjelmslev -o " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ball q 2 radius 2: 113 vertices, 343 edges, 231 chambers"), std::string::npos);
  EXPECT_NE(r.out.find("verify ok"), std::string::npos);
  EXPECT_NE(r.out.find("hjelmslev level 2: 28 points, 28 lines, 168 flags"), std::string::npos);
  std::ifstream in(out);
  EXPECT_EQ(tribuild::io::parse_ball(in).chambers.size(), 231u);
  const auto m4 = write_text("b4.txt", "q 4\ncolumn 0 1 4 14 16\ncolumn 0 1 4 14 16\ncolumn 0 1 4 14 16\n");
  EXPECT_EQ(run("ball " + m4 + " -r 2").code, 3);
  EXPECT_EQ(run("ball " + m4 + " -r 1").code, 0);
}
