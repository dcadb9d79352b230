#include <gtest/gtest.h>

#include <sstream>

#include "tribuild/io.hpp"

using namespace tribuild;

namespace {

DifferenceMatrix sample_matrix() {
  return NormalizedMatrix{canonical_desarguesian_set(3), Permutation::from_images({2, 0, 3, 1}),
                          Permutation::from_images({1, 0, 3, 2})}
      .decode();
}

int error_line(const std::string& text) {
  try {
    io::parse_matrix(text);
  } catch (const io::ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
  const auto M = sample_matrix();
  const std::string text = io::matrix_to_string(M);
  EXPECT_EQ(text, "q 3\nmodulus 13\ncolumn 0 1 3 9\ncolumn 3 0 9 1\ncolumn 1 0 9 3\n");
  EXPECT_EQ(io::parse_matrix(text), M);
}

TEST(Io, MatrixCommentsAndOptionalModulus) {
  const auto M = io::parse_matrix("# a comment\n\nq 2   # order\ncolumn 0 1 3\ncolumn 1 2 4\ncolumn 3 0 1\n");
  EXPECT_EQ(M.q(), 2);
  EXPECT_EQ(M.column(1).entries(), (std::vector<int>{1, 2, 4}));
}

TEST(Io, MatrixDiagnostics) {
  EXPECT_EQ(error_line("q 2\nmodulus 8\ncolumn 0 1 3\ncolumn 0 1 3\ncolumn 0 1 3\n"), 2);
  EXPECT_EQ(error_line("q 2\ncolumn 0 1 3\ncolumn 0 1 2\ncolumn 0 1 3\n"), 3);
  EXPECT_EQ(error_line("q 2\ncolumn 0 1 3\ncolumn 0 1 3\ncolumn 0 1 x\n"), 4);
  EXPECT_EQ(error_line("q 2\ncolumn 0 1 3\ncolumn 0 1 3 5\ncolumn 0 1 3\n"), 3);
  EXPECT_EQ(error_line("q 2\ncolumn 0 1 9\ncolumn 0 1 3\ncolumn 0 1 3\n"), 2);
  EXPECT_EQ(error_line("q 2\nrows 3\n"), 2);
  EXPECT_EQ(error_line("q 2\nq 3\n"), 2);
  EXPECT_EQ(error_line("column 0 1 3\n"), 0);
  EXPECT_EQ(error_line("q 2\ncolumn 0 1 3\n"), 0);
  try {
    io::parse_matrix("q 2\ncolumn 0 1 3\ncolumn 0 1 2\ncolumn 0 1 3\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()), "line 3: column: not a perfect difference set");
  }
}

TEST(Io, PlaneRoundTrip) {
  const auto P = plane_from_vector(sample_matrix().column(1));
  const std::string text = io::to_text(P, [](std::ostream& os, const LabelledPlane& x) { io::write_plane(os, x); });
  EXPECT_EQ(text.substr(0, text.find('\n')), "plane q 3 points 13 lines 13");
  // line 0 holds the points 3, 0, 9, 1 with labels 1..4
  EXPECT_NE(text.find("L 0: (0,2) (1,4) (3,1) (9,3)\n"), std::string::npos);
  std::istringstream in(text);
  const auto Q = io::parse_plane(in);
  for (int l = 0; l < P.num_lines(); ++l)
    for (int p = 0; p < P.num_points(); ++p) {
      ASSERT_EQ(Q.incident(l, p), P.incident(l, p));
      if (P.incident(l, p)) { EXPECT_EQ(Q.label(l, p), P.label(l, p)); }
    }
  std::istringstream bad("plane q 2 points 7 lines 1\nL 0: (0,1) (1,2) (3;3)\n");
  EXPECT_THROW(io::parse_plane(bad), io::ParseError);
}

TEST(Io, GroupRoundTrip) {
  const auto G = pgl2_model(4);
  std::stringstream ss;
  io::write_group(ss, G);
  EXPECT_EQ(io::parse_group(ss), G);
  std::istringstream bad("group degree 3 order 2\n[0 1 2]\n[0 0 2]\n");
  try {
    io::parse_group(bad);
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream short_list("group degree 3 order 2\n[0 1 2]\n");
  EXPECT_THROW(io::parse_group(short_list), io::ParseError);
}

TEST(Io, CensusRoundTrip) {
  const auto c = classify(2);
  std::stringstream ss;
  io::write_census(ss, c);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"alpha1":[0,1,2],"alpha2":[0,1,2],"orbit_size":)" + std::to_string(c.classes[0].orbit_size) +
                R"(,"verdict":"Inconclusive","witness":""})");
  const auto recs = io::parse_census(ss);
  ASSERT_EQ(recs.size(), c.classes.size());
  for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i], io::to_record(c.classes[i]));
  std::istringstream bad("{\"alpha1\":[0,1,2]}\n");
  EXPECT_THROW(io::parse_census(bad), io::ParseError);
}

TEST(Io, SummaryRoundTrip) {
  const auto s = io::summarize(classify(3));
  EXPECT_EQ(s.total, 576u);
  EXPECT_EQ(s.bound_B, 64u);
  std::stringstream ss;
  io::write_summary(ss, {s});
  EXPECT_EQ(ss.str(), std::string(io::kSummaryHeader) + "\n3\t576\t24\t0\t24\t64\n");
  const auto rows = io::parse_summary(ss);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], s);
}

TEST(Io, BallRoundTrip) {
  const auto B = build_ball(sample_matrix(), 1);
  std::stringstream ss;
  io::write_ball(ss, B);
  auto C = io::parse_ball(ss);
  EXPECT_EQ(C.vertices, B.vertices);
  EXPECT_EQ(C.edges, B.edges);
  EXPECT_EQ(C.chambers, B.chambers);
  EXPECT_TRUE(verify_ball(C).ok());
  std::istringstream bad("ball q 2 radius 1 center 0\nvertex 0 0 0\nchamber 0 0 5 1\n");
  try {
    io::parse_ball(bad);
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}
