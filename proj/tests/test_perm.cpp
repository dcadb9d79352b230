#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "tribuild/perm.hpp"

using namespace tribuild;

namespace {

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::size_t element_order(const Permutation& p) {
  std::size_t k = 1;
  for (Permutation x = p; !x.is_identity(); x = x * p) ++k;
  return k;
}

// brute-force normalizer over all of Sym(n)
PermGroup normalizer_oracle(const PermGroup& G) {
  std::vector<int> img(G.degree());
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    const auto s = Permutation::from_images(img);
    if (G.conjugate_by(s) == G) out.push_back(s);
  } while (std::next_permutation(img.begin(), img.end()));
  return PermGroup::from_elements(out, G.degree());
}

}  // namespace

TEST(Perm, ProductAppliesLeftFactorFirst) {
  const auto a = Permutation::from_images({1, 2, 0});
  const auto b = Permutation::from_images({1, 0, 2});
  const auto ab = a * b;
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ab(i), b(a(i)));
  EXPECT_TRUE((a * a.inverse()).is_identity());
}

TEST(Perm, ConjugationRelabels) {
  const auto g = Permutation::from_cycles(5, {{0, 1, 2}});
  const auto s = Permutation::from_images({3, 4, 0, 1, 2});
  const auto h = g.conjugate_by(s);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(h(s(i)), s(g(i)));
  EXPECT_EQ(h, s.inverse() * g * s);
  EXPECT_EQ(g.cycle_type(), h.cycle_type());
}

TEST(Perm, TextRoundTrip) {
  const auto p = Permutation::from_images({2, 0, 3, 1});
  EXPECT_EQ(p.to_string(), "[2 0 3 1]");
  EXPECT_EQ(Permutation::parse(p.to_string()), p);
  EXPECT_THROW(Permutation::parse("[0 0 1]"), InputError);
  EXPECT_THROW(Permutation::parse("0 1"), InputError);
  EXPECT_THROW(Permutation::parse("[0 x]"), InputError);
}

TEST(Perm, ClosureExamples) {
  EXPECT_EQ(PermGroup::closure({Permutation::identity(3)}, 3).order(), 1u);
  const auto s3 = PermGroup::closure({Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}})}, 3);
  EXPECT_EQ(s3.order(), 6u);
  EXPECT_EQ(s3, symmetric_group(3));
  EXPECT_EQ(PermGroup::closure(small_generating_set(pgl2_model(4)), 5).order(), 60u);
}

TEST(Perm, ClosureCapsEnforced) {
  EXPECT_THROW(symmetric_group(13), CapExceeded);
}

TEST(Perm, ProjectiveLineModels) {
  const std::vector<std::tuple<int, std::size_t, std::size_t>> expected{
      {2, 6, 6}, {3, 24, 24}, {4, 60, 120}, {5, 120, 120}, {7, 336, 336}, {8, 504, 1512}, {9, 720, 1440}};
  for (auto [q, pgl, pgammal] : expected) {
    const auto G = pgl2_model(q), H = pgammal2_model(q);
    EXPECT_EQ(G.order(), pgl) << q;
    EXPECT_EQ(H.order(), pgammal) << q;
    EXPECT_EQ(H.order(), pgammal2_order(q));
    EXPECT_TRUE(is_subgroup(G, H));
    EXPECT_EQ(H.order() / G.order(), static_cast<std::size_t>(prime_power(q)->second));
    EXPECT_EQ(factorial(q + 1) % H.order(), 0u);
    // 3-transitive on the projective line: sharply for PGL
    EXPECT_EQ(G.order(), static_cast<std::size_t>((q + 1) * q * (q - 1)));
  }
  EXPECT_THROW(pgl2_model(6), InputError);
  EXPECT_EQ(projective_line_points(4).size(), 5u);
  EXPECT_FALSE(projective_line_points(4).back().value.has_value());
}

TEST(Perm, LagrangeDivisibility) {
  for (int q : {4, 5, 7}) {
    const auto G = pgammal2_model(q);
    for (std::size_t i = 0; i < G.order(); i += 7) EXPECT_EQ(G.order() % element_order(G.elements()[i]), 0u);
  }
}

TEST(Perm, GroupEqualityIsEquivalence) {
  const auto A = pgl2_model(5);
  const auto s = Permutation::from_images({1, 0, 2, 3, 4, 5});
  const auto B = A.conjugate_by(s);
  const auto C = PermGroup::closure(B.generators(), 6);
  EXPECT_TRUE(groups_equal(A, A));
  EXPECT_EQ(groups_equal(A, B), groups_equal(B, A));
  EXPECT_TRUE(groups_equal(B, C));
  EXPECT_EQ(groups_equal(A, C), groups_equal(A, B));
}

TEST(Perm, Conjugacy) {
  const auto s3 = symmetric_group(3);
  const auto a3 = PermGroup::closure({Permutation::from_cycles(3, {{0, 1, 2}})}, 3);
  EXPECT_FALSE(groups_equal(s3, a3));
  EXPECT_FALSE(is_conjugate(s3, a3).has_value());

  const auto G = pgl2_model(5);
  const auto s = Permutation::from_images({2, 5, 0, 1, 4, 3});
  const auto H = G.conjugate_by(s);
  const auto w = is_conjugate(G, H);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(G.conjugate_by(*w), H);
  EXPECT_EQ(detail::cycle_type_multiset(G), detail::cycle_type_multiset(H));
}

TEST(Perm, NormalizerMatchesBruteForce) {
  EXPECT_EQ(normalizer_in_sym(pgl2_model(4)), normalizer_oracle(pgl2_model(4)));
  EXPECT_EQ(normalizer_in_sym(pgl2_model(4)), pgammal2_model(4));
  EXPECT_EQ(normalizer_in_sym(pgammal2_model(5)), pgammal2_model(5));
  EXPECT_EQ(normalizer_in_sym(symmetric_group(4)), symmetric_group(4));
  const auto a3 = PermGroup::closure({Permutation::from_cycles(4, {{0, 1, 2}})}, 4);
  EXPECT_EQ(normalizer_in_sym(a3), normalizer_oracle(a3));
}

TEST(Perm, NormalizerOfPglIsPgammal) {
  for (int q : {5, 7, 8}) EXPECT_EQ(normalizer_in_sym(pgl2_model(q)), pgammal2_model(q)) << q;
}
