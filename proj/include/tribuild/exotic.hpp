#pragma once

// Exoticity certificates for Singer cyclic lattices: local pencil groups,
// the group-comparison certificate, the census of normalized difference
// matrices up to the affine/row-permutation equivalence, and the counting bounds.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tribuild/diffsets.hpp"
#include "tribuild/errors.hpp"
#include "tribuild/pencil_model.hpp"
#include "tribuild/perm.hpp"
#include "tribuild/plane.hpp"

namespace tribuild {

inline constexpr int kMaxCertifyQ = 9;
inline constexpr int kMaxCensusQ = 5;

// ---------------------------------------------------------------------------
// Normalized matrices

/// Matrix with rows (d_i, d_{alpha1(i)}, d_{alpha2(i)}), d the sorted set D.
struct NormalizedMatrix {
  DifferenceSet d;
  Permutation alpha1;
  Permutation alpha2;

  int q() const { return d.q(); }

  DifferenceMatrix decode() const {
    const auto& e = d.elements();
    std::array<std::vector<int>, 3> cols;
    for (std::size_t i = 0; i < e.size(); ++i) {
      cols[0].push_back(e[i]);
      cols[1].push_back(e[alpha1(i)]);
      cols[2].push_back(e[alpha2(i)]);
    }
    return DifferenceMatrix::make(d.q(), cols);
  }

  /// Read alpha1, alpha2 off a matrix already in normalized form with respect to D.
  static NormalizedMatrix from_matrix(const DifferenceMatrix& M, const DifferenceSet& d) {
    detail::require(M.column(0).entries() == d.elements(), "from_matrix: first column is not D ascending");
    std::array<std::vector<int>, 2> alphas;
    for (std::size_t t = 1; t < 3; ++t)
      for (int x : M.column(t).entries()) alphas[t - 1].push_back(d.index_of(x));
    return {d, Permutation::from_images(alphas[0]), Permutation::from_images(alphas[1])};
  }

  static NormalizedMatrix normalize(const DifferenceMatrix& M, const DifferenceSet& d) {
    return from_matrix(normalize_matrix(M, d), d);
  }
};

/// All permutations of {0..n-1} in lexicographic order.
inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_images(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

/// Calls fn on every normalized matrix over D, ordered by (alpha1, alpha2).
template <typename Fn>
void enumerate_normalized(const DifferenceSet& d, Fn&& fn) {
  detail::require_cap(d.q() <= kMaxCensusQ, "enumerate_normalized: q exceeds cap 5");
  const auto perms = all_permutations(static_cast<std::size_t>(d.q()) + 1);
  for (const auto& a1 : perms)
    for (const auto& a2 : perms) fn(NormalizedMatrix{d, a1, a2});
}

// ---------------------------------------------------------------------------
// Certificates

enum class Outcome { CertifiedExotic, Inconclusive };

inline const char* to_string(Outcome o) { return o == Outcome::CertifiedExotic ? "CertifiedExotic" : "Inconclusive"; }

struct ExoticityWitness {
  enum class Kind { NonDesarguesianColumn, PencilMismatch };
  Kind kind = Kind::PencilMismatch;
  int column = -1;            // NonDesarguesianColumn
  int type_a = -1, type_b = -1;  // PencilMismatch: adjacent vertex types
  std::optional<PermGroup> group_a, group_b;
  std::optional<Permutation> separating;  // in group_a, not in group_b

  std::string summary() const {
    if (kind == Kind::NonDesarguesianColumn) return "non-Desarguesian column " + std::to_string(column);
    return "G" + std::to_string(type_a) + "!=G" + std::to_string(type_b) + " via " + separating->to_string();
  }

  /// Re-check the witness against the groups it carries.
  bool check() const {
    if (kind == Kind::NonDesarguesianColumn) return column >= 0 && column < 3;
    return group_a && group_b && separating && group_a->contains(*separating) && !group_b->contains(*separating);
  }
};

struct ExoticityVerdict {
  Outcome outcome = Outcome::Inconclusive;
  std::optional<ExoticityWitness> witness;
};

class NonDesarguesianColumn : public InputError {
public:
  explicit NonDesarguesianColumn(int column)
      : InputError("column " + std::to_string(column) + " is not Desarguesian"), column_(column) {}
  int column() const { return column_; }

private:
  int column_;
};

/// (G_0, G_1, G_2) on the chamber labels, via the closed-form model.
inline std::array<PermGroup, 3> local_pencil_groups(const DifferenceMatrix& M, const DesarguesianModel& model) {
  detail::require(M.q() == model.q(), "local_pencil_groups: parameter mismatch");
  std::array<PermGroup, 3> out;
  for (int t = 0; t < 3; ++t) {
    auto g = model.pencil_group(M.column(t));
    if (!g) throw NonDesarguesianColumn(t);
    out[t] = std::move(*g);
  }
  return out;
}

/// Same groups through the collineation search at point 0 of each plane (q <= 5).
inline std::array<PermGroup, 3> local_pencil_groups_by_search(const DifferenceMatrix& M) {
  detail::require_cap(M.q() <= kMaxPlaneSearchQ, "local_pencil_groups_by_search: q exceeds cap 5");
  std::array<PermGroup, 3> out;
  for (int t = 0; t < 3; ++t) {
    const auto P = plane_from_vector(M.column(t));
    if (!is_desarguesian(P)) throw NonDesarguesianColumn(t);
    out[t] = pencil_action(P, 0);
  }
  return out;
}

inline ExoticityVerdict verdict_from_groups(const std::array<PermGroup, 3>& g) {
  constexpr std::array<std::pair<int, int>, 3> kEdges{{{0, 1}, {1, 2}, {2, 0}}};
  for (auto [a, b] : kEdges) {
    if (g[a] == g[b]) continue;
    ExoticityWitness w;
    w.kind = ExoticityWitness::Kind::PencilMismatch;
    int ia = a, ib = b;
    auto outside = std::find_if(g[a].elements().begin(), g[a].elements().end(),
                                [&](const Permutation& p) { return !g[b].contains(p); });
    if (outside == g[a].elements().end()) {
      std::swap(ia, ib);
      outside = std::find_if(g[ia].elements().begin(), g[ia].elements().end(),
                             [&](const Permutation& p) { return !g[ib].contains(p); });
    }
    w.type_a = ia;
    w.type_b = ib;
    w.group_a = g[ia];
    w.group_b = g[ib];
    w.separating = *outside;
    return {Outcome::CertifiedExotic, std::move(w)};
  }
  return {};
}

/// CertifiedExotic when a column is non-Desarguesian or two adjacent pencil
/// groups differ as subgroups of Sym(q+1); Inconclusive otherwise.
inline ExoticityVerdict certify_exotic(const DifferenceMatrix& M, const DesarguesianModel& model) {
  try {
    return verdict_from_groups(local_pencil_groups(M, model));
  } catch (const NonDesarguesianColumn& e) {
    ExoticityWitness w;
    w.kind = ExoticityWitness::Kind::NonDesarguesianColumn;
    w.column = e.column();
    return {Outcome::CertifiedExotic, std::move(w)};
  }
}

inline ExoticityVerdict certify_exotic(const DifferenceMatrix& M) {
  detail::require_cap(M.q() <= kMaxCertifyQ, "certify_exotic: q exceeds cap 9");
  if (!prime_power(M.q())) {
    // no Desarguesian plane of this order exists
    ExoticityWitness w;
    w.kind = ExoticityWitness::Kind::NonDesarguesianColumn;
    w.column = 0;
    return {Outcome::CertifiedExotic, std::move(w)};
  }
  return certify_exotic(M, DesarguesianModel::make(M.q()));
}

/// alpha1, alpha2 in G_0.
inline bool fast_necessary_condition(const NormalizedMatrix& n, const PermGroup& g0) {
  return g0.contains(n.alpha1) && g0.contains(n.alpha2);
}

// ---------------------------------------------------------------------------
// Census

struct ClassifyOptions {
  unsigned threads = 1;
  bool extra_moves = false;  // add cyclic type rotation and global duality
  std::size_t samples = 10;  // orbit members re-certified per class
};

struct EquivClass {
  NormalizedMatrix representative;
  std::size_t orbit_size = 0;
  ExoticityVerdict verdict;
  std::size_t sampled = 0;
  bool verdict_invariant = true;
};

struct Census {
  int q = 0;
  bool extra_moves = false;
  std::size_t total = 0;
  std::size_t group_order = 0;  // order of the coarse move group (3 eta)^3; 0 with extra moves
  std::vector<EquivClass> classes;

  std::size_t certified() const {
    return static_cast<std::size_t>(std::count_if(classes.begin(), classes.end(), [](const EquivClass& c) {
      return c.verdict.outcome == Outcome::CertifiedExotic;
    }));
  }
  std::size_t inconclusive() const { return classes.size() - certified(); }
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Keeps the smaller root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

private:
  std::vector<std::size_t> parent_;
};

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Index permutation gamma with g(d_k) = d_{gamma(k)}.
inline Permutation index_action(const AffineMap& g, const DifferenceSet& d) {
  std::vector<int> img;
  for (int x : d.elements()) img.push_back(d.index_of(g(x)));
  return Permutation::from_images(img);
}

}  // namespace detail

/// Image of the normalized matrix after applying the stabilizer map g to column t
/// and re-sorting the rows; gamma = index_action(g, D).
inline NormalizedMatrix apply_column_move(const NormalizedMatrix& n, int t, const Permutation& gamma) {
  NormalizedMatrix r = n;
  if (t == 0) {
    const Permutation gi = gamma.inverse();
    r.alpha1 = gi * n.alpha1;
    r.alpha2 = gi * n.alpha2;
  } else if (t == 1) {
    r.alpha1 = n.alpha1 * gamma;
  } else {
    r.alpha2 = n.alpha2 * gamma;
  }
  return r;
}

/// Columns (v1, v2, v0), renormalized.
inline NormalizedMatrix rotate_types(const NormalizedMatrix& n) {
  const auto M = n.decode();
  return NormalizedMatrix::normalize(DifferenceMatrix::make({M.column(1), M.column(2), M.column(0)}), n.d);
}

/// Columns (-v0, -v2, -v1), renormalized.
inline NormalizedMatrix dualize(const NormalizedMatrix& n) {
  const auto M = n.decode();
  const AffineMap neg = AffineMap::make(-1, 0, M.modulus());
  return NormalizedMatrix::normalize(
      DifferenceMatrix::make({agl_apply(neg, M.column(0)), agl_apply(neg, M.column(2)), agl_apply(neg, M.column(1))}),
      n.d);
}

/// Orbits of the normalized matrices over the canonical Desarguesian set under
/// per-column stabilizer moves (plus rotation/duality when requested).
inline Census classify(int q, const ClassifyOptions& opt = {}) {
  detail::require(prime_power(q).has_value(), "classify: q must be a prime power");
  detail::require_cap(q <= kMaxCensusQ, "classify: q exceeds cap 5");
  const DesarguesianModel model = DesarguesianModel::make(q);
  const DifferenceSet& d = model.canonical_set();
  const auto perms = all_permutations(static_cast<std::size_t>(q) + 1);
  const std::size_t np = perms.size();
  const std::size_t total = np * np;
  auto rank = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  auto index_of = [&](const NormalizedMatrix& n) { return rank(n.alpha1) * np + rank(n.alpha2); };
  auto matrix_at = [&](std::size_t i) { return NormalizedMatrix{d, perms[i / np], perms[i % np]}; };

  std::vector<Permutation> gammas;
  for (const auto& g : set_stabilizer_in_agl(d))
    if (!g.is_identity()) gammas.push_back(detail::index_action(g, d));

  std::vector<std::function<NormalizedMatrix(const NormalizedMatrix&)>> moves;
  for (int t = 0; t < 3; ++t)
    for (const auto& gm : gammas) moves.push_back([t, gm](const NormalizedMatrix& n) { return apply_column_move(n, t, gm); });
  if (opt.extra_moves) {
    moves.push_back(rotate_types);
    moves.push_back(dualize);
  }

  std::vector<std::vector<std::size_t>> image(moves.size(), std::vector<std::size_t>(total));
  detail::parallel_for(np, opt.threads, [&](std::size_t r1) {
    for (std::size_t r2 = 0; r2 < np; ++r2) {
      const std::size_t i = r1 * np + r2;
      const auto n = matrix_at(i);
      for (std::size_t k = 0; k < moves.size(); ++k) image[k][i] = index_of(moves[k](n));
    }
  });
  detail::UnionFind uf(total);
  for (const auto& img : image)
    for (std::size_t i = 0; i < total; ++i) uf.unite(i, img[i]);

  std::vector<std::vector<std::size_t>> members_of(total);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t r = uf.find(i);
    if (r == i) roots.push_back(i);
    members_of[r].push_back(i);
  }

  Census census;
  census.q = q;
  census.extra_moves = opt.extra_moves;
  census.total = total;
  const std::size_t s = gammas.size() + 1;
  census.group_order = opt.extra_moves ? 0 : s * s * s;
  census.classes.resize(roots.size());
  detail::parallel_for(roots.size(), opt.threads, [&](std::size_t c) {
    const auto& mem = members_of[roots[c]];
    EquivClass& ec = census.classes[c];
    ec.representative = matrix_at(roots[c]);
    ec.orbit_size = mem.size();
    ec.verdict = certify_exotic(ec.representative.decode(), model);
    const std::size_t k = std::min(opt.samples, mem.size());
    for (std::size_t s = 0; s < k; ++s) {
      const auto v = certify_exotic(matrix_at(mem[s * mem.size() / k]).decode(), model);
      ++ec.sampled;
      if (v.outcome != ec.verdict.outcome) ec.verdict_invariant = false;
    }
  });
  return census;
}

/// Order of the coarse move group (3 eta)^3 on normalized matrices.
inline std::uint64_t coarse_group_order(int q) {
  const auto pp = prime_power(q);
  detail::require(pp.has_value(), "coarse_group_order: q must be a prime power");
  const std::uint64_t s = 3u * static_cast<std::uint64_t>(pp->second);
  return s * s * s;
}

// ---------------------------------------------------------------------------
// Bounds

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// (q(q^2-1)/3)^2.
inline std::uint64_t bound_B(std::uint64_t q) {
  detail::require(q >= 2, "bound_B: q must be at least 2");
  const std::uint64_t prod = q * (q * q - 1);
  if (prod % 3 != 0) throw ConsistencyError("bound_B: q(q^2-1) not divisible by 3");
  const std::uint64_t b = prod / 3;
  return b * b;
}

/// ((q+1)!)^2 / (162 eta^3) for q = p^eta.
inline Rational lower_A(int q) {
  const auto pp = prime_power(q);
  detail::require(pp.has_value(), "lower_A: q must be a prime power");
  BigInt f = 1;
  for (int i = 2; i <= q + 1; ++i) f *= i;
  const BigInt eta = pp->second;
  return Rational(f * f, 162 * eta * eta * eta);
}

/// Number of Inconclusive classes in the coarse census; never exceeds bound_B(q).
inline std::size_t candidate_count(int q, unsigned threads = 1) {
  const Census c = classify(q, {threads, false, 10});
  const std::size_t n = c.inconclusive();
  if (n > bound_B(static_cast<std::uint64_t>(q))) throw ConsistencyError("candidate_count exceeds bound_B");
  return n;
}

struct RatioRow {
  int q = 0;
  std::uint64_t b = 0;
  Rational a;
  Rational ratio;  // B / A

  std::string ratio_decimal() const {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << ratio.convert_to<double>();
    return os.str();
  }
};

inline std::vector<RatioRow> ratio_table(const std::vector<int>& qs) {
  std::vector<RatioRow> rows;
  for (int q : qs) {
    RatioRow r;
    r.q = q;
    r.b = bound_B(static_cast<std::uint64_t>(q));
    r.a = lower_A(q);
    r.ratio = Rational(BigInt(r.b)) / r.a;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tribuild
