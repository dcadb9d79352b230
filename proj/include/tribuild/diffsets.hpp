#pragma once

// Cyclic planar difference sets, difference vectors/matrices, the affine group
// AGL(1, Z/mZ) acting on them, and the Singer construction.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tribuild/arith.hpp"
#include "tribuild/errors.hpp"

namespace tribuild {

inline int plane_modulus(int q) { return q * q + q + 1; }

namespace detail {

inline void check_residues(const std::vector<int>& elems, int m, const char* who) {
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int x : elems) {
    require(x >= 0 && x < m, std::string(who) + ": residue " + std::to_string(x) + " outside [0, " +
                                 std::to_string(m) + ")");
    require(!seen[x], std::string(who) + ": repeated residue " + std::to_string(x));
    seen[x] = true;
  }
}

}  // namespace detail

/// True iff every nonzero residue mod q^2+q+1 is d - d' for exactly one ordered pair.
inline bool is_difference_set(const std::vector<int>& elements, int q) {
  detail::require(q >= 2, "is_difference_set: q must be at least 2");
  const int m = plane_modulus(q);
  detail::check_residues(elements, m, "is_difference_set");
  std::vector<int> hits(static_cast<std::size_t>(m), 0);
  for (int d : elements)
    for (int e : elements)
      if (d != e) ++hits[reduce_mod(d - e, m)];
  for (int x = 1; x < m; ++x)
    if (hits[x] != 1) return false;
  return true;
}

class DifferenceSet {
public:
  static DifferenceSet make(int q, std::vector<int> elements) {
    detail::require(is_difference_set(elements, q), "not a difference set with parameter q=" + std::to_string(q));
    std::sort(elements.begin(), elements.end());
    DifferenceSet d;
    d.q_ = q;
    d.elements_ = std::move(elements);
    return d;
  }

  int q() const { return q_; }
  int modulus() const { return plane_modulus(q_); }
  /// Sorted ascending.
  const std::vector<int>& elements() const { return elements_; }

  bool contains(int x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }
  /// Position of x in the sorted element list.
  int index_of(int x) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
    detail::require(it != elements_.end() && *it == x, "DifferenceSet::index_of: not an element");
    return static_cast<int>(it - elements_.begin());
  }

  friend bool operator==(const DifferenceSet&, const DifferenceSet&) = default;
  friend auto operator<=>(const DifferenceSet& a, const DifferenceSet& b) {
    if (auto c = a.q_ <=> b.q_; c != 0) return c;
    return a.elements_ <=> b.elements_;
  }

private:
  int q_ = 0;
  std::vector<int> elements_;
};

/// An ordering (d_1, ..., d_{q+1}) of a difference set; position j induces flag label j.
class DifferenceVector {
public:
  static DifferenceVector make(int q, std::vector<int> entries) {
    detail::require(is_difference_set(entries, q), "not a difference vector with parameter q=" + std::to_string(q));
    DifferenceVector v;
    v.q_ = q;
    v.entries_ = std::move(entries);
    return v;
  }

  int q() const { return q_; }
  int modulus() const { return plane_modulus(q_); }
  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  DifferenceSet as_set() const { return DifferenceSet::make(q_, entries_); }

  friend bool operator==(const DifferenceVector&, const DifferenceVector&) = default;

private:
  int q_ = 0;
  std::vector<int> entries_;
};

/// Three difference vectors (v_0, v_1, v_2) with a common parameter; row i is (v_0[i], v_1[i], v_2[i]).
class DifferenceMatrix {
public:
  static DifferenceMatrix make(std::array<DifferenceVector, 3> columns) {
    const int q = columns[0].q();
    for (const auto& c : columns) detail::require(c.q() == q, "DifferenceMatrix: columns disagree on q");
    DifferenceMatrix M;
    M.columns_ = std::move(columns);
    return M;
  }

  static DifferenceMatrix make(int q, const std::array<std::vector<int>, 3>& columns) {
    return make({DifferenceVector::make(q, columns[0]), DifferenceVector::make(q, columns[1]),
                 DifferenceVector::make(q, columns[2])});
  }

  int q() const { return columns_[0].q(); }
  int modulus() const { return columns_[0].modulus(); }
  std::size_t rows() const { return columns_[0].size(); }
  const DifferenceVector& column(std::size_t t) const { return columns_.at(t); }
  const std::array<DifferenceVector, 3>& columns() const { return columns_; }

  /// Simultaneously reorder the rows: new row i is old row sigma[i].
  DifferenceMatrix permute_rows(const std::vector<int>& sigma) const {
    detail::require(sigma.size() == rows(), "permute_rows: wrong length");
    std::array<std::vector<int>, 3> cols;
    for (std::size_t t = 0; t < 3; ++t)
      for (int s : sigma) cols[t].push_back(columns_[t][static_cast<std::size_t>(s)]);
    return make(q(), cols);
  }

  friend bool operator==(const DifferenceMatrix&, const DifferenceMatrix&) = default;

private:
  std::array<DifferenceVector, 3> columns_;
};

/// x -> a x + b on Z/mZ with a a unit.
struct AffineMap {
  int a = 1;
  int b = 0;
  int m = 1;

  static AffineMap make(int a, int b, int m) {
    detail::require(m >= 1, "AffineMap: modulus must be positive");
    a = static_cast<int>(reduce_mod(a, m));
    b = static_cast<int>(reduce_mod(b, m));
    detail::require(std::gcd(a, m) == 1, "AffineMap: multiplier is not a unit");
    return {a, b, m};
  }

  int operator()(int x) const { return static_cast<int>(reduce_mod(static_cast<std::int64_t>(a) * x + b, m)); }

  /// (this after other)(x) = this(other(x)).
  AffineMap after(const AffineMap& other) const {
    return make(static_cast<int>(reduce_mod(static_cast<std::int64_t>(a) * other.a, m)), (*this)(other.b), m);
  }

  AffineMap inverse() const {
    const auto ai = static_cast<int>(ZMod(a, m).inverse().value());
    return make(ai, static_cast<int>(reduce_mod(-static_cast<std::int64_t>(ai) * b, m)), m);
  }

  bool is_identity() const { return a == 1 % m && b == 0; }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
  friend auto operator<=>(const AffineMap&, const AffineMap&) = default;
};

/// All of AGL(1, Z/mZ) ordered by (a, b).
inline std::vector<AffineMap> agl_elements(int m) {
  std::vector<AffineMap> out;
  for (int a : zmod_units(m))
    for (int b = 0; b < m; ++b) out.push_back({a, b, m});
  return out;
}

inline std::vector<int> agl_apply(const AffineMap& g, const std::vector<int>& xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (int x : xs) out.push_back(g(x));
  return out;
}

/// Componentwise image; keeps the row order.
inline DifferenceVector agl_apply(const AffineMap& g, const DifferenceVector& v) {
  detail::require(g.m == v.modulus(), "agl_apply: modulus mismatch");
  return DifferenceVector::make(v.q(), agl_apply(g, v.entries()));
}

inline DifferenceSet agl_apply(const AffineMap& g, const DifferenceSet& d) {
  detail::require(g.m == d.modulus(), "agl_apply: modulus mismatch");
  return DifferenceSet::make(d.q(), agl_apply(g, d.elements()));
}

/// {g in AGL(1, Z/mZ) : g(D) = D}, ordered by (a, b).
inline std::vector<AffineMap> set_stabilizer_in_agl(const DifferenceSet& d) {
  std::vector<AffineMap> out;
  for (const auto& g : agl_elements(d.modulus())) {
    bool ok = true;
    for (int x : d.elements())
      if (!d.contains(g(x))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(g);
  }
  return out;
}

/// Smallest (a, b) with g(S) = D as sets.
inline std::optional<AffineMap> find_agl_map(const std::vector<int>& s, const DifferenceSet& d) {
  if (s.size() != d.elements().size()) return std::nullopt;
  for (const auto& g : agl_elements(d.modulus())) {
    bool ok = true;
    for (int x : s)
      if (!d.contains(g(x))) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return std::nullopt;
}

/// The AGL orbit of D, as sorted sets.
inline std::set<std::vector<int>> agl_orbit(const DifferenceSet& d) {
  std::set<std::vector<int>> orbit;
  for (const auto& g : agl_elements(d.modulus())) {
    auto img = agl_apply(g, d.elements());
    std::sort(img.begin(), img.end());
    orbit.insert(std::move(img));
  }
  return orbit;
}

inline constexpr int kMaxBruteForceQ = 4;

/// Every (q+1)-subset of Z/mZ that is a difference set, ascending.
inline std::vector<DifferenceSet> all_difference_sets(int q) {
  detail::require(q >= 2, "all_difference_sets: q must be at least 2");
  detail::require_cap(q <= kMaxBruteForceQ, "all_difference_sets: q exceeds brute-force cap 4");
  const int m = plane_modulus(q);
  const int k = q + 1;
  std::vector<DifferenceSet> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    if (is_difference_set(pick, q)) out.push_back(DifferenceSet::make(q, pick));
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singer construction.

inline constexpr int kMaxSingerQ = 9;

/// GF(q^3) viewed over its subfield GF(q), with the difference set
/// { i mod m : w^i in span_GF(q){1, w} }.
struct SingerData {
  int q = 0;
  int p = 0;
  int eta = 0;
  Field field;                          // GF(q^3) = GF(p^{3 eta})
  std::vector<std::uint32_t> subfield;  // indices of the GF(q) elements, ascending
  std::vector<std::uint32_t> power_index;  // power_index[i] = index of w^i, i < q^3 - 1
  DifferenceSet set;
};

inline SingerData singer_construction(int q) {
  const auto pp = prime_power(q);
  detail::require(pp.has_value(), "singer: q=" + std::to_string(q) + " is not a prime power");
  detail::require_cap(q <= kMaxSingerQ, "singer: q exceeds cap 9");
  SingerData s;
  s.q = q;
  s.p = pp->first;
  s.eta = pp->second;
  s.field = make_field(static_cast<std::uint32_t>(s.p), 3 * s.eta);
  const Field& F = s.field;
  const FieldElem w = ff_primitive(F);

  for (std::uint32_t x = 0; x < F->order; ++x)
    if (ff_pow(ff_from_index(F, x), q) == ff_from_index(F, x)) s.subfield.push_back(x);
  if (s.subfield.size() != static_cast<std::size_t>(q)) throw ConsistencyError("singer: subfield has wrong size");

  std::vector<bool> in_plane(F->order, false);
  for (auto a : s.subfield)
    for (auto b : s.subfield)
      in_plane[ff_add(ff_from_index(F, a), ff_mul(ff_from_index(F, b), w)).index()] = true;

  const int m = plane_modulus(q);
  std::set<int> residues;
  FieldElem x = ff_one(F);
  for (std::uint32_t i = 0; i + 1 < F->order; ++i) {
    s.power_index.push_back(x.index());
    if (in_plane[x.index()]) residues.insert(static_cast<int>(i % static_cast<std::uint32_t>(m)));
    x = ff_mul(x, w);
  }
  s.set = DifferenceSet::make(q, {residues.begin(), residues.end()});
  return s;
}

inline DifferenceSet singer_difference_set(int q) { return singer_construction(q).set; }

/// Lexicographically smallest member of the AGL orbit of the Singer set.
inline DifferenceSet canonical_desarguesian_set(int q) {
  const DifferenceSet s = singer_difference_set(q);
  return DifferenceSet::make(q, *agl_orbit(s).begin());
}

// ---------------------------------------------------------------------------
// Normalization of difference matrices.

class ColumnNotEquivalent : public InputError {
public:
  explicit ColumnNotEquivalent(std::size_t column)
      : InputError("column " + std::to_string(column) + " is not AGL-equivalent to the reference difference set"),
        column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

/// Equivalent matrix whose columns equal D as sets and whose first column is D ascending.
/// Each column is moved by the smallest (a, b) affine map carrying it onto D.
inline DifferenceMatrix normalize_matrix(const DifferenceMatrix& M, const DifferenceSet& d) {
  detail::require(M.q() == d.q(), "normalize_matrix: parameter mismatch");
  std::array<std::vector<int>, 3> cols;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto g = find_agl_map(M.column(t).entries(), d);
    if (!g) throw ColumnNotEquivalent(t);
    cols[t] = agl_apply(*g, M.column(t).entries());
  }
  // Row sigma[i] holds the i-th smallest entry of column 0.
  std::vector<int> sigma(M.rows());
  for (std::size_t r = 0; r < M.rows(); ++r) sigma[d.index_of(cols[0][r])] = static_cast<int>(r);
  return DifferenceMatrix::make(d.q(), cols).permute_rows(sigma);
}

}  // namespace tribuild
