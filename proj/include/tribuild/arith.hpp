#pragma once

// Exact residue-ring and small finite-field arithmetic.

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tribuild/errors.hpp"

namespace tribuild {

/// Least non-negative residue of a modulo m (m > 0).
inline std::int64_t reduce_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// q = p^eta with p prime, or nullopt.
inline std::optional<std::pair<int, int>> prime_power(std::int64_t q) {
  if (q < 2) return std::nullopt;
  std::int64_t p = 2;
  while (q % p != 0) ++p;
  int eta = 0;
  while (q % p == 0) {
    q /= p;
    ++eta;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<int>(p), eta);
}

/// Element of Z/mZ, always reduced.
class ZMod {
public:
  ZMod(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
    detail::require(modulus > 0, "ZMod: modulus must be positive");
    value_ = reduce_mod(value, modulus);
  }

  std::int64_t value() const { return value_; }
  std::int64_t modulus() const { return modulus_; }

  bool is_unit() const { return std::gcd(value_, modulus_) == 1; }

  ZMod inverse() const {
    // extended Euclid
    std::int64_t r0 = modulus_, r1 = value_, s0 = 0, s1 = 1;
    while (r1 != 0) {
      const std::int64_t t = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
    }
    detail::require(r0 == 1, "ZMod: " + std::to_string(value_) + " is not a unit mod " +
                                 std::to_string(modulus_));
    return {s0, modulus_};
  }

  friend ZMod operator+(const ZMod& a, const ZMod& b) { return {a.value_ + b.value_, a.checked(b)}; }
  friend ZMod operator-(const ZMod& a, const ZMod& b) { return {a.value_ - b.value_, a.checked(b)}; }
  friend ZMod operator*(const ZMod& a, const ZMod& b) { return {a.value_ * b.value_, a.checked(b)}; }
  ZMod operator-() const { return {-value_, modulus_}; }
  friend bool operator==(const ZMod&, const ZMod&) = default;

private:
  std::int64_t checked(const ZMod& other) const {
    detail::require(modulus_ == other.modulus_, "ZMod: modulus mismatch");
    return modulus_;
  }

  std::int64_t modulus_;
  std::int64_t value_ = 0;
};

/// All units of Z/mZ in ascending order.
inline std::vector<int> zmod_units(int m) {
  detail::require(m >= 2, "zmod_units: modulus must be at least 2");
  std::vector<int> out;
  for (int a = 1; a < m; ++a)
    if (std::gcd(a, m) == 1) out.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// GF(p^k)

using Coeffs = std::vector<std::uint32_t>;

namespace detail {

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(ZMod(a, p).inverse().value());
}

/// Remainder of a modulo b over GF(p); b must be nonzero after trimming.
inline Coeffs poly_rem(Coeffs a, Coeffs b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint32_t factor = (a.back() * lead_inv) % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = (a[shift + i] + p - (factor * b[i]) % p) % p;
    trim(a);
  }
  return a;
}

/// Monic polynomial of the given degree whose lower coefficients are the base-p digits of `rank`.
inline Coeffs monic_from_rank(std::uint32_t rank, int degree, std::uint32_t p) {
  Coeffs c(static_cast<std::size_t>(degree) + 1, 0);
  for (int i = 0; i < degree; ++i) {
    c[i] = rank % p;
    rank /= p;
  }
  c[degree] = 1;
  return c;
}

inline std::uint32_t ipow(std::uint32_t b, int e) {
  std::uint32_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline bool is_irreducible(const Coeffs& f, std::uint32_t p) {
  const int k = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= k; ++d) {
    const std::uint32_t count = ipow(p, d);
    for (std::uint32_t r = 0; r < count; ++r)
      if (poly_rem(f, monic_from_rank(r, d, p), p).empty()) return false;
  }
  return true;
}

}  // namespace detail

/// Immutable description of GF(p^k): reduction polynomial and a primitive element.
struct FieldDesc {
  std::uint32_t p = 0;
  int k = 0;
  std::uint32_t order = 0;  // p^k
  Coeffs modulus;           // k+1 coefficients, low to high, monic
  Coeffs primitive;         // k coefficients

  bool operator==(const FieldDesc&) const = default;
};

using Field = std::shared_ptr<const FieldDesc>;

/// Element of GF(p^k) as a coefficient vector of length k (low degree first).
struct FieldElem {
  Field field;
  Coeffs coeffs;

  /// Base-p integer encoding sum c_i p^i, in [0, p^k).
  std::uint32_t index() const {
    std::uint32_t v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * field->p + *it;
    return v;
  }

  bool is_zero() const {
    for (auto c : coeffs)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return *a.field == *b.field && a.coeffs == b.coeffs;
  }
};

inline FieldElem ff_from_index(const Field& f, std::uint32_t index) {
  detail::require(index < f->order, "ff_from_index: index out of range");
  Coeffs c(static_cast<std::size_t>(f->k), 0);
  for (int i = 0; i < f->k; ++i) {
    c[i] = index % f->p;
    index /= f->p;
  }
  return {f, std::move(c)};
}

inline FieldElem ff_zero(const Field& f) { return ff_from_index(f, 0); }
inline FieldElem ff_one(const Field& f) { return ff_from_index(f, 1); }
inline FieldElem ff_primitive(const Field& f) { return {f, f->primitive}; }

namespace detail {
inline void same_field(const FieldElem& a, const FieldElem& b) {
  require(a.field == b.field || *a.field == *b.field, "field element from a different field");
}
}  // namespace detail

inline FieldElem ff_add(const FieldElem& a, const FieldElem& b) {
  detail::same_field(a, b);
  FieldElem r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % a.field->p;
  return r;
}

inline FieldElem ff_neg(const FieldElem& a) {
  FieldElem r = a;
  for (auto& c : r.coeffs) c = (a.field->p - c) % a.field->p;
  return r;
}

inline FieldElem ff_sub(const FieldElem& a, const FieldElem& b) { return ff_add(a, ff_neg(b)); }

inline FieldElem ff_mul(const FieldElem& a, const FieldElem& b) {
  detail::same_field(a, b);
  const auto p = a.field->p;
  const auto k = static_cast<std::size_t>(a.field->k);
  Coeffs prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % p;
  Coeffs rem = detail::poly_rem(std::move(prod), a.field->modulus, p);
  rem.resize(k, 0);
  return {a.field, std::move(rem)};
}

inline FieldElem ff_pow(FieldElem base, std::int64_t e) {
  if (e < 0) {
    detail::require(!base.is_zero(), "ff_pow: negative power of zero");
    e = reduce_mod(e, base.field->order - 1);
  }
  FieldElem r = ff_one(base.field);
  while (e > 0) {
    if (e & 1) r = ff_mul(r, base);
    base = ff_mul(base, base);
    e >>= 1;
  }
  return r;
}

inline FieldElem ff_inv(const FieldElem& a) {
  detail::require(!a.is_zero(), "ff_inv: zero has no inverse");
  return ff_pow(a, static_cast<std::int64_t>(a.field->order) - 2);
}

/// Multiplicative order of a nonzero element, by walking its powers.
inline std::uint32_t ff_order(const FieldElem& a) {
  detail::require(!a.is_zero(), "ff_order: zero has no multiplicative order");
  const FieldElem one = ff_one(a.field);
  FieldElem x = a;
  std::uint32_t n = 1;
  while (!(x == one)) {
    x = ff_mul(x, a);
    ++n;
  }
  return n;
}

inline constexpr int kMaxFieldDegree = 9;
inline constexpr std::uint32_t kMaxFieldOrder = 1000;

/// GF(p^k) with the smallest irreducible monic reduction polynomial and the
/// smallest-index primitive element.
inline Field make_field(std::uint32_t p, int k) {
  detail::require(is_prime(p), "make_field: " + std::to_string(p) + " is not prime");
  detail::require(k >= 1 && k <= kMaxFieldDegree, "make_field: degree must be in [1, 9]");
  std::uint64_t order = 1;
  for (int i = 0; i < k && order <= kMaxFieldOrder; ++i) order *= p;
  detail::require(order <= kMaxFieldOrder, "make_field: field order exceeds 1000");

  auto desc = std::make_shared<FieldDesc>();
  desc->p = p;
  desc->k = k;
  desc->order = static_cast<std::uint32_t>(order);
  const auto lower_count = static_cast<std::uint32_t>(order);
  for (std::uint32_t r = 0; r < lower_count; ++r) {
    Coeffs f = detail::monic_from_rank(r, k, p);
    if (detail::is_irreducible(f, p)) {
      desc->modulus = std::move(f);
      break;
    }
  }
  if (desc->modulus.empty()) throw ConsistencyError("make_field: no irreducible polynomial found");

  Field probe = desc;
  for (std::uint32_t idx = 1; idx < desc->order; ++idx) {
    const FieldElem cand = ff_from_index(probe, idx);
    if (ff_order(cand) == desc->order - 1) {
      desc->primitive = cand.coeffs;
      break;
    }
  }
  if (desc->primitive.empty()) throw ConsistencyError("make_field: no primitive element found");
  return desc;
}

}  // namespace tribuild
