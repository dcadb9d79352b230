#pragma once

// Permutations of small degree, explicitly enumerated permutation groups,
// conjugacy/normalizer search, and PGL(2,q) / PGammaL(2,q) on the projective line.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "tribuild/arith.hpp"
#include "tribuild/errors.hpp"

namespace tribuild {

/// A bijection of {0..n-1}, stored as its image array.
///
/// Products compose left to right: (a * b)(x) = b(a(x)).  With this
/// convention conjugation g^s = s^-1 * g * s is "relabel the points of g by s":
/// if g sends i to j then g^s sends s(i) to s(j).
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint8_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
      detail::require(v < images_.size() && !seen[v], "Permutation: image array is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation from_images(const std::vector<int>& images) {
    std::vector<std::uint8_t> out;
    out.reserve(images.size());
    for (int v : images) {
      detail::require(v >= 0 && v < 256, "Permutation: image out of range");
      out.push_back(static_cast<std::uint8_t>(v));
    }
    return Permutation(std::move(out));
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::uint8_t> img(n);
    std::iota(img.begin(), img.end(), std::uint8_t{0});
    return Permutation(std::move(img));
  }

  /// Build from disjoint cycles, e.g. {{0, 1}, {2, 3, 4}}.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (const auto& c : cycles)
      for (std::size_t i = 0; i < c.size(); ++i) {
        detail::require(c[i] >= 0 && static_cast<std::size_t>(c[i]) < n, "from_cycles: point out of range");
        img[c[i]] = c[(i + 1) % c.size()];
      }
    return from_images(img);
  }

  std::size_t degree() const { return images_.size(); }
  int operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::uint8_t>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<std::uint8_t> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<std::uint8_t>(i);
    Permutation r;
    r.images_ = std::move(inv);
    return r;
  }

  /// Apply this, then `b`.
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    detail::require(a.degree() == b.degree(), "Permutation: degree mismatch");
    Permutation r;
    r.images_.resize(a.degree());
    for (std::size_t i = 0; i < a.degree(); ++i) r.images_[i] = b.images_[a.images_[i]];
    return r;
  }

  /// s^-1 * this * s.
  Permutation conjugate_by(const Permutation& s) const {
    detail::require(degree() == s.degree(), "Permutation: degree mismatch");
    Permutation r;
    r.images_.resize(degree());
    for (std::size_t i = 0; i < degree(); ++i) r.images_[s.images_[i]] = s.images_[images_[i]];
    return r;
  }

  /// Cycle lengths (fixed points included), ascending.
  std::vector<int> cycle_type() const {
    std::vector<int> lens;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    return lens;
  }

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::vector<int> c;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        c.push_back(static_cast<int>(j));
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  /// One-line image form "[i0 i1 ... i_{n-1}]".
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(images_[i]);
    }
    return s + "]";
  }

  static Permutation parse(const std::string& text) {
    const auto open = text.find('[');
    const auto close = text.find(']');
    detail::require(open != std::string::npos && close != std::string::npos && open < close,
                    "Permutation::parse: expected \"[i0 i1 ...]\"");
    std::istringstream in(text.substr(open + 1, close - open - 1));
    std::vector<int> img;
    int v = 0;
    while (in >> v) img.push_back(v);
    detail::require(in.eof(), "Permutation::parse: non-integer entry");
    return from_images(img);
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<std::uint8_t> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : p.images()) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

inline constexpr std::size_t kMaxPermDegree = 12;
inline constexpr std::size_t kMaxGroupOrder = 1'000'000;

/// Finite permutation group with an explicit, sorted element list.
class PermGroup {
public:
  /// Breadth-first product closure of `generators` in Sym(degree).
  static PermGroup closure(const std::vector<Permutation>& generators, std::size_t degree,
                           std::size_t max_order = kMaxGroupOrder) {
    detail::require_cap(degree <= kMaxPermDegree, "closure: degree exceeds 12");
    for (const auto& g : generators) detail::require(g.degree() == degree, "closure: generator degree mismatch");

    PermGroup G;
    G.degree_ = degree;
    for (const auto& g : generators)
      if (!g.is_identity()) G.generators_.push_back(g);

    std::unordered_set<Permutation, PermutationHash> seen;
    std::vector<Permutation> frontier{Permutation::identity(degree)};
    seen.insert(frontier.front());
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& x : frontier)
        for (const auto& g : G.generators_) {
          Permutation y = x * g;
          if (seen.insert(y).second) {
            detail::require_cap(seen.size() <= max_order, "closure: group order exceeds cap");
            next.push_back(std::move(y));
          }
        }
      frontier = std::move(next);
    }
    G.elements_.assign(seen.begin(), seen.end());
    std::sort(G.elements_.begin(), G.elements_.end());
    return G;
  }

  /// Group generated by a set already known to be a group (deduplicated, sorted);
  /// generators are chosen greedily.
  static PermGroup from_elements(std::vector<Permutation> elements, std::size_t degree) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    std::vector<Permutation> gens;
    PermGroup current = closure({}, degree);
    for (const auto& e : elements) {
      if (current.contains(e)) continue;
      gens.push_back(e);
      current = closure(gens, degree);
    }
    if (current.elements_ != elements) throw ConsistencyError("from_elements: set is not closed under products");
    return current;
  }

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  bool contains(const Permutation& p) const { return std::binary_search(elements_.begin(), elements_.end(), p); }

  /// s^-1 G s.
  PermGroup conjugate_by(const Permutation& s) const {
    PermGroup r;
    r.degree_ = degree_;
    r.elements_.reserve(elements_.size());
    for (const auto& g : elements_) r.elements_.push_back(g.conjugate_by(s));
    std::sort(r.elements_.begin(), r.elements_.end());
    for (const auto& g : generators_) r.generators_.push_back(g.conjugate_by(s));
    return r;
  }

  /// Equality as subsets of Sym(n).
  friend bool operator==(const PermGroup& a, const PermGroup& b) {
    return a.degree_ == b.degree_ && a.elements_ == b.elements_;
  }

private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
};

inline bool groups_equal(const PermGroup& g, const PermGroup& h) { return g == h; }

inline bool is_subgroup(const PermGroup& sub, const PermGroup& g) {
  if (sub.degree() != g.degree()) return false;
  return std::all_of(sub.elements().begin(), sub.elements().end(),
                     [&](const Permutation& p) { return g.contains(p); });
}

inline PermGroup symmetric_group(std::size_t n) {
  if (n <= 1) return PermGroup::closure({}, n);
  std::vector<int> cycle(n);
  std::iota(cycle.begin(), cycle.end(), 0);
  return PermGroup::closure({Permutation::from_cycles(n, {{0, 1}}), Permutation::from_cycles(n, {cycle})}, n);
}

/// A few generators of G, picked greedily from its sorted element list.
inline std::vector<Permutation> small_generating_set(const PermGroup& g) {
  std::vector<Permutation> gens;
  PermGroup current = PermGroup::closure({}, g.degree());
  for (const auto& e : g.elements()) {
    if (current.contains(e)) continue;
    gens.push_back(e);
    current = PermGroup::closure(gens, g.degree());
    if (current.order() == g.order()) break;
  }
  return gens;
}

namespace detail {

/// |C_{Sym(n)}(g)| from the cycle type: prod_c c^{k_c} k_c!.
inline std::uint64_t centralizer_order(const std::vector<int>& cycle_type) {
  std::uint64_t r = 1;
  std::size_t i = 0;
  while (i < cycle_type.size()) {
    std::size_t j = i;
    while (j < cycle_type.size() && cycle_type[j] == cycle_type[i]) ++j;
    for (std::size_t k = 1; k <= j - i; ++k) r *= static_cast<std::uint64_t>(cycle_type[i]) * k;
    i = j;
  }
  return r;
}

inline std::vector<std::vector<int>> cycle_type_multiset(const PermGroup& g) {
  std::vector<std::vector<int>> types;
  types.reserve(g.order());
  for (const auto& e : g.elements()) types.push_back(e.cycle_type());
  std::sort(types.begin(), types.end());
  return types;
}

/// Enumerate every s with g^s = h (g, h of equal cycle type); stop when `visit` returns false.
inline bool for_each_conjugator(const Permutation& g, const Permutation& h,
                                const std::function<bool(const Permutation&)>& visit) {
  auto gc = g.cycles();
  auto hc = h.cycles();
  auto by_len = [](const auto& a, const auto& b) { return a.size() < b.size() || (a.size() == b.size() && a < b); };
  std::sort(gc.begin(), gc.end(), by_len);
  std::sort(hc.begin(), hc.end(), by_len);
  const std::size_t n = g.degree();
  std::vector<int> img(n, -1);
  std::vector<bool> used(hc.size(), false);

  std::function<bool(std::size_t)> rec = [&](std::size_t ci) -> bool {
    if (ci == gc.size()) return visit(Permutation::from_images(img));
    const auto& c = gc[ci];
    for (std::size_t hi = 0; hi < hc.size(); ++hi) {
      if (used[hi] || hc[hi].size() != c.size()) continue;
      used[hi] = true;
      const std::size_t len = c.size();
      for (std::size_t rot = 0; rot < len; ++rot) {
        for (std::size_t i = 0; i < len; ++i) img[c[i]] = hc[hi][(i + rot) % len];
        if (!rec(ci + 1)) return false;
      }
      used[hi] = false;
    }
    return true;
  };
  return rec(0);
}

/// All s in Sym(n) with s^-1 G s = H (or only the first when `first_only`).
inline std::vector<Permutation> conjugators(const PermGroup& G, const PermGroup& H, bool first_only) {
  std::vector<Permutation> found;
  if (G.degree() != H.degree() || G.order() != H.order()) return found;
  if (cycle_type_multiset(G) != cycle_type_multiset(H)) return found;

  // Pivot: the element with the smallest Sym(n)-centralizer keeps the candidate list short.
  const Permutation* pivot = &G.elements().front();
  std::uint64_t best = centralizer_order(pivot->cycle_type());
  for (const auto& e : G.elements()) {
    const auto c = centralizer_order(e.cycle_type());
    if (c < best) {
      best = c;
      pivot = &e;
    }
  }
  std::vector<Permutation> gens = small_generating_set(G);
  const auto pivot_type = pivot->cycle_type();

  for (const auto& h : H.elements()) {
    if (h.cycle_type() != pivot_type) continue;
    const bool keep_going = for_each_conjugator(*pivot, h, [&](const Permutation& s) {
      for (const auto& g : gens)
        if (!H.contains(g.conjugate_by(s))) return true;
      found.push_back(s);
      return !first_only;
    });
    if (!keep_going) break;
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace detail

/// Some s with s^-1 G s = H, if G and H are conjugate in Sym(n).
inline std::optional<Permutation> is_conjugate(const PermGroup& G, const PermGroup& H) {
  auto found = detail::conjugators(G, H, true);
  if (found.empty()) return std::nullopt;
  return found.front();
}

inline constexpr std::size_t kMaxNormalizerDegree = 10;

/// N_{Sym(n)}(G), enumerated by the cycle-type pruned conjugator search.
inline PermGroup normalizer_in_sym(const PermGroup& G) {
  detail::require_cap(G.degree() <= kMaxNormalizerDegree, "normalizer_in_sym: degree exceeds 10");
  return PermGroup::from_elements(detail::conjugators(G, G, false), G.degree());
}

// ---------------------------------------------------------------------------
// Projective line models.

/// Point of PG(1,q): a field element (index 0..q-1, ascending field index) or infinity (index q).
struct ProjLinePoint {
  std::optional<FieldElem> value;  // nullopt = infinity
  std::uint32_t index = 0;
};

namespace detail {

struct ProjLine {
  Field field;
  std::uint32_t q = 0;

  std::uint32_t infinity() const { return q; }

  /// Image of point index under x -> (ax+b)/(cx+d).
  std::uint32_t mobius(std::uint32_t x, const FieldElem& a, const FieldElem& b, const FieldElem& c,
                       const FieldElem& d) const {
    if (x == infinity()) {
      if (c.is_zero()) return infinity();
      return ff_mul(a, ff_inv(c)).index();
    }
    const FieldElem fx = ff_from_index(field, x);
    const FieldElem den = ff_add(ff_mul(c, fx), d);
    if (den.is_zero()) return infinity();
    return ff_mul(ff_add(ff_mul(a, fx), b), ff_inv(den)).index();
  }

  Permutation mobius_perm(const FieldElem& a, const FieldElem& b, const FieldElem& c, const FieldElem& d) const {
    std::vector<int> img(q + 1);
    for (std::uint32_t x = 0; x <= q; ++x) img[x] = static_cast<int>(mobius(x, a, b, c, d));
    return Permutation::from_images(img);
  }

  Permutation frobenius_perm() const {
    std::vector<int> img(q + 1);
    for (std::uint32_t x = 0; x < q; ++x) img[x] = static_cast<int>(ff_pow(ff_from_index(field, x), field->p).index());
    img[q] = static_cast<int>(q);
    return Permutation::from_images(img);
  }
};

inline ProjLine proj_line(int q) {
  const auto pp = prime_power(q);
  require(pp.has_value(), "projective line model: q=" + std::to_string(q) + " is not a prime power");
  require(q <= 9, "projective line model: q must be at most 9");
  return {make_field(static_cast<std::uint32_t>(pp->first), pp->second), static_cast<std::uint32_t>(q)};
}

inline std::vector<Permutation> pgl2_generators(const ProjLine& L) {
  const Field& F = L.field;
  const FieldElem zero = ff_zero(F), one = ff_one(F), w = ff_primitive(F);
  return {L.mobius_perm(one, one, zero, one),    // x + 1
          L.mobius_perm(w, zero, zero, one),     // w x
          L.mobius_perm(zero, one, one, zero)};  // 1 / x
}

}  // namespace detail

inline std::vector<ProjLinePoint> projective_line_points(int q) {
  const auto L = detail::proj_line(q);
  std::vector<ProjLinePoint> pts;
  for (std::uint32_t x = 0; x < L.q; ++x) pts.push_back({ff_from_index(L.field, x), x});
  pts.push_back({std::nullopt, L.q});
  return pts;
}

/// PGL(2,q) acting on the q+1 points of the projective line.
inline PermGroup pgl2_model(int q) {
  const auto L = detail::proj_line(q);
  return PermGroup::closure(detail::pgl2_generators(L), L.q + 1);
}

/// PGammaL(2,q): PGL(2,q) extended by the Frobenius automorphism.
inline PermGroup pgammal2_model(int q) {
  const auto L = detail::proj_line(q);
  auto gens = detail::pgl2_generators(L);
  gens.push_back(L.frobenius_perm());
  return PermGroup::closure(gens, L.q + 1);
}

/// q(q^2-1)*eta for q = p^eta.
inline std::uint64_t pgammal2_order(int q) {
  const auto pp = prime_power(q);
  detail::require(pp.has_value(), "pgammal2_order: q is not a prime power");
  const auto Q = static_cast<std::uint64_t>(q);
  return Q * (Q * Q - 1) * static_cast<std::uint64_t>(pp->second);
}

}  // namespace tribuild
