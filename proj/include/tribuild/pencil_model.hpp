#pragma once

// Closed-form pencil groups of Desarguesian difference vectors.
//
// The Singer construction identifies the plane of the Singer set with PG(2,q)
// realised on GF(q^3): point i is <w^i>, line x is the 2-space w^x * span{1, w}.
// The lines through point 0 are then the 2-spaces containing 1, i.e. the points
// of the projective line V / <1>, on which the point stabilizer acts as
// PGammaL(2,q).  Any Desarguesian vector is carried onto the Singer set by an
// affine map, which is a label-preserving isomorphism, so its pencil group is
// this PGammaL(2,q) read through the labels.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tribuild/diffsets.hpp"
#include "tribuild/errors.hpp"
#include "tribuild/perm.hpp"

namespace tribuild {

class DesarguesianModel {
public:
  static DesarguesianModel make(int q) {
    DesarguesianModel M;
    M.singer_ = singer_construction(q);
    M.q_ = q;
    M.canonical_ = canonical_desarguesian_set(q);

    const DifferenceSet& ds = M.singer_.set;
    for (const auto& g : agl_elements(ds.modulus())) {
      auto pre = agl_apply(g.inverse(), ds.elements());
      std::sort(pre.begin(), pre.end());
      M.to_singer_.emplace(std::move(pre), g);  // first insertion is the smallest (a, b)
    }
    M.build_projective_coordinates();
    M.build_line_groups();
    return M;
  }

  int q() const { return q_; }
  int eta() const { return singer_.eta; }
  const SingerData& singer() const { return singer_; }
  const DifferenceSet& canonical_set() const { return canonical_; }

  /// PGammaL(2,q) and PGL(2,q) on the indices of V/<1> (q+1 points).
  const PermGroup& line_group() const { return pgammal_; }
  const PermGroup& pgl_line_group() const { return pgl_; }

  /// Projective-line index of the line -d through point 0, for d in the Singer set.
  int projective_index(int d) const { return proj_index_.at(d); }

  /// Desarguesian iff in the AGL orbit of the Singer set (AGL is transitive on Desarguesian sets).
  bool is_desarguesian(const std::vector<int>& entries) const { return singer_map(entries).has_value(); }

  std::optional<AffineMap> singer_map(std::vector<int> entries) const {
    std::sort(entries.begin(), entries.end());
    auto it = to_singer_.find(entries);
    if (it == to_singer_.end()) return std::nullopt;
    return it->second;
  }

  /// Pencil group of Pi_v on the labels {0..q}; nullopt when v is not Desarguesian.
  std::optional<PermGroup> pencil_group(const DifferenceVector& v) const {
    detail::require(v.q() == q_, "pencil_group: parameter mismatch");
    const auto g = singer_map(v.entries());
    if (!g) return std::nullopt;
    // relabel projective index of label j's line as j
    std::vector<int> to_label(static_cast<std::size_t>(q_) + 1);
    for (std::size_t j = 0; j < v.size(); ++j) to_label[proj_index_.at((*g)(v[j]))] = static_cast<int>(j);
    return pgammal_.conjugate_by(Permutation::from_images(to_label));
  }

private:
  using Coord = std::array<int, 3>;  // positions in the subfield list

  FieldElem power(std::int64_t i) const {
    const auto n = static_cast<std::int64_t>(singer_.power_index.size());
    return ff_from_index(singer_.field, singer_.power_index[reduce_mod(i, n)]);
  }

  void build_projective_coordinates() {
    const Field& F = singer_.field;
    const auto& sub = singer_.subfield;
    const FieldElem w = ff_primitive(F);
    const FieldElem w2 = ff_mul(w, w);
    std::vector<Coord> coord(F->order);
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = 0; b < sub.size(); ++b)
        for (std::size_t c = 0; c < sub.size(); ++c) {
          const FieldElem x = ff_add(ff_add(ff_from_index(F, sub[a]), ff_mul(ff_from_index(F, sub[b]), w)),
                                     ff_mul(ff_from_index(F, sub[c]), w2));
          coord[x.index()] = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
        }
    proj_index_.clear();
    for (int d : singer_.set.elements()) {
      Coord u = coord[power(-d).index()];
      if (u[1] == 0 && u[2] == 0) u = coord[power(1 - d).index()];
      proj_index_[d] = normalize(ff_from_index(F, sub[u[1]]), ff_from_index(F, sub[u[2]]));
    }
  }

  /// Index of [s : t]: position of s/t in the subfield list, or q for t = 0.
  int normalize(const FieldElem& s, const FieldElem& t) const {
    if (t.is_zero()) return q_;
    const auto x = ff_mul(s, ff_inv(t)).index();
    const auto& sub = singer_.subfield;
    return static_cast<int>(std::lower_bound(sub.begin(), sub.end(), x) - sub.begin());
  }

  /// [s:t] of projective index i.
  std::pair<FieldElem, FieldElem> coords_of(int i) const {
    const Field& F = singer_.field;
    if (i == q_) return {ff_one(F), ff_zero(F)};
    return {ff_from_index(F, singer_.subfield[i]), ff_one(F)};
  }

  Permutation linear_perm(const FieldElem& a, const FieldElem& b, const FieldElem& c, const FieldElem& d) const {
    std::vector<int> img(static_cast<std::size_t>(q_) + 1);
    for (int i = 0; i <= q_; ++i) {
      auto [s, t] = coords_of(i);
      img[i] = normalize(ff_add(ff_mul(a, s), ff_mul(b, t)), ff_add(ff_mul(c, s), ff_mul(d, t)));
    }
    return Permutation::from_images(img);
  }

  void build_line_groups() {
    const Field& F = singer_.field;
    const FieldElem zero = ff_zero(F), one = ff_one(F);
    const FieldElem zeta = power(plane_modulus(q_));  // generates GF(q)*
    std::vector<Permutation> gens{linear_perm(one, one, zero, one), linear_perm(zeta, zero, zero, one),
                                  linear_perm(zero, one, one, zero)};
    const auto n = static_cast<std::size_t>(q_) + 1;
    pgl_ = PermGroup::closure(gens, n);
    std::vector<int> frob(n);
    for (int i = 0; i <= q_; ++i) {
      auto [s, t] = coords_of(i);
      frob[i] = normalize(ff_pow(s, singer_.p), ff_pow(t, singer_.p));
    }
    gens.push_back(Permutation::from_images(frob));
    pgammal_ = PermGroup::closure(gens, n);
  }

  int q_ = 0;
  SingerData singer_;
  DifferenceSet canonical_;
  std::map<std::vector<int>, AffineMap> to_singer_;
  std::map<int, int> proj_index_;
  PermGroup pgl_;
  PermGroup pgammal_;
};

}  // namespace tribuild
