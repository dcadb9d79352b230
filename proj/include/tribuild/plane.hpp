#pragma once

// Labelled cyclic projective planes built from difference vectors, their
// collineations, elations and pencil actions.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tribuild/diffsets.hpp"
#include "tribuild/errors.hpp"
#include "tribuild/incidence_search.hpp"
#include "tribuild/perm.hpp"

namespace tribuild {

/// Projective plane of order q on points Z/mZ and lines Z/mZ.  Line x holds the
/// points x + d_j, and the flag (x, x + d_j) carries label index j (0-based; the
/// labels 1..q+1 of the text formats are j + 1).
class LabelledPlane {
public:
  /// Plane from a validated difference vector.
  static LabelledPlane from_vector(const DifferenceVector& v) {
    LabelledPlane P = from_translates(v.q(), v.entries());
    P.source_ = v;
    return P;
  }

  /// Translate structure of an arbitrary residue list, not checked to be a plane.
  static LabelledPlane from_translates(int q, const std::vector<int>& entries) {
    const int m = plane_modulus(q);
    detail::check_residues(entries, m, "from_translates");
    std::vector<std::vector<std::pair<int, int>>> lines(static_cast<std::size_t>(m));
    for (int x = 0; x < m; ++x)
      for (std::size_t j = 0; j < entries.size(); ++j)
        lines[x].emplace_back(static_cast<int>(reduce_mod(x + entries[j], m)), static_cast<int>(j));
    return from_lines(q, m, std::move(lines));
  }

  /// Raw incidence table: `lines[l]` lists (point, label index) pairs.
  static LabelledPlane from_lines(int q, int num_points, std::vector<std::vector<std::pair<int, int>>> lines) {
    LabelledPlane P;
    P.q_ = q;
    P.geom_ = IncidenceGeometry(num_points, std::move(lines));
    return P;
  }

  int q() const { return q_; }
  int num_points() const { return geom_.num_points(); }
  int num_lines() const { return geom_.num_lines(); }
  const IncidenceGeometry& geometry() const { return geom_; }
  const std::optional<DifferenceVector>& source() const { return source_; }

  bool incident(int line, int point) const { return geom_.incident(line, point); }
  int label(int line, int point) const { return geom_.label(line, point); }
  const std::vector<int>& points_on(int line) const { return geom_.points_on(line); }
  const std::vector<int>& lines_through(int point) const { return geom_.lines_through(point); }
  std::size_t flag_count() const { return geom_.flag_count(); }

  /// The line through `point` whose flag there carries `label`, or -1.
  int line_with_label(int point, int label) const {
    for (int l : lines_through(point))
      if (this->label(l, point) == label) return l;
    return -1;
  }

  int point_with_label(int line, int label) const {
    for (int p : points_on(line))
      if (this->label(line, p) == label) return p;
    return -1;
  }

private:
  int q_ = 0;
  IncidenceGeometry geom_;
  std::optional<DifferenceVector> source_;
};

inline LabelledPlane plane_from_vector(const DifferenceVector& v) { return LabelledPlane::from_vector(v); }

struct Collineation {
  std::vector<int> point_map;
  std::vector<int> line_map;
  bool preserves_labels = false;

  bool is_identity() const {
    for (std::size_t i = 0; i < point_map.size(); ++i)
      if (point_map[i] != static_cast<int>(i)) return false;
    for (std::size_t i = 0; i < line_map.size(); ++i)
      if (line_map[i] != static_cast<int>(i)) return false;
    return true;
  }

  /// Apply this, then `b`.
  Collineation then(const Collineation& b) const {
    Collineation r;
    for (int x : point_map) r.point_map.push_back(b.point_map[x]);
    for (int x : line_map) r.line_map.push_back(b.line_map[x]);
    r.preserves_labels = preserves_labels && b.preserves_labels;
    return r;
  }

  Collineation inverse() const {
    Collineation r{point_map, line_map, preserves_labels};
    for (std::size_t i = 0; i < point_map.size(); ++i) r.point_map[point_map[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < line_map.size(); ++i) r.line_map[line_map[i]] = static_cast<int>(i);
    return r;
  }

  friend bool operator==(const Collineation&, const Collineation&) = default;
};

struct Elation {
  Collineation map;
  int center = 0;
  int axis = 0;
};

/// Point-to-line and line-to-point bijections swapping the two roles.
struct Duality {
  std::vector<int> point_to_line;
  std::vector<int> line_to_point;
};

/// True iff `c` preserves incidence in both directions (and labels if `with_labels`).
inline bool is_collineation(const LabelledPlane& P, const Collineation& c, bool with_labels) {
  if (c.point_map.size() != static_cast<std::size_t>(P.num_points()) ||
      c.line_map.size() != static_cast<std::size_t>(P.num_lines()))
    return false;
  for (int l = 0; l < P.num_lines(); ++l)
    for (int p = 0; p < P.num_points(); ++p) {
      const bool inc = P.incident(l, p);
      if (inc != P.incident(c.line_map[l], c.point_map[p])) return false;
      if (inc && with_labels && P.label(l, p) != P.label(c.line_map[l], c.point_map[p])) return false;
    }
  return true;
}

/// Two distinct points span a unique line, two distinct lines meet in a unique
/// point, and some four points have no three collinear.
inline bool verify_plane_axioms(const LabelledPlane& P) {
  const auto& g = P.geometry();
  const int n = g.num_points();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (g.join(a, b) < 0) return false;
  for (int a = 0; a < g.num_lines(); ++a)
    for (int b = a + 1; b < g.num_lines(); ++b)
      if (g.meet(a, b) < 0) return false;
  auto collinear = [&](int a, int b, int c) { return g.incident(g.join(a, b), c); };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        if (collinear(a, b, c)) continue;
        for (int d = c + 1; d < n; ++d)
          if (!collinear(a, b, d) && !collinear(a, c, d) && !collinear(b, c, d)) return true;
      }
  return false;
}

/// x -> x + 1 on points and lines.
inline Collineation singer_shift(const LabelledPlane& P) {
  Collineation c;
  const int m = P.num_points();
  for (int x = 0; x < m; ++x) c.point_map.push_back((x + 1) % m);
  c.line_map = c.point_map;
  c.preserves_labels = true;
  return c;
}

/// Point x -> line -x, line x -> point -x.
inline Duality dual_map(const LabelledPlane& P) {
  Duality d;
  const int m = P.num_points();
  for (int x = 0; x < m; ++x) d.point_to_line.push_back(static_cast<int>(reduce_mod(-x, m)));
  d.line_to_point = d.point_to_line;
  return d;
}

inline constexpr int kMaxPlaneSearchQ = 5;

namespace detail {

inline void require_search_cap(const LabelledPlane& P) {
  require_cap(P.q() <= kMaxPlaneSearchQ, "collineation search: q exceeds cap 5");
}

inline std::vector<Collineation> to_collineations(const std::vector<GeometryMap>& maps, const LabelledPlane& P) {
  std::vector<Collineation> out;
  out.reserve(maps.size());
  for (const auto& m : maps) {
    Collineation c{m.point, m.line, false};
    c.preserves_labels = is_collineation(P, c, true);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

/// All collineations fixing the point x0 (label-preserving ones only if `labels_only`).
inline std::vector<Collineation> collineations_fixing(const LabelledPlane& P, int x0, bool labels_only) {
  detail::require_search_cap(P);
  detail::require(x0 >= 0 && x0 < P.num_points(), "collineations_fixing: point out of range");
  SearchOptions opt;
  opt.labels_only = labels_only;
  opt.fixed_points = {{x0, x0}};
  return detail::to_collineations(find_collineations(P.geometry(), opt), P);
}

/// All collineations fixing the line l0.
inline std::vector<Collineation> collineations_fixing_line(const LabelledPlane& P, int l0, bool labels_only) {
  detail::require_search_cap(P);
  detail::require(l0 >= 0 && l0 < P.num_lines(), "collineations_fixing_line: line out of range");
  SearchOptions opt;
  opt.labels_only = labels_only;
  opt.fixed_lines = {{l0, l0}};
  return detail::to_collineations(find_collineations(P.geometry(), opt), P);
}

/// Permutation of the labels {0..q} of the flags through x0 induced by the stabilizer of x0.
inline PermGroup pencil_action(const LabelledPlane& P, int x0) {
  const auto stab = collineations_fixing(P, x0, false);
  const std::size_t n = static_cast<std::size_t>(P.q()) + 1;
  std::set<Permutation> perms;
  for (const auto& c : stab) {
    std::vector<int> img(n);
    for (int l : P.lines_through(x0)) img[P.label(l, x0)] = P.label(c.line_map[l], x0);
    perms.insert(Permutation::from_images(img));
  }
  return PermGroup::from_elements({perms.begin(), perms.end()}, n);
}

/// Same, for the flags on the line l0.
inline PermGroup line_pencil_action(const LabelledPlane& P, int l0) {
  const auto stab = collineations_fixing_line(P, l0, false);
  const std::size_t n = static_cast<std::size_t>(P.q()) + 1;
  std::set<Permutation> perms;
  for (const auto& c : stab) {
    std::vector<int> img(n);
    for (int p : P.points_on(l0)) img[P.label(l0, p)] = P.label(l0, c.point_map[p]);
    perms.insert(Permutation::from_images(img));
  }
  return PermGroup::from_elements({perms.begin(), perms.end()}, n);
}

/// Collineations fixing every point of `axis` and every line through `center`.
inline std::vector<Elation> elations_with(const LabelledPlane& P, int center, int axis) {
  detail::require_search_cap(P);
  detail::require(center >= 0 && center < P.num_points() && axis >= 0 && axis < P.num_lines(),
                  "elations_with: index out of range");
  detail::require(P.incident(axis, center), "elations_with: center is not on the axis");
  SearchOptions opt;
  for (int p : P.points_on(axis)) opt.fixed_points.emplace_back(p, p);
  for (int l : P.lines_through(center)) opt.fixed_lines.emplace_back(l, l);
  std::vector<Elation> out;
  for (auto& c : detail::to_collineations(find_collineations(P.geometry(), opt), P))
    out.push_back({std::move(c), center, axis});
  return out;
}

struct CycleProfile {
  int cycles = 0;  // k
  int length = 0;  // c

  friend bool operator==(const CycleProfile&, const CycleProfile&) = default;
};

/// Cycle structure of a nontrivial elation on the q points of `line` other than
/// the center; `line` must pass through the center and differ from the axis.
inline CycleProfile elation_cycle_profile(const LabelledPlane& P, const Elation& e, int line) {
  detail::require(!e.map.is_identity(), "elation_cycle_profile: trivial elation");
  detail::require(line != e.axis && P.incident(line, e.center),
                  "elation_cycle_profile: line must pass through the center and differ from the axis");
  std::vector<int> pts;
  for (int p : P.points_on(line))
    if (p != e.center) pts.push_back(p);
  std::set<int> seen;
  std::vector<int> lengths;
  for (int p : pts) {
    if (seen.count(p)) continue;
    int len = 0;
    for (int x = p; !seen.count(x); x = e.map.point_map[x]) {
      if (!P.incident(line, x) || x == e.center) throw ConsistencyError("elation does not preserve the line");
      seen.insert(x);
      ++len;
    }
    lengths.push_back(len);
  }
  for (int len : lengths)
    if (len != lengths.front()) throw ConsistencyError("elation has unequal cycle lengths");
  return {static_cast<int>(lengths.size()), lengths.front()};
}

/// Every flag admits exactly q elations (so each (P, l)-transitivity holds).
/// Throws InputError when the structure is not a projective plane.
inline bool is_desarguesian(const LabelledPlane& P) {
  detail::require_search_cap(P);
  detail::require(verify_plane_axioms(P), "is_desarguesian: input is not a projective plane");
  for (int l = 0; l < P.num_lines(); ++l)
    for (int p : P.points_on(l))
      if (elations_with(P, p, l).size() != static_cast<std::size_t>(P.q())) return false;
  return true;
}

}  // namespace tribuild
