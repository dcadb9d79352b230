#pragma once

// Radius <= 2 balls of the labelled building of a difference matrix, built by
// gluing labelled residues, plus the level-1 and level-2 Hjelmslev planes at
// the center.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tribuild/diffsets.hpp"
#include "tribuild/errors.hpp"
#include "tribuild/incidence_search.hpp"
#include "tribuild/perm.hpp"
#include "tribuild/plane.hpp"

namespace tribuild {

inline constexpr int kMaxBallQ1 = 9;
inline constexpr int kMaxBallQ2 = 3;

struct BallVertex {
  int type = 0;
  int distance = 0;

  friend bool operator==(const BallVertex&, const BallVertex&) = default;
};

/// Triangle with v[t] the vertex of type t.
struct BallChamber {
  std::array<int, 3> v{};
  int label = 0;

  friend bool operator==(const BallChamber&, const BallChamber&) = default;
};

class BallComplex {
public:
  int q = 0;
  int radius = 0;
  int center = 0;
  std::vector<BallVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // a < b, sorted
  std::vector<BallChamber> chambers;       // sorted by v
  std::optional<DifferenceMatrix> matrix;

  int center_type() const { return vertices.at(center).type; }

  std::vector<int> neighbors(int x) const {
    std::vector<int> out;
    for (auto [a, b] : edges) {
      if (a == x) out.push_back(b);
      if (b == x) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Index of the chamber on vertices {a, b, c}, or -1.
  int find_chamber(int a, int b, int c) const {
    std::array<int, 3> key{-1, -1, -1};
    for (int x : {a, b, c}) {
      const int t = vertices.at(x).type;
      if (key[t] != -1) return -1;
      key[t] = x;
    }
    auto it = std::lower_bound(chambers.begin(), chambers.end(), key,
                               [](const BallChamber& ch, const std::array<int, 3>& k) { return ch.v < k; });
    if (it == chambers.end() || it->v != key) return -1;
    return static_cast<int>(it - chambers.begin());
  }

  /// Chambers containing both a and b.
  std::vector<int> chambers_on(int a, int b) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < chambers.size(); ++i) {
      const auto& v = chambers[i].v;
      if (std::find(v.begin(), v.end(), a) != v.end() && std::find(v.begin(), v.end(), b) != v.end())
        out.push_back(static_cast<int>(i));
    }
    return out;
  }

  /// Re-sort chambers and edges; edges are taken from the chamber sides.
  void canonicalize() {
    std::sort(chambers.begin(), chambers.end(), [](const BallChamber& x, const BallChamber& y) { return x.v < y.v; });
    std::set<std::pair<int, int>> e;
    for (const auto& c : chambers)
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) e.insert(std::minmax(c.v[i], c.v[j]));
    edges.assign(e.begin(), e.end());
  }
};

namespace detail {

class DisjointSets {
public:
  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

private:
  std::vector<int> parent_;
};

struct ResidueEmbedding {
  int vertex = 0;
  int type = 0;                 // type of `vertex`
  std::vector<int> point_ids;   // provisional ids of the residue points (type + 1)
  std::vector<int> line_ids;    // and lines (type + 2)
};

}  // namespace detail

/// Ball of radius r around a vertex of type `center_type` in the building of M.
inline BallComplex build_ball(const DifferenceMatrix& M, int r, int center_type = 0) {
  detail::require(r == 1 || r == 2, "build_ball: radius must be 1 or 2");
  detail::require(center_type >= 0 && center_type < 3, "build_ball: center type must be 0, 1 or 2");
  detail::require_cap(M.q() <= (r == 1 ? kMaxBallQ1 : kMaxBallQ2),
                      r == 1 ? "build_ball: q exceeds cap 9 for radius 1" : "build_ball: q exceeds cap 3 for radius 2");
  const int q = M.q();
  const int m = plane_modulus(q);
  const int c = center_type;
  auto type_of = [](int t) { return t % 3; };
  const std::array<LabelledPlane, 3> plane{plane_from_vector(M.column(0)), plane_from_vector(M.column(1)),
                                           plane_from_vector(M.column(2))};

  detail::DisjointSets ds;
  std::vector<int> ptype, pdist;
  auto fresh = [&](int type, int dist) {
    ptype.push_back(type);
    pdist.push_back(dist);
    return ds.add();
  };
  std::vector<BallChamber> raw;
  auto add_chamber = [&](int a, int b, int x, int label) {
    BallChamber ch;
    ch.v.fill(-1);
    for (int id : {a, b, x}) ch.v[ptype[id]] = id;
    ch.label = label;
    raw.push_back(ch);
  };

  const int O = fresh(c, 0);
  std::vector<int> pt(m), ln(m);
  for (int p = 0; p < m; ++p) pt[p] = fresh(type_of(c + 1), 1);
  for (int x = 0; x < m; ++x) ln[x] = fresh(type_of(c + 2), 1);
  const LabelledPlane& P0 = plane[c];
  for (int x = 0; x < m; ++x)
    for (int p : P0.points_on(x)) add_chamber(O, pt[p], ln[x], P0.label(x, p));

  if (r == 2) {
    std::vector<detail::ResidueEmbedding> emb;
    // residues of the sphere-1 points: O is line 0, the lines through p sit on it by label
    for (int p = 0; p < m; ++p) {
      const LabelledPlane& R = plane[type_of(c + 1)];
      detail::ResidueEmbedding e{pt[p], type_of(c + 1), std::vector<int>(m, -1), std::vector<int>(m, -1)};
      e.line_ids[0] = O;
      for (int u : R.points_on(0)) e.point_ids[u] = ln[P0.line_with_label(p, R.label(0, u))];
      for (int u = 0; u < m; ++u)
        if (e.point_ids[u] < 0) e.point_ids[u] = fresh(type_of(c + 2), 2);
      for (int l = 1; l < m; ++l) e.line_ids[l] = fresh(c, 2);
      emb.push_back(std::move(e));
    }
    // residues of the sphere-1 lines: O is point 0, the points of x pass through it by label
    for (int x = 0; x < m; ++x) {
      const LabelledPlane& R = plane[type_of(c + 2)];
      detail::ResidueEmbedding e{ln[x], type_of(c + 2), std::vector<int>(m, -1), std::vector<int>(m, -1)};
      e.point_ids[0] = O;
      for (int l : R.lines_through(0)) e.line_ids[l] = pt[P0.point_with_label(x, R.label(l, 0))];
      for (int l = 0; l < m; ++l)
        if (e.line_ids[l] < 0) e.line_ids[l] = fresh(type_of(c + 1), 2);
      for (int u = 1; u < m; ++u) e.point_ids[u] = fresh(c, 2);
      emb.push_back(std::move(e));
    }
    // glue each sphere-1 panel (pt[p], ln[x]) by matching chamber labels
    const LabelledPlane& Rp = plane[type_of(c + 1)];
    const LabelledPlane& Rl = plane[type_of(c + 2)];
    for (int x = 0; x < m; ++x)
      for (int p : P0.points_on(x)) {
        const auto& ep = emb[p];
        const auto& el = emb[m + x];
        const int u = static_cast<int>(std::find(ep.point_ids.begin(), ep.point_ids.end(), ln[x]) - ep.point_ids.begin());
        const int lam = static_cast<int>(std::find(el.line_ids.begin(), el.line_ids.end(), pt[p]) - el.line_ids.begin());
        std::vector<int> by_label_p(q + 1, -1), by_label_l(q + 1, -1);
        for (int l : Rp.lines_through(u)) by_label_p[Rp.label(l, u)] = ep.line_ids[l];
        for (int w : Rl.points_on(lam)) by_label_l[Rl.label(lam, w)] = el.point_ids[w];
        for (int j = 0; j <= q; ++j) {
          const int a = by_label_p[j], b = by_label_l[j];
          if (a < 0 || b < 0 || ((a == O) != (b == O)))
            throw ConsistencyError("build_ball: gluing inconsistency at panel (" + std::to_string(pt[p]) + "," +
                                   std::to_string(ln[x]) + ")");
          ds.unite(a, b);
        }
      }
    for (const auto& e : emb) {
      const LabelledPlane& R = plane[e.type];
      for (int l = 0; l < m; ++l)
        for (int u : R.points_on(l)) add_chamber(e.vertex, e.point_ids[u], e.line_ids[l], R.label(l, u));
    }
  }

  // renumber roots in order of first appearance
  const int n = static_cast<int>(ptype.size());
  std::vector<int> final_id(n, -1);
  BallComplex B;
  B.q = q;
  B.radius = r;
  B.center = 0;
  B.matrix = M;
  for (int i = 0; i < n; ++i) {
    const int root = ds.find(i);
    if (final_id[root] < 0) {
      final_id[root] = static_cast<int>(B.vertices.size());
      B.vertices.push_back({ptype[root], pdist[root]});
    }
    final_id[i] = final_id[root];
  }
  std::map<std::array<int, 3>, int> seen;
  for (auto ch : raw) {
    for (int& x : ch.v) x = final_id[x];
    auto [it, inserted] = seen.emplace(ch.v, ch.label);
    if (!inserted && it->second != ch.label)
      throw ConsistencyError("build_ball: gluing inconsistency at panel (" + std::to_string(ch.v[(c + 1) % 3]) + "," +
                             std::to_string(ch.v[(c + 2) % 3]) + ")");
    if (inserted) B.chambers.push_back(ch);
  }
  B.canonicalize();
  return B;
}

// ---------------------------------------------------------------------------
// Residues and verification

struct Residue {
  int vertex = 0;
  std::vector<int> points;  // ball vertex ids, type + 1
  std::vector<int> lines;   // type + 2
  LabelledPlane plane;
};

inline Residue residue_of(const BallComplex& B, int x) {
  Residue R;
  R.vertex = x;
  const int t = B.vertices.at(x).type;
  for (int y : B.neighbors(x)) {
    const int ty = B.vertices[y].type;
    if (ty == (t + 1) % 3) R.points.push_back(y);
    if (ty == (t + 2) % 3) R.lines.push_back(y);
  }
  auto pos = [](const std::vector<int>& v, int y) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), y) - v.begin());
  };
  std::vector<std::vector<std::pair<int, int>>> lines(R.lines.size());
  for (const auto& ch : B.chambers) {
    if (ch.v[t] != x) continue;
    lines[pos(R.lines, ch.v[(t + 2) % 3])].emplace_back(pos(R.points, ch.v[(t + 1) % 3]), ch.label);
  }
  R.plane = LabelledPlane::from_lines(B.q, static_cast<int>(R.points.size()), std::move(lines));
  return R;
}

/// Label-preserving isomorphism A -> B sending point a to point b, propagated
/// through flag labels; nullopt if the propagation fails.
inline std::optional<Collineation> labelled_isomorphism(const LabelledPlane& A, const LabelledPlane& B, int a, int b) {
  if (A.num_points() != B.num_points() || A.num_lines() != B.num_lines()) return std::nullopt;
  Collineation f{std::vector<int>(A.num_points(), -1), std::vector<int>(A.num_lines(), -1), true};
  std::vector<int> pinv(B.num_points(), -1), linv(B.num_lines(), -1);
  std::queue<std::pair<bool, int>> work;  // (is_point, index)
  auto set = [&](std::vector<int>& fwd, std::vector<int>& inv, bool is_point, int x, int y) {
    if (y < 0) return false;
    if (fwd[x] == y) return true;
    if (fwd[x] != -1 || inv[y] != -1) return false;
    fwd[x] = y;
    inv[y] = x;
    work.emplace(is_point, x);
    return true;
  };
  if (!set(f.point_map, pinv, true, a, b)) return std::nullopt;
  while (!work.empty()) {
    auto [is_point, x] = work.front();
    work.pop();
    if (is_point) {
      for (int l : A.lines_through(x))
        if (!set(f.line_map, linv, false, l, B.line_with_label(f.point_map[x], A.label(l, x)))) return std::nullopt;
    } else {
      for (int p : A.points_on(x))
        if (!set(f.point_map, pinv, true, p, B.point_with_label(f.line_map[x], A.label(x, p)))) return std::nullopt;
    }
  }
  if (std::count(f.point_map.begin(), f.point_map.end(), -1) || std::count(f.line_map.begin(), f.line_map.end(), -1))
    return std::nullopt;
  for (int l = 0; l < A.num_lines(); ++l)
    for (int p = 0; p < A.num_points(); ++p) {
      if (A.incident(l, p) != B.incident(f.line_map[l], f.point_map[p])) return std::nullopt;
      if (A.incident(l, p) && A.label(l, p) != B.label(f.line_map[l], f.point_map[p])) return std::nullopt;
    }
  return f;
}

struct ResidueStatus {
  int vertex = 0;
  bool plane_ok = false;
  bool isomorphic = false;  // to the plane of the column of its type, labels included; needs B.matrix
};

struct PanelStatus {
  int a = 0, b = 0;
  int chamber_count = 0;
  bool interior = false;   // an endpoint lies strictly inside the ball
  bool labels_ok = true;   // interior: labels form a bijection onto {0..q}
};

struct BallReport {
  bool types_ok = true;
  bool edges_ok = true;
  std::vector<ResidueStatus> residues;
  std::vector<PanelStatus> panels;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

inline BallReport verify_ball(const BallComplex& B) {
  BallReport rep;
  const int q = B.q;
  const int nv = static_cast<int>(B.vertices.size());
  for (const auto& ch : B.chambers)
    for (int t = 0; t < 3; ++t)
      if (ch.v[t] < 0 || ch.v[t] >= nv || B.vertices[ch.v[t]].type != t) rep.types_ok = false;
  if (!rep.types_ok) {
    rep.failures.push_back("chamber without one vertex of each type");
    return rep;
  }
  std::map<std::pair<int, int>, std::vector<int>> labels_on;
  for (const auto& ch : B.chambers)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) labels_on[std::minmax(ch.v[i], ch.v[j])].push_back(ch.label);
  for (auto [a, b] : B.edges)
    if (!labels_on.count({a, b})) {
      rep.edges_ok = false;
      rep.failures.push_back("panel (" + std::to_string(a) + "," + std::to_string(b) + ") lies in no chamber");
    }
  if (labels_on.size() != B.edges.size()) {
    rep.edges_ok = false;
    rep.failures.push_back("chamber side missing from the edge list");
  }
  for (auto& [e, labs] : labels_on) {
    PanelStatus ps{e.first, e.second, static_cast<int>(labs.size())};
    ps.interior = std::min(B.vertices[e.first].distance, B.vertices[e.second].distance) < B.radius;
    if (ps.interior) {
      std::sort(labs.begin(), labs.end());
      std::vector<int> want(q + 1);
      std::iota(want.begin(), want.end(), 0);
      ps.labels_ok = labs == want;
      if (!ps.labels_ok)
        rep.failures.push_back("panel (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") has " +
                               std::to_string(labs.size()) + " chambers without label bijection");
    }
    rep.panels.push_back(ps);
  }
  for (int x = 0; x < nv; ++x) {
    if (B.vertices[x].distance >= B.radius) continue;
    const Residue R = residue_of(B, x);
    ResidueStatus rs{x};
    const int m = plane_modulus(q);
    rs.plane_ok = R.plane.num_points() == m && R.plane.num_lines() == m && verify_plane_axioms(R.plane);
    if (rs.plane_ok && B.matrix) {
      const auto ref = plane_from_vector(B.matrix->column(B.vertices[x].type));
      rs.isomorphic = labelled_isomorphism(R.plane, ref, 0, 0).has_value();
    }
    if (!rs.plane_ok) rep.failures.push_back("residue of vertex " + std::to_string(x) + " is not a projective plane");
    else if (B.matrix && !rs.isomorphic)
      rep.failures.push_back("residue of vertex " + std::to_string(x) + " does not match its labelled plane");
    rep.residues.push_back(rs);
  }
  return rep;
}

/// True if `vmap` is a type-preserving bijection carrying chambers to chambers,
/// with label l sent to label_map[l] (identity when empty).
inline bool is_ball_isomorphism(const BallComplex& A, const BallComplex& B, const std::vector<int>& vmap,
                                const std::vector<int>& label_map = {}) {
  if (vmap.size() != A.vertices.size() || A.vertices.size() != B.vertices.size() || A.chambers.size() != B.chambers.size())
    return false;
  std::vector<char> hit(B.vertices.size(), 0);
  for (std::size_t x = 0; x < vmap.size(); ++x) {
    const int y = vmap[x];
    if (y < 0 || y >= static_cast<int>(B.vertices.size()) || hit[y]) return false;
    if (A.vertices[x].type != B.vertices[y].type) return false;
    hit[y] = 1;
  }
  for (const auto& ch : A.chambers) {
    const int k = B.find_chamber(vmap[ch.v[0]], vmap[ch.v[1]], vmap[ch.v[2]]);
    const int want = label_map.empty() ? ch.label : label_map.at(ch.label);
    if (k < 0 || B.chambers[k].label != want) return false;
  }
  return true;
}

/// Isomorphism A -> B matching chambers across panels by label (renamed by
/// label_map), anchored at the centers.
inline std::optional<std::vector<int>> find_ball_isomorphism(const BallComplex& A, const BallComplex& B,
                                                             const std::vector<int>& label_map = {}) {
  if (A.vertices.size() != B.vertices.size() || A.chambers.size() != B.chambers.size()) return std::nullopt;
  auto relabel = [&](int l) { return label_map.empty() ? l : label_map.at(l); };
  auto panel_index = [](const BallComplex& X) {
    std::map<std::pair<int, int>, std::vector<int>> idx;
    for (std::size_t i = 0; i < X.chambers.size(); ++i)
      for (int s = 0; s < 3; ++s) {
        const auto& v = X.chambers[i].v;
        idx[std::minmax(v[(s + 1) % 3], v[(s + 2) % 3])].push_back(static_cast<int>(i));
      }
    return idx;
  };
  const auto pa = panel_index(A), pb = panel_index(B);
  int start = -1;
  for (std::size_t i = 0; i < A.chambers.size() && start < 0; ++i)
    if (A.chambers[i].v[A.center_type()] == A.center) start = static_cast<int>(i);
  if (start < 0) return std::nullopt;
  for (std::size_t cand = 0; cand < B.chambers.size(); ++cand) {
    const auto& cb = B.chambers[cand];
    if (cb.v[A.center_type()] != B.center || cb.label != relabel(A.chambers[start].label)) continue;
    std::vector<int> vmap(A.vertices.size(), -1), cmap(A.chambers.size(), -1);
    bool ok = true;
    auto map_chamber = [&](int ia, int ib) {
      if (cmap[ia] >= 0) return cmap[ia] == ib;
      cmap[ia] = ib;
      for (int t = 0; t < 3; ++t) {
        const int x = A.chambers[ia].v[t], y = B.chambers[ib].v[t];
        if (vmap[x] >= 0 && vmap[x] != y) return false;
        vmap[x] = y;
      }
      return true;
    };
    std::queue<int> work;
    ok = map_chamber(start, static_cast<int>(cand));
    work.push(start);
    while (ok && !work.empty()) {
      const int ia = work.front();
      work.pop();
      const auto& va = A.chambers[ia].v;
      const auto& vb = B.chambers[cmap[ia]].v;
      for (int s = 0; s < 3 && ok; ++s) {
        const auto& na = pa.at(std::minmax(va[(s + 1) % 3], va[(s + 2) % 3]));
        const auto& nb = pb.at(std::minmax(vb[(s + 1) % 3], vb[(s + 2) % 3]));
        for (int ja : na) {
          int jb = -1;
          for (int k : nb)
            if (B.chambers[k].label == relabel(A.chambers[ja].label)) jb = k;
          const bool fresh = cmap[ja] < 0;
          if (jb < 0 || !map_chamber(ja, jb)) {
            ok = false;
            break;
          }
          if (fresh) work.push(ja);
        }
      }
    }
    if (ok && is_ball_isomorphism(A, B, vmap, label_map)) return vmap;
  }
  return std::nullopt;
}

/// Vertex map of the r = 1 ball induced by the translation x -> x + 1 of the center plane.
inline std::vector<int> singer_shift_of_ball(const BallComplex& B) {
  detail::require(B.radius == 1, "singer_shift_of_ball: radius must be 1");
  const int m = plane_modulus(B.q);
  std::vector<int> vmap(B.vertices.size());
  vmap[0] = 0;
  for (int p = 0; p < m; ++p) {
    vmap[1 + p] = 1 + (p + 1) % m;
    vmap[1 + m + p] = 1 + m + (p + 1) % m;
  }
  return vmap;
}

// ---------------------------------------------------------------------------
// Hjelmslev planes

struct HjelmslevPlane {
  int level = 1;
  std::vector<std::pair<int, int>> points;  // (v1, v2); v2 = -1 at level 1
  std::vector<std::pair<int, int>> lines;
  IncidenceGeometry geometry;               // flag labels pack the defining chamber labels
  std::vector<int> pi1_point;               // index of the level-1 point
  std::vector<int> pi1_line;
  IncidenceGeometry base;                   // level-1 plane

  int num_points() const { return static_cast<int>(points.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }
  bool incident(int line, int point) const { return geometry.incident(line, point); }
  bool neighboring_points(int a, int b) const { return pi1_point[a] == pi1_point[b]; }
  bool neighboring_lines(int a, int b) const { return pi1_line[a] == pi1_line[b]; }
  bool near(int point, int line) const { return base.incident(pi1_line[line], pi1_point[point]); }
};

inline HjelmslevPlane extract_hjelmslev(const BallComplex& B, int n) {
  detail::require(n == 1 || n == 2, "extract_hjelmslev: level must be 1 or 2");
  detail::require(B.radius >= n, "extract_hjelmslev: ball radius too small");
  const int c = B.center_type();
  const int O = B.center;
  const Residue R = residue_of(B, O);
  HjelmslevPlane H;
  H.level = n;
  H.base = R.plane.geometry();
  if (n == 1) {
    for (int p : R.points) H.points.emplace_back(p, -1);
    for (int l : R.lines) H.lines.emplace_back(l, -1);
    H.geometry = R.plane.geometry();
    H.pi1_point.resize(R.points.size());
    std::iota(H.pi1_point.begin(), H.pi1_point.end(), 0);
    H.pi1_line.resize(R.lines.size());
    std::iota(H.pi1_line.begin(), H.pi1_line.end(), 0);
    return H;
  }
  const int base = B.q + 1;
  for (std::size_t i = 0; i < R.points.size(); ++i)
    for (int y : B.neighbors(R.points[i]))
      if (B.vertices[y].distance == 2 && B.vertices[y].type == (c + 2) % 3) {
        H.points.emplace_back(R.points[i], y);
        H.pi1_point.push_back(static_cast<int>(i));
      }
  std::map<std::pair<int, int>, int> line_index;
  for (std::size_t i = 0; i < R.lines.size(); ++i)
    for (int y : B.neighbors(R.lines[i]))
      if (B.vertices[y].distance == 2 && B.vertices[y].type == (c + 1) % 3) {
        line_index[{R.lines[i], y}] = static_cast<int>(H.lines.size());
        H.lines.emplace_back(R.lines[i], y);
        H.pi1_line.push_back(static_cast<int>(i));
      }
  std::vector<std::vector<std::pair<int, int>>> incid(H.lines.size());
  for (std::size_t P = 0; P < H.points.size(); ++P) {
    const auto [p1, p2] = H.points[P];
    for (const auto& ch : B.chambers) {
      // chamber {p1, l1, w} with w != O of the center's type
      if (ch.v[(c + 1) % 3] != p1 || ch.v[c] == O) continue;
      const int l1 = ch.v[(c + 2) % 3], w = ch.v[c];
      const int c0 = B.find_chamber(O, p1, l1);
      const int c2 = B.find_chamber(p1, p2, w);
      if (c0 < 0 || c2 < 0) continue;
      for (const auto& ch3 : B.chambers) {
        if (ch3.v[(c + 2) % 3] != l1 || ch3.v[c] != w) continue;
        const int l2 = ch3.v[(c + 1) % 3];
        auto it = line_index.find({l1, l2});
        if (it == line_index.end()) continue;
        const int label = ((B.chambers[c0].label * base + ch.label) * base + B.chambers[c2].label) * base + ch3.label;
        incid[it->second].emplace_back(static_cast<int>(P), label);
      }
    }
  }
  H.geometry = IncidenceGeometry(static_cast<int>(H.points.size()), std::move(incid));
  return H;
}

inline constexpr int kMaxH2SearchQ = 2;

struct H2Elation {
  int center = 0;  // point
  int axis = 0;    // line
  GeometryMap map;
  bool neighbors_fixed = true;  // fixes points neighboring the center and lines neighboring the axis
  bool free_off_axis = true;    // fixes no point not near the axis, no line not near the center
};

struct H2Summary {
  std::size_t group_order = 0;
  bool identity_found = false;
  std::size_t flags = 0;
  std::size_t elations = 0;  // nontrivial, summed over flags
  std::vector<H2Elation> nontrivial;
  bool free_action_ok = true;  // each flag's elation group acts freely on the test point sets

  bool lemmas_ok() const {
    return free_action_ok && std::all_of(nontrivial.begin(), nontrivial.end(), [](const H2Elation& e) {
             return e.neighbors_fixed && e.free_off_axis;
           });
  }
};

namespace detail {

inline std::vector<std::uint8_t> neighbor_relation(const HjelmslevPlane& H) {
  const int n = H.num_points();
  std::vector<std::uint8_t> rel(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rel[a * n + b] = H.neighboring_points(a, b);
  return rel;
}

inline bool preserves_line_neighbors(const HjelmslevPlane& H, const GeometryMap& g) {
  for (int a = 0; a < H.num_lines(); ++a)
    for (int b = a + 1; b < H.num_lines(); ++b)
      if (H.neighboring_lines(a, b) != H.neighboring_lines(g.line[a], g.line[b])) return false;
  return true;
}

inline bool is_identity_map(const GeometryMap& g) {
  for (std::size_t i = 0; i < g.point.size(); ++i)
    if (g.point[i] != static_cast<int>(i)) return false;
  for (std::size_t i = 0; i < g.line.size(); ++i)
    if (g.line[i] != static_cast<int>(i)) return false;
  return true;
}

}  // namespace detail

/// Collineations of the level-2 plane at the center (respecting neighbor classes),
/// and the elation lemmas checked on every flag.
inline H2Summary h2_collineations_fixing_center(const BallComplex& B, bool labels_only) {
  detail::require_cap(B.q <= kMaxH2SearchQ, "h2_collineations_fixing_center: q exceeds cap 2");
  const HjelmslevPlane H = extract_hjelmslev(B, 2);
  const auto rel = detail::neighbor_relation(H);
  H2Summary S;

  SearchOptions all;
  all.labels_only = labels_only;
  all.point_relation = &rel;
  for (const auto& g : find_collineations(H.geometry, all)) {
    if (!detail::preserves_line_neighbors(H, g)) continue;
    ++S.group_order;
    if (detail::is_identity_map(g)) S.identity_found = true;
  }

  for (int l = 0; l < H.num_lines(); ++l)
    for (int P : H.geometry.points_on(l)) {
      ++S.flags;
      SearchOptions opt = all;
      for (int x : H.geometry.points_on(l)) opt.fixed_points.emplace_back(x, x);
      for (int k : H.geometry.lines_through(P)) opt.fixed_lines.emplace_back(k, k);
      std::vector<GeometryMap> group;
      for (auto& g : find_collineations(H.geometry, opt))
        if (detail::preserves_line_neighbors(H, g)) group.push_back(std::move(g));
      for (const auto& g : group) {
        if (detail::is_identity_map(g)) continue;
        H2Elation e{P, l, g};
        for (int x = 0; x < H.num_points(); ++x) {
          if (H.neighboring_points(x, P) && g.point[x] != x) e.neighbors_fixed = false;
          if (!H.near(x, l) && g.point[x] == x) e.free_off_axis = false;
        }
        for (int k = 0; k < H.num_lines(); ++k) {
          if (H.neighboring_lines(k, l) && g.line[k] != k) e.neighbors_fixed = false;
          if (!H.near(P, k) && g.line[k] == k) e.free_off_axis = false;
        }
        ++S.elations;
        S.nontrivial.push_back(std::move(e));
      }
      // free action on the points of m not neighboring P, for each m through P not neighboring l
      for (int mline : H.geometry.lines_through(P)) {
        if (H.neighboring_lines(mline, l)) continue;
        for (int x : H.geometry.points_on(mline)) {
          if (H.neighboring_points(x, P)) continue;
          std::set<int> images;
          for (const auto& g : group) images.insert(g.point[x]);
          if (images.size() != group.size()) S.free_action_ok = false;
        }
      }
    }
  return S;
}

}  // namespace tribuild
