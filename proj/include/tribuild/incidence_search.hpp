#pragma once

// Point/line incidence geometries with optional flag labels, and a backtracking
// search for their collineations (optionally label-preserving, optionally with
// prescribed images).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tribuild/errors.hpp"

namespace tribuild {

class IncidenceGeometry {
public:
  IncidenceGeometry() = default;

  /// `lines[l]` lists the (point, label) pairs on line l; label -1 means unlabelled.
  IncidenceGeometry(int num_points, std::vector<std::vector<std::pair<int, int>>> lines)
      : num_points_(num_points), num_lines_(static_cast<int>(lines.size())) {
    inc_.assign(static_cast<std::size_t>(num_points_) * num_lines_, 0);
    label_.assign(inc_.size(), -1);
    points_on_.resize(num_lines_);
    lines_on_.resize(num_points_);
    for (int l = 0; l < num_lines_; ++l)
      for (auto [p, lab] : lines[l]) {
        detail::require(p >= 0 && p < num_points_, "IncidenceGeometry: point out of range");
        if (inc_[idx(l, p)]) continue;
        inc_[idx(l, p)] = 1;
        label_[idx(l, p)] = lab;
        points_on_[l].push_back(p);
        lines_on_[p].push_back(l);
      }
    for (auto& v : points_on_) std::sort(v.begin(), v.end());
    for (auto& v : lines_on_) std::sort(v.begin(), v.end());

    join_.assign(static_cast<std::size_t>(num_points_) * num_points_, -1);
    for (int a = 0; a < num_points_; ++a)
      for (int b = a + 1; b < num_points_; ++b) {
        const int j = unique_common(lines_on_[a], lines_on_[b]);
        join_[a * num_points_ + b] = join_[b * num_points_ + a] = j;
      }
    meet_.assign(static_cast<std::size_t>(num_lines_) * num_lines_, -1);
    for (int a = 0; a < num_lines_; ++a)
      for (int b = a + 1; b < num_lines_; ++b) {
        const int j = unique_common(points_on_[a], points_on_[b]);
        meet_[a * num_lines_ + b] = meet_[b * num_lines_ + a] = j;
      }
  }

  int num_points() const { return num_points_; }
  int num_lines() const { return num_lines_; }
  bool incident(int line, int point) const { return inc_[idx(line, point)] != 0; }
  /// Flag label, or -1 if not incident / unlabelled.
  int label(int line, int point) const { return label_[idx(line, point)]; }
  const std::vector<int>& points_on(int line) const { return points_on_[line]; }
  const std::vector<int>& lines_through(int point) const { return lines_on_[point]; }
  /// The unique line through two distinct points, or -1.
  int join(int a, int b) const { return a == b ? -1 : join_[a * num_points_ + b]; }
  /// The unique point on two distinct lines, or -1.
  int meet(int a, int b) const { return a == b ? -1 : meet_[a * num_lines_ + b]; }

  std::size_t flag_count() const {
    std::size_t n = 0;
    for (const auto& v : points_on_) n += v.size();
    return n;
  }

private:
  std::size_t idx(int line, int point) const { return static_cast<std::size_t>(line) * num_points_ + point; }

  static int unique_common(const std::vector<int>& a, const std::vector<int>& b) {
    int found = -1;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        if (found != -1) return -1;
        found = a[i];
        ++i;
        ++j;
      }
    }
    return found;
  }

  int num_points_ = 0;
  int num_lines_ = 0;
  std::vector<std::uint8_t> inc_;
  std::vector<int> label_;
  std::vector<std::vector<int>> points_on_;
  std::vector<std::vector<int>> lines_on_;
  std::vector<int> join_;
  std::vector<int> meet_;
};

/// A point bijection and a line bijection.
struct GeometryMap {
  std::vector<int> point;
  std::vector<int> line;

  friend bool operator==(const GeometryMap&, const GeometryMap&) = default;
  friend auto operator<=>(const GeometryMap&, const GeometryMap&) = default;
};

struct SearchOptions {
  bool labels_only = false;
  std::vector<std::pair<int, int>> fixed_points;  // (point, image)
  std::vector<std::pair<int, int>> fixed_lines;   // (line, image)
  /// Optional symmetric point relation (num_points^2) that images must preserve.
  const std::vector<std::uint8_t>* point_relation = nullptr;
  std::size_t max_results = static_cast<std::size_t>(-1);
};

namespace detail {

class CollineationSearch {
public:
  CollineationSearch(const IncidenceGeometry& g, const SearchOptions& opt) : g_(g), opt_(opt) {}

  std::vector<GeometryMap> run() {
    State s;
    s.pt.assign(g_.num_points(), -1);
    s.pt_inv = s.pt;
    s.ln.assign(g_.num_lines(), -1);
    s.ln_inv = s.ln;
    bool ok = true;
    for (auto [p, img] : opt_.fixed_points) ok = ok && assign_point(s, p, img);
    for (auto [l, img] : opt_.fixed_lines) ok = ok && assign_line(s, l, img);
    if (ok && propagate(s)) recurse(s);
    std::sort(results_.begin(), results_.end());
    return std::move(results_);
  }

private:
  struct State {
    std::vector<int> pt, pt_inv, ln, ln_inv;
    std::vector<int> done_pts, done_lns;  // assigned and propagated
    std::vector<int> queue_pts, queue_lns;
  };

  bool assign_point(State& s, int p, int img) {
    if (s.pt[p] == img) return true;
    if (s.pt[p] != -1 || s.pt_inv[img] != -1) return false;
    if (opt_.point_relation) {
      const auto& rel = *opt_.point_relation;
      const int n = g_.num_points();
      for (int q : s.done_pts)
        if (rel[p * n + q] != rel[img * n + s.pt[q]]) return false;
      for (int q : s.queue_pts)
        if (rel[p * n + q] != rel[img * n + s.pt[q]]) return false;
    }
    s.pt[p] = img;
    s.pt_inv[img] = p;
    s.queue_pts.push_back(p);
    return true;
  }

  bool assign_line(State& s, int l, int img) {
    if (s.ln[l] == img) return true;
    if (s.ln[l] != -1 || s.ln_inv[img] != -1) return false;
    s.ln[l] = img;
    s.ln_inv[img] = l;
    s.queue_lns.push_back(l);
    return true;
  }

  bool flag_ok(int l, int p, int li, int pi) const {
    const bool a = g_.incident(l, p);
    if (a != g_.incident(li, pi)) return false;
    if (a && opt_.labels_only && g_.label(l, p) != g_.label(li, pi)) return false;
    return true;
  }

  bool propagate(State& s) {
    while (!s.queue_pts.empty() || !s.queue_lns.empty()) {
      if (!s.queue_pts.empty()) {
        const int p = s.queue_pts.back();
        s.queue_pts.pop_back();
        const int pi = s.pt[p];
        for (int l : s.done_lns)
          if (!flag_ok(l, p, s.ln[l], pi)) return false;
        for (int q : s.done_pts) {
          const int j = g_.join(p, q);
          const int ji = g_.join(pi, s.pt[q]);
          if ((j < 0) != (ji < 0)) return false;
          if (j >= 0 && !assign_line(s, j, ji)) return false;
        }
        s.done_pts.push_back(p);
      } else {
        const int l = s.queue_lns.back();
        s.queue_lns.pop_back();
        const int li = s.ln[l];
        for (int p : s.done_pts)
          if (!flag_ok(l, p, li, s.pt[p])) return false;
        for (int k : s.done_lns) {
          const int x = g_.meet(l, k);
          const int xi = g_.meet(li, s.ln[k]);
          if ((x < 0) != (xi < 0)) return false;
          if (x >= 0 && !assign_point(s, x, xi)) return false;
        }
        s.done_lns.push_back(l);
      }
    }
    return true;
  }

  bool verify(const State& s) const {
    for (int l = 0; l < g_.num_lines(); ++l)
      for (int p = 0; p < g_.num_points(); ++p)
        if (!flag_ok(l, p, s.ln[l], s.pt[p])) return false;
    return true;
  }

  /// Returns false once max_results is reached.
  bool recurse(const State& s) {
    const auto free_pt = std::find(s.pt.begin(), s.pt.end(), -1);
    if (free_pt != s.pt.end()) {
      const int p = static_cast<int>(free_pt - s.pt.begin());
      for (int img = 0; img < g_.num_points(); ++img) {
        if (s.pt_inv[img] != -1) continue;
        State t = s;
        if (assign_point(t, p, img) && propagate(t) && !recurse(t)) return false;
      }
      return true;
    }
    const auto free_ln = std::find(s.ln.begin(), s.ln.end(), -1);
    if (free_ln != s.ln.end()) {
      const int l = static_cast<int>(free_ln - s.ln.begin());
      for (int img = 0; img < g_.num_lines(); ++img) {
        if (s.ln_inv[img] != -1) continue;
        State t = s;
        if (assign_line(t, l, img) && propagate(t) && !recurse(t)) return false;
      }
      return true;
    }
    if (verify(s)) results_.push_back({s.pt, s.ln});
    return results_.size() < opt_.max_results;
  }

  const IncidenceGeometry& g_;
  const SearchOptions& opt_;
  std::vector<GeometryMap> results_;
};

}  // namespace detail

/// All collineations of `g` compatible with `opt`, sorted.
inline std::vector<GeometryMap> find_collineations(const IncidenceGeometry& g, const SearchOptions& opt = {}) {
  return detail::CollineationSearch(g, opt).run();
}

}  // namespace tribuild
