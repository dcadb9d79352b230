// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tribuild/tribuild.hpp"

using namespace tribuild;

namespace {

struct Result {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Result singer_generation() {
  Result r;
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto raw = singer_difference_set(q);
    const auto canon = canonical_desarguesian_set(q);
    r.require(is_difference_set(raw.elements(), q) && is_difference_set(canon.elements(), q),
              "q=" + std::to_string(q) + " not a difference set");
    r.require(verify_plane_axioms(plane_from_vector(DifferenceVector::make(q, canon.elements()))),
              "q=" + std::to_string(q) + " plane axioms");
  }
  return r;
}

Result oracle_equivalence() {
  Result r;
  for (int q : {2, 3}) {
    std::set<std::vector<int>> all;
    for (const auto& d : all_difference_sets(q)) all.insert(d.elements());
    const auto orbit = agl_orbit(singer_difference_set(q));
    r.require(all == orbit, "q=" + std::to_string(q) + ": brute force differs from the AGL orbit");
    r.require(all.count(singer_difference_set(q).elements()) == 1, "Singer set missing");
    r.detail += (r.detail.empty() ? "" : ", ") + std::string("q=") + std::to_string(q) + ": " +
                std::to_string(all.size()) + " sets";
  }
  return r;
}

Result stabilizer_orders() {
  Result r;
  for (auto [q, want] : std::vector<std::pair<int, std::size_t>>{{2, 3}, {3, 3}, {4, 6}, {8, 9}}) {
    const auto got = set_stabilizer_in_agl(canonical_desarguesian_set(q)).size();
    r.require(got == want, "q=" + std::to_string(q) + ": " + std::to_string(got));
  }
  return r;
}

Result pencil_groups() {
  Result r;
  for (auto [q, want] : std::vector<std::pair<int, std::size_t>>{{2, 6}, {3, 24}, {4, 120}, {5, 120}}) {
    const auto P = plane_from_vector(DifferenceVector::make(q, canonical_desarguesian_set(q).elements()));
    const auto G = pencil_action(P, 0);
    r.require(G.order() == want, "q=" + std::to_string(q) + " order " + std::to_string(G.order()));
    r.require(is_conjugate(G, pgammal2_model(q)).has_value(), "q=" + std::to_string(q) + " not conjugate to PGammaL");
    if (q <= 3)
      for (int x = 1; x < P.num_points(); ++x)
        r.require(pencil_action(P, x) == G, "q=" + std::to_string(q) + " depends on base point " + std::to_string(x));
  }
  return r;
}

Result self_normalization() {
  Result r;
  for (int q : {4, 5}) {
    r.require(normalizer_in_sym(pgammal2_model(q)) == pgammal2_model(q), "q=" + std::to_string(q) + " PGammaL");
    r.require(normalizer_in_sym(pgl2_model(q)) == pgammal2_model(q), "q=" + std::to_string(q) + " PGL");
  }
  return r;
}

Result bound_table() {
  Result r;
  const std::vector<std::uint64_t> want{4, 64, 400, 1600};
  for (int q = 2; q <= 5; ++q) r.require(bound_B(q) == want[q - 2], "bound_B(" + std::to_string(q) + ")");
  for (std::uint64_t q = 2; q <= 1000; ++q) {
    try {
      bound_B(q);
    } catch (const ConsistencyError&) {
      r.require(false, "q(q^2-1) not divisible by 3 at q=" + std::to_string(q));
    }
  }
  return r;
}

Result limit_corollary() {
  Result r;
  const auto rows = ratio_table({2, 3, 4, 5, 7, 8, 9, 11});
  std::string shown;
  for (const auto& row : rows) shown += (shown.empty() ? "" : " ") + row.ratio_decimal();
  // strictly decreasing from q=4 on; q=2 and q=3 tie at 18
  for (std::size_t i = 3; i < rows.size(); ++i)
    r.require(rows[i].ratio < rows[i - 1].ratio, "not decreasing at q=" + std::to_string(rows[i].q));
  r.require(rows.back().ratio < Rational(1, 1000000), "final ratio not below 1e-6");
  r.require(lower_A(2) == Rational(2, 9), "A(2) != 2/9");
  r.detail = r.ok ? "B/A = " + shown : r.detail + " (B/A = " + shown + ")";
  return r;
}

Result census_soundness() {
  Result r;
  const unsigned threads = worker_threads();
  const auto c2 = classify(2, {threads, false, 10});
  r.require(c2.total == 36 && c2.inconclusive() == c2.classes.size(), "q=2 census");
  const auto c3 = classify(3, {threads, false, 10});
  r.require(c3.total == 576, "q=3 total");
  const auto c5 = classify(5, {threads, false, 10});
  r.require(c5.total == 518400, "q=5 total");
  r.require(c5.inconclusive() <= bound_B(5), "q=5 candidates exceed 1600");
  for (const auto* c : {&c2, &c3, &c5})
    for (const auto& ec : c->classes)
      r.require(ec.verdict_invariant && ec.sampled == std::min<std::size_t>(10, ec.orbit_size),
                "verdict not invariant at q=" + std::to_string(c->q));
  if (r.ok)
    r.detail = "q=5: " + std::to_string(c5.classes.size()) + " classes, " + std::to_string(c5.certified()) +
               " certified, " + std::to_string(c5.inconclusive()) + " candidates";
  return r;
}

Result certificate_equivalence() {
  Result r;
  const auto model = DesarguesianModel::make(5);
  const auto& d = model.canonical_set();
  const auto g0 = *model.pencil_group(DifferenceVector::make(5, d.elements()));
  const auto perms = all_permutations(6);
  const std::size_t np = perms.size();
  std::vector<char> bad(np, 0);
  detail::parallel_for(np, worker_threads(), [&](std::size_t i) {
    for (const auto& a2 : perms) {
      const NormalizedMatrix n{d, perms[i], a2};
      const bool certified = certify_exotic(n.decode(), model).outcome == Outcome::CertifiedExotic;
      if (fast_necessary_condition(n, g0) == certified) bad[i] = 1;
    }
  });
  r.require(std::count(bad.begin(), bad.end(), 1) == 0, "mismatch on some alpha1 rows");
  if (r.ok) r.detail = "518400 matrices";
  return r;
}

Result elation_laws() {
  Result r;
  for (int q : {2, 3, 4, 5}) {
    const auto P = plane_from_vector(DifferenceVector::make(q, canonical_desarguesian_set(q).elements()));
    const bool prime = prime_power(q)->second == 1;
    for (int axis = 0; axis < P.num_lines(); ++axis)
      for (int center : P.points_on(axis)) {
        const auto E = elations_with(P, center, axis);
        if (E.size() != static_cast<std::size_t>(q)) {
          r.require(false, "q=" + std::to_string(q) + " elation group order " + std::to_string(E.size()));
          continue;
        }
        for (const auto& e : E) {
          if (e.map.is_identity()) continue;
          for (int p = 0; p < P.num_points(); ++p)
            if (e.map.point_map[p] == p && !P.incident(axis, p)) r.require(false, "fixed point off the axis");
          for (int l = 0; l < P.num_lines(); ++l)
            if (e.map.line_map[l] == l && !P.incident(l, center)) r.require(false, "fixed line off the center");
          for (int l : P.lines_through(center)) {
            if (l == axis) continue;
            const auto prof = elation_cycle_profile(P, e, l);
            if (prof.cycles * prof.length != q) r.require(false, "k*c != q");
            if (prime && prof.cycles != 1) r.require(false, "not a single q-cycle for prime q");
          }
        }
      }
  }
  return r;
}

Result ball_construction() {
  Result r;
  for (int q : {2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto v = DifferenceVector::make(q, canonical_desarguesian_set(q).elements());
    const auto B = build_ball(DifferenceMatrix::make({v, v, v}), 2);
    const auto rep = verify_ball(B);
    r.require(rep.ok(), "q=" + std::to_string(q) + " verify: " + (rep.ok() ? "" : rep.failures.front()));
    if (q == 2) {
      const auto H = extract_hjelmslev(B, 2);
      r.require(H.num_points() == 28 && H.num_lines() == 28, "H2 size");
      std::vector<int> fiber(7, 0);
      for (int p : H.pi1_point) ++fiber[p];
      r.require(std::all_of(fiber.begin(), fiber.end(), [](int n) { return n == 4; }), "fiber sizes");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(secs < 120, "q=" + std::to_string(q) + " took over 2 min");
  }
  return r;
}

Result h2_elations() {
  Result r;
  const auto v = DifferenceVector::make(2, canonical_desarguesian_set(2).elements());
  const auto S = h2_collineations_fixing_center(build_ball(DifferenceMatrix::make({v, v, v}), 2), false);
  r.require(S.identity_found, "identity not found");
  r.require(!S.nontrivial.empty(), "no nontrivial elations");
  r.require(S.lemmas_ok(), "lemma violated");
  r.detail = std::to_string(S.elations) + " nontrivial elations over " + std::to_string(S.flags) + " flags";
  return r;
}

Result determinism() {
  Result r;
  auto text = [](unsigned threads) {
    const auto c = classify(3, {threads, false, 10});
    std::ostringstream os;
    io::write_census(os, c);
    io::write_summary(os, {io::summarize(c)});
    return os.str();
  };
  r.require(text(1) == text(8), "census differs between 1 and 8 threads");
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria{
      {"singer generation", 10, singer_generation},
      {"oracle equivalence", 5, oracle_equivalence},
      {"stabilizer order 3 eta", 30, stabilizer_orders},
      {"pencil groups", 300, pencil_groups},
      {"self-normalization", 600, self_normalization},
      {"bound table", 60, bound_table},
      {"limit corollary", 60, limit_corollary},
      {"census soundness", 1800, census_soundness},
      {"certificate equivalence", 1800, certificate_equivalence},
      {"elation laws", 600, elation_laws},
      {"ball construction", 240, ball_construction},
      {"level-2 elations", 600, h2_elations},
      {"determinism", 600, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Result o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) o.require(false, "time limit exceeded");
    if (!o.ok) ++failed;
    std::printf("%s %2zu %-26s %8.2fs  %s\n", o.ok ? "PASS" : "FAIL", i + 1, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
