// tribuild: command-line front end.
//
// Exit codes: 0 success, 1 CertifiedExotic where a Moufang candidate was
// required, 2 input error, 3 size cap exceeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tribuild/tribuild.hpp"

namespace fs = std::filesystem;
using namespace tribuild;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExotic = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

DifferenceMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return io::parse_matrix(in);
  } catch (const io::ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
  return s;
}

int cmd_gen_singer(int q, bool raw, const std::string& matrix_out) {
  if (!prime_power(q)) throw InputError("gen-singer: q = " + std::to_string(q) + " is not a prime power");
  const DifferenceSet d = raw ? singer_difference_set(q) : canonical_desarguesian_set(q);
  std::cout << "q " << q << " modulus " << d.modulus() << "\n" << join(d.elements()) << "\n";
  if (!matrix_out.empty()) {
    const auto v = DifferenceVector::make(q, d.elements());
    write_file(matrix_out, io::matrix_to_string(DifferenceMatrix::make({v, v, v})));
  }
  return kExitOk;
}

int cmd_verify_ds(int q, const std::vector<int>& elems) {
  const int m = plane_modulus(q);
  for (int x : elems)
    if (x < 0 || x >= m) throw InputError("verify-ds: entry " + std::to_string(x) + " outside 0.." + std::to_string(m - 1));
  if (!is_difference_set(elems, q)) {
    std::cout << "not a perfect difference set mod " << m << "\n";
    return kExitInput;
  }
  const auto d = DifferenceSet::make(q, elems);
  std::cout << "perfect difference set mod " << m << "\n";
  std::cout << "stabilizer in AGL(1," << m << "): " << set_stabilizer_in_agl(d).size() << "\n";
  if (prime_power(q) && q <= kMaxSingerQ) {
    const bool des = find_agl_map(elems, canonical_desarguesian_set(q)).has_value();
    std::cout << "desarguesian: " << (des ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_build_plane(const std::string& file, int column, const std::string& out) {
  const auto M = read_matrix_file(file);
  if (column < 0 || column > 2) throw InputError("build-plane: column must be 0, 1 or 2");
  const auto P = plane_from_vector(M.column(column));
  const std::string text = io::to_text(P, [](std::ostream& os, const LabelledPlane& x) { io::write_plane(os, x); });
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  std::cerr << "plane of order " << M.q() << ": axioms " << (verify_plane_axioms(P) ? "ok" : "FAILED") << "\n";
  return kExitOk;
}

int cmd_certify(const std::string& file, bool require_candidate, bool by_search) {
  const auto M = read_matrix_file(file);
  detail::require_cap(M.q() <= kMaxCertifyQ, "certify: q exceeds cap 9");
  detail::require(prime_power(M.q()).has_value(), "certify: q must be a prime power");
  ExoticityVerdict v;
  if (by_search) {
    detail::require_cap(M.q() <= kMaxPlaneSearchQ, "certify --search: q exceeds cap 5");
    try {
      const auto g = local_pencil_groups_by_search(M);
      for (int t = 0; t < 3; ++t) std::cout << "G" << t << " order " << g[t].order() << "\n";
      v = verdict_from_groups(g);
    } catch (const NonDesarguesianColumn& e) {
      v = certify_exotic(M);
    }
  } else {
    const auto model = DesarguesianModel::make(M.q());
    v = certify_exotic(M, model);
    if (!v.witness || v.witness->kind != ExoticityWitness::Kind::NonDesarguesianColumn) {
      const auto g = local_pencil_groups(M, model);
      for (int t = 0; t < 3; ++t) std::cout << "G" << t << " order " << g[t].order() << "\n";
    }
  }
  std::cout << "verdict " << to_string(v.outcome) << "\n";
  if (v.witness) std::cout << "witness " << v.witness->summary() << "\n";
  return (require_candidate && v.outcome == Outcome::CertifiedExotic) ? kExitExotic : kExitOk;
}

int cmd_classify(int q, bool extra, unsigned threads, const std::string& dir) {
  const fs::path base = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(base);
  auto emit = [&](const Census& c, const std::string& suffix) {
    const auto s = io::summarize(c);
    write_file(base / ("census_q" + std::to_string(q) + suffix + ".jsonl"),
               io::to_text(c, [](std::ostream& os, const Census& x) { io::write_census(os, x); }));
    write_file(base / ("summary_q" + std::to_string(q) + suffix + ".tsv"),
               io::to_text(std::vector{s}, [](std::ostream& os, const std::vector<io::CensusSummary>& x) {
                 io::write_summary(os, x);
               }));
    std::cout << (suffix.empty() ? "coarse" : "extended") << ": " << s.total << " matrices, " << s.classes
              << " classes, " << s.certified_exotic << " certified exotic, " << s.inconclusive
              << " inconclusive (bound " << s.bound_B << ")\n";
    for (const auto& ec : c.classes)
      if (!ec.verdict_invariant) std::cout << "warning: verdict varies on a sampled orbit\n";
  };
  emit(classify(q, {threads, false, 10}), "");
  if (extra) emit(classify(q, {threads, true, 10}), "_extended");
  return kExitOk;
}

int cmd_bounds(const std::vector<int>& qs) {
  std::cout << "q\tB\tA\tB/A\n";
  for (const auto& r : ratio_table(qs)) std::cout << r.q << '\t' << r.b << '\t' << r.a << '\t' << r.ratio_decimal() << "\n";
  return kExitOk;
}

int cmd_ball(const std::string& file, int radius, const std::string& out, bool hjelmslev) {
  const auto M = read_matrix_file(file);
  const auto B = build_ball(M, radius);
  const std::string text = io::to_text(B, [](std::ostream& os, const BallComplex& x) { io::write_ball(os, x); });
  if (!out.empty()) write_file(out, text);
  const auto rep = verify_ball(B);
  std::cout << "ball q " << B.q << " radius " << B.radius << ": " << B.vertices.size() << " vertices, " << B.edges.size()
            << " edges, " << B.chambers.size() << " chambers\n";
  std::size_t interior = 0;
  for (const auto& p : rep.panels) interior += p.interior;
  std::cout << "residues checked " << rep.residues.size() << ", interior panels " << interior << "\n";
  for (const auto& f : rep.failures) std::cout << "FAIL " << f << "\n";
  std::cout << "verify " << (rep.ok() ? "ok" : "FAILED") << "\n";
  if (hjelmslev) {
    const auto H = extract_hjelmslev(B, radius);
    std::cout << "hjelmslev level " << H.level << ": " << H.num_points() << " points, " << H.num_lines() << " lines, "
              << H.geometry.flag_count() << " flags\n";
  }
  return rep.ok() ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singer cyclic lattices: planes, pencil groups, exoticity certificates, balls"};
  app.require_subcommand(1);

  int q = 0;
  bool raw = false;
  std::string matrix_out;
  auto* gen = app.add_subcommand("gen-singer", "print the canonical Desarguesian difference set");
  gen->add_option("q", q, "plane order")->required();
  gen->add_flag("--raw", raw, "print the Singer construction output instead of the canonical set");
  gen->add_option("--matrix", matrix_out, "also write the classical matrix (three equal columns) to this file");

  std::vector<int> elems;
  auto* vds = app.add_subcommand("verify-ds", "check a perfect difference set");
  vds->add_option("q", q, "plane order")->required();
  vds->add_option("elements", elems, "residues")->required();

  std::string file, out;
  int column = 0;
  auto* bp = app.add_subcommand("build-plane", "export the labelled plane of a matrix column");
  bp->add_option("matrix", file, "matrix file")->required();
  bp->add_option("--column", column, "column 0, 1 or 2");
  bp->add_option("-o,--output", out, "output file (default stdout)");

  bool require_candidate = false, by_search = false;
  auto* cert = app.add_subcommand("certify", "run the exoticity certificate on a matrix");
  cert->add_option("matrix", file, "matrix file")->required();
  cert->add_flag("--require-candidate", require_candidate, "exit 1 if the matrix is certified exotic");
  cert->add_flag("--search", by_search, "compute pencil groups by collineation search (q <= 5)");

  bool extra = false;
  unsigned threads = 1;
  std::string dir;
  auto* cls = app.add_subcommand("classify", "census of normalized matrices up to equivalence");
  cls->add_option("q", q, "plane order")->required();
  cls->add_flag("--extra-moves", extra, "also report classes under type rotation and duality");
  cls->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  cls->add_option("--out-dir", dir, "directory for census files");

  std::vector<int> qs;
  auto* bnd = app.add_subcommand("bounds", "upper bound B, lower bound A and their ratio");
  bnd->add_option("q", qs, "plane orders")->required();

  int radius = 2;
  bool hjelmslev = false;
  auto* ball = app.add_subcommand("ball", "build and verify the ball around a type-0 vertex");
  ball->add_option("matrix", file, "matrix file")->required();
  ball->add_option("-r,--radius", radius, "1 or 2");
  ball->add_option("-o,--output", out, "complex export file");
  ball->add_flag("--hjelmslev", hjelmslev, "extract the Hjelmslev plane of the same level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) return cmd_gen_singer(q, raw, matrix_out);
    if (*vds) return cmd_verify_ds(q, elems);
    if (*bp) return cmd_build_plane(file, column, out);
    if (*cert) return cmd_certify(file, require_candidate, by_search);
    if (*cls) return cmd_classify(q, extra, threads, dir);
    if (*bnd) return cmd_bounds(qs);
    if (*ball) return cmd_ball(file, radius, out, hjelmslev);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
