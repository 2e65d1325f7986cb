// Acceptance suite: one PASS/FAIL line per criterion. Criterion 11 is a
// hardware-dependent timing check and only warns.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "regbmm/regbmm.hpp"

using namespace regbmm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Instance {
  BoolMatrix a;
  BoolMatrix b;
  unsigned d = 2;
};

const std::vector<std::size_t> kParts{16, 32, 64};
const std::vector<Rational> kDensities{Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(9, 10)};

// The shared grid for the decomposition criteria: every (part, density, d)
// combination at least once, then seeded draws.
Instance grid_instance(unsigned i) {
  Rng rng(1000 + i);
  Instance inst;
  std::size_t nx = kParts[i % 3];
  std::size_t ny = kParts[(i / 3) % 3];
  std::size_t nz = kParts[rng.below(3)];
  if (i >= 36) {
    nx = kParts[rng.below(3)];
    ny = kParts[rng.below(3)];
  }
  const Rational p = kDensities[i < 36 ? (i / 9) % 4 : rng.below(4)];
  inst.d = 2 + (i < 36 ? i % 3 : static_cast<unsigned>(rng.below(3)));
  inst.a = random_matrix(nx, ny, p, rng);
  inst.b = random_matrix(ny, nz, p, rng);
  return inst;
}

TripartiteGraph random_parts(Rng& rng, std::size_t max_part) {
  const std::size_t nx = 1 + rng.below(max_part);
  const std::size_t ny = 1 + rng.below(max_part);
  const std::size_t nz = 1 + rng.below(max_part);
  const Rational pa(1 + rng.below(19), 20);
  const Rational pb(1 + rng.below(19), 20);
  const Rational pc(1 + rng.below(19), 20);
  return TripartiteGraph(random_matrix(nx, ny, pa, rng), random_matrix(ny, nz, pb, rng),
                         random_matrix(nx, nz, pc, rng));
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

Outcome ab_exactness() {
  Outcome o;
  std::size_t pieces = 0;
  for (unsigned i = 0; i < 100; ++i) {
    const Instance inst = grid_instance(i);
    const auto ps = ab_decomposition(inst.a, inst.b, Rational(1, 160), inst.d);
    pieces += ps.size();
    const CountMatrix sum = ab_count_sum(ps, inst.a.rows(), inst.b.cols());
    const auto expect = oracle::count_product(inst.a, inst.b);
    for (std::size_t x = 0; x < inst.a.rows(); ++x) {
      for (std::size_t z = 0; z < inst.b.cols(); ++z) {
        if (sum.at(x, z) != expect[x][z]) fail(o, "instance " + std::to_string(i) + ": 2-path counts differ");
      }
    }
    const BigInt bound = BigInt(2) * (inst.d + 2) * (inst.d + 2) * inst.a.rows() * inst.a.cols() * inst.b.cols();
    if (ab_volume(ps) > bound) fail(o, "instance " + std::to_string(i) + ": volume bound");
  }
  if (o.pass) o.detail = "100 instances, " + std::to_string(pieces) + " pieces";
  return o;
}

Outcome a_decomposition_grid() {
  Outcome o;
  std::size_t regular = 0;
  std::size_t sparse = 0;
  for (unsigned i = 0; i < 100; ++i) {
    const Instance inst = grid_instance(i);
    const BoolMatrix& a = inst.a;
    const Rational eps(1, 160);
    const auto ps = a_decomposition(a, eps, inst.d);
    std::vector<std::uint32_t> cover(a.rows() * a.cols(), 0);
    BigInt area = 0;
    for (const auto& p : ps) {
      area += BigInt(p.rows.size()) * p.cols.size();
      for (std::size_t r = 0; r < p.rows.size(); ++r) {
        for (std::size_t c = 0; c < p.cols.size(); ++c) {
          if (p.matrix.get(r, c)) ++cover[p.rows[r] * a.cols() + p.cols[c]];
        }
      }
      if (p.cert == ACert::Sparse) {
        ++sparse;
        if (!(p.matrix.empty() || leq_pow2_neg(density(p.matrix), inst.d))) fail(o, "sparse piece too dense");
      } else {
        ++regular;
        if (check_regular_min_degree(p.matrix, eps, inst.d, kDefaultCostCap) != CertCheck::Pass) {
          fail(o, "instance " + std::to_string(i) + ": regular piece fails exact re-verification");
        }
      }
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (cover[r * a.cols() + c] != (a.get(r, c) ? 1U : 0U)) fail(o, "pieces do not partition A");
      }
    }
    if (area > BigInt(inst.d + 2) * a.rows() * a.cols()) fail(o, "area bound");
  }
  if (o.pass) o.detail = std::to_string(regular) + " regular and " + std::to_string(sparse) + " sparse pieces";
  return o;
}

Outcome sift_soundness() {
  Outcome o;
  std::size_t regular = 0;
  std::size_t denser = 0;
  for (unsigned i = 0; i < 1000; ++i) {
    Rng rng(5000 + i);
    const std::size_t r = 16 + rng.below(17);
    const std::size_t c = 16 + rng.below(17);
    BoolMatrix a = random_matrix(r, c, Rational(1 + rng.below(9), 10), rng);
    if (i % 2 == 1) {
      // Plant a dense corner so denser rectangles occur.
      const std::size_t h = 2 + rng.below(r / 2);
      const std::size_t w = 2 + rng.below(c / 2);
      for (std::size_t x = 0; x < h; ++x) {
        for (std::size_t y = 0; y < w; ++y) a.set(x, y);
      }
    }
    const Rational eps = i % 4 < 2 ? Rational(1, 10) : Rational(1, 2);
    const unsigned l = 2 + (i / 4) % 2;
    if (a.count_ones() == 0) continue;
    const SiftOutcome s = sift(a, eps, 2, l);
    const Rational e = density(a);
    if (s.regular) {
      ++regular;
      if (grid_norm_exact(a, 2, l).power > rpow((1 + eps) * e, 2 * l)) fail(o, "regular outcome violates the bound");
    } else {
      ++denser;
      if (s.rows.empty() || s.cols.empty()) {
        fail(o, "empty rectangle");
        continue;
      }
      const Rational area(BigInt(s.rows.size()) * s.cols.size());
      if (area < eps / 16 * rpow(e, 2 * l) * Rational(BigInt(r) * c)) fail(o, "rectangle too small");
      if (density(submatrix(a, s.rows, s.cols)) < (1 + eps / 2) * e) fail(o, "rectangle not denser");
    }
  }
  if (o.pass) o.detail = std::to_string(regular) + " regular, " + std::to_string(denser) + " denser";
  return o;
}

void min_degree_check(const BoolMatrix& a, const Rational& eps, const Rational& gamma, Outcome& o,
                      std::size_t& case1, std::size_t& case2) {
  const MinDegreeOutcome m = min_degree(a, eps, gamma);
  const BoolMatrix kept = row_submatrix(a, m.kept_rows);
  const Rational e = density(a);
  if (m.which == MinDegreeCase::MinDegreeOk) {
    ++case1;
    if (kept.empty() || !is_min_degree(kept, eps) || density(kept) < e) fail(o, "case 1 postcondition");
  } else {
    ++case2;
    const Rational target = (1 - gamma) * a.rows();
    if (BigInt(m.kept_rows.size()) != numerator_of(target) / denominator_of(target)) fail(o, "case 2 size");
    if (density(kept) < (1 + gamma * eps) * e) fail(o, "case 2 density");
  }
}

Outcome min_degree_suite() {
  Outcome o;
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  const Rational eps(1, 10);
  const std::vector<Rational> gammas{Rational(1, 4), Rational(1, 2)};
  for (unsigned bits = 0; bits < 512; ++bits) {
    BoolMatrix a(3, 3);
    for (unsigned i = 0; i < 9; ++i) a.set(i / 3, i % 3, (bits >> i) & 1U);
    for (const auto& g : gammas) min_degree_check(a, eps, g, o, case1, case2);
  }
  for (unsigned i = 0; i < 200; ++i) {
    Rng rng(7000 + i);
    BoolMatrix a = random_matrix(64, 64, Rational(1 + rng.below(9), 10), rng);
    if (i % 2 == 1) {
      const std::size_t thin = rng.below(56);
      for (std::size_t x = 0; x < thin; ++x) {
        for (std::size_t y = 0; y < 64; ++y) a.set(x, y, a.get(x, y) && rng.bernoulli(1, 8));
      }
    }
    for (const auto& g : gammas) min_degree_check(a, eps, g, o, case1, case2);
  }
  if (o.pass) o.detail = std::to_string(case1) + " case-1 and " + std::to_string(case2) + " case-2 outcomes";
  return o;
}

Outcome detection() {
  Outcome o;
  std::size_t yes = 0;
  for (unsigned bits = 0; bits < 4096; ++bits) {
    BoolMatrix a(2, 2);
    BoolMatrix b(2, 2);
    BoolMatrix c(2, 2);
    for (unsigned i = 0; i < 4; ++i) {
      a.set(i / 2, i % 2, (bits >> i) & 1U);
      b.set(i / 2, i % 2, (bits >> (i + 4)) & 1U);
      c.set(i / 2, i % 2, (bits >> (i + 8)) & 1U);
    }
    const TripartiteGraph g(a, b, c);
    if (detect_triangle(g, Rational(1, 160), 2 + bits % 3, false).found == brute_force_triangles(g).empty()) {
      fail(o, "exhaustive graph " + std::to_string(bits));
    }
  }
  for (unsigned i = 0; i < 500; ++i) {
    Rng rng(9000 + i);
    const TripartiteGraph g = random_parts(rng, 96);
    const bool found = detect_triangle(g, Rational(1, 160), 2 + i % 3, false).found;
    yes += found ? 1 : 0;
    if (found == brute_force_triangles(g).empty()) fail(o, "random graph " + std::to_string(i));
  }
  if (o.pass) o.detail = "4096 exhaustive + 500 random (" + std::to_string(yes) + " with triangles)";
  return o;
}

Outcome bmm() {
  Outcome o;
  for (unsigned i = 0; i < 50; ++i) {
    Rng rng(11000 + i);
    const BoolMatrix a = random_matrix(64, 64, Rational(1 + rng.below(9), 20), rng);
    const BoolMatrix b = random_matrix(64, 64, Rational(1 + rng.below(9), 20), rng);
    if (bmm_via_triangle(a, b, Rational(1, 160), 2 + i % 3) != bool_product(a, b)) {
      fail(o, "instance " + std::to_string(i));
    }
  }
  if (o.pass) o.detail = "50 instances";
  return o;
}

Outcome listing() {
  Outcome o;
  const std::vector<FourRussiansParams> params{{4, 2}, {8, 3}, {16, 4}};
  std::size_t total = 0;
  for (unsigned i = 0; i < 200; ++i) {
    Rng rng(13000 + i);
    const TripartiteGraph g = random_parts(rng, 128);
    const auto expect = brute_force_triangles(g);
    total += expect.size();
    for (const auto& p : params) {
      if (four_russians_list(g, p) != expect) fail(o, "Four-Russians, instance " + std::to_string(i));
    }
    const std::size_t n = std::max({g.nx(), g.ny(), g.nz()});
    if (list_triangles(g, ListingParams::desk(n)) != expect) fail(o, "listing, instance " + std::to_string(i));
  }
  if (o.pass) o.detail = "200 instances, " + std::to_string(total) + " triangles";
  return o;
}

Outcome enumeration() {
  Outcome o;
  std::size_t worst = 0;
  std::size_t budget = 0;
  for (unsigned i = 0; i < 50; ++i) {
    Rng rng(15000 + i);
    const TripartiteGraph g = random_parts(rng, 96);
    auto expect = oracle::triangles(g);
    std::sort(expect.begin(), expect.end());
    Enumerator e(g, EnumConfig{});
    budget = e.budget();
    auto got = enumerate_all(e);
    std::sort(got.begin(), got.end());
    if (got != expect) fail(o, "instance " + std::to_string(i) + ": multiset differs");
    worst = std::max(worst, e.stats().max_steps);
    if (e.stats().max_steps > e.budget()) fail(o, "instance " + std::to_string(i) + ": step budget exceeded");
  }
  if (o.pass) o.detail = "max steps per call " + std::to_string(worst) + " <= budget " + std::to_string(budget);
  return o;
}

Outcome uniformity() {
  Outcome o;
  const BoolMatrix a = random_matrix(256, 256, Rational(1, 2), 17);
  const BoolMatrix b = random_matrix(256, 256, Rational(1, 2), 18);
  RegularityParams p;
  p.epsilon = Rational(1, 100);
  const UniformityCert cert = check_uniform_product(a, b, p);
  o.pass = cert.outside_fraction <= Rational(1, 100);
  o.detail = "outside fraction " + to_string(cert.outside_fraction);
  return o;
}

Outcome threesum() {
  Outcome o;
  std::size_t yes = 0;
  for (unsigned i = 0; i < 200; ++i) {
    Rng rng(17000 + i);
    const std::size_t n = 3 + rng.below(126);
    const ThreeSumInstance inst = i % 2 == 0 ? planted_3sum(n, 1000000, rng) : random_3sum(n, 1000000, rng);
    ThreeSumConfig cfg;
    cfg.seed = i;
    const auto got = solve_3sum_via_triangles(inst, cfg);
    const auto expect = solve_3sum_naive(inst);
    yes += expect ? 1 : 0;
    if (got.has_value() != expect.has_value()) fail(o, "instance " + std::to_string(i));
    if (got && got->a + got->b + got->c != 0) fail(o, "bad witness");
  }
  std::size_t phi = 0;
  for (unsigned bb : {3U, 4U, 6U, 10U}) {
    const LinearHashFn h = sample_linear_hash(bb, bb, 1000000);
    phi = std::max(phi, measure_phi(h, 1000000, 100000, bb + 1).size());
  }
  if (phi > 4) fail(o, "offset set has " + std::to_string(phi) + " values");
  if (o.pass) o.detail = "200 instances (" + std::to_string(yes) + " yes), |Phi| <= " + std::to_string(phi);
  return o;
}

template <class F>
double median_seconds(F f) {
  std::vector<double> t;
  for (int r = 0; r < 3; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[1];
}

// The scalar baseline: one entry at a time, no word parallelism.
bool scalar_detect(const TripartiteGraph& g) {
  for (std::size_t x = 0; x < g.nx(); ++x) {
    for (std::size_t y = 0; y < g.ny(); ++y) {
      if (!g.a.get(x, y)) continue;
      for (std::size_t z = 0; z < g.nz(); ++z) {
        if (g.b.get(y, z) && g.c.get(x, z)) return true;
      }
    }
  }
  return false;
}

Outcome performance() {
  Outcome o;
  Rng rng(19);
  const TripartiteGraph g = crossed_triangle_free_graph(2048, Rational(1, 2), rng);
  const FourRussiansParams p = FourRussiansParams::defaults_for(g);
  bool fr_found = true;
  bool naive_found = true;
  const double fr = median_seconds([&] { fr_found = four_russians_detect(g, p); });
  const double naive = median_seconds([&] { naive_found = scalar_detect(g); });
  const double ratio = naive / fr;
  char buf[128];
  std::snprintf(buf, sizeof buf, "scalar loop %.3fs, Four-Russians %.3fs, speedup %.2fx", naive, fr, ratio);
  o.detail = buf;
  o.pass = ratio >= 1.5 && !fr_found && !naive_found;
  return o;
}

Outcome determinism() {
  Outcome o;
  auto twice = [&](const std::string& what, const std::function<std::string()>& f) {
    if (f() != f()) fail(o, what + " differs between runs");
  };
  const BoolMatrix a = random_matrix(48, 48, Rational(1, 2), 21);
  const BoolMatrix b = random_matrix(48, 48, Rational(1, 2), 22);
  twice("A-decomposition dump", [&] {
    std::ostringstream s;
    write_a_dump(s, a_decomposition(a, Rational(1, 160), 3), Rational(1, 160), 3);
    return s.str();
  });
  twice("AB-decomposition dump", [&] {
    std::ostringstream s;
    write_ab_dump(s, ab_decomposition(a, b, Rational(1, 160), 3), Rational(1, 160), 3);
    return s.str();
  });
  Rng grng(23);
  const TripartiteGraph g = random_graph(64, 64, 64, Rational(1, 3), grng);
  auto text = [](const std::vector<Triangle>& ts) {
    std::ostringstream s;
    for (const auto& t : ts) s << t.x << ' ' << t.y << ' ' << t.z << '\n';
    return s.str();
  };
  twice("triangle listing", [&] { return text(list_triangles(g, ListingParams::desk(64))); });
  twice("Four-Russians listing", [&] { return text(four_russians_list(g, {16, 4})); });
  twice("enumeration order", [&] {
    Enumerator e(g, EnumConfig{});
    return text(enumerate_all(e));
  });
  twice("sampled enumeration order", [&] {
    EnumConfig cfg;
    cfg.counting = CountingBackend::Sampled;
    Enumerator e(g, cfg);
    return text(enumerate_all(e));
  });
  twice("detection witness", [&] {
    const DetectResult r = detect_triangle(g, Rational(1, 160), 3, true);
    return r.witness ? text({*r.witness}) : std::string("none");
  });
  twice("BMM", [&] {
    std::ostringstream s;
    write_matrix(s, bmm_via_triangle(a, b, Rational(1, 160), 3));
    return s.str();
  });
  twice("sift outcome", [&] {
    const SiftOutcome s = sift(block_diagonal(16, 2), Rational(1, 10), 2, 2);
    std::ostringstream out;
    out << s.regular << ' ' << s.rows.size() << ' ' << s.cols.size() << ' ' << to_string(s.achieved_density);
    return out.str();
  });
  twice("3-SUM answer", [&] {
    Rng r(29);
    const ThreeSumInstance inst = planted_3sum(64, 1000000, r);
    ThreeSumConfig cfg;
    cfg.phase1_constant = 0;
    const auto ans = solve_3sum_via_triangles(inst, cfg);
    return ans ? std::to_string(ans->a) + ' ' + std::to_string(ans->b) + ' ' + std::to_string(ans->c)
               : std::string("no");
  });
  twice("bench CSV", [&] {
    BenchConfig cfg;
    cfg.sizes = {24, 40};
    cfg.seeds = {1, 2};
    cfg.jobs = 4;
    std::ostringstream s;
    write_bench_csv(s, run_bench(cfg), false);
    return s.str();
  });
  twice("generated graph", [&] {
    Rng r(31);
    std::ostringstream s;
    write_graph(s, planted_triangle_graph(32, 32, 32, Rational(1, 10), r));
    return s.str();
  });
  if (o.pass) o.detail = "12 outputs byte-identical across reruns";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    bool soft = false;
  };
  const std::vector<Criterion> criteria{
      {1, "AB-decomposition exactness and volume bound", ab_exactness},
      {2, "A-decomposition partition, area and certificates", a_decomposition_grid},
      {3, "sift soundness", sift_soundness},
      {4, "min-degree postconditions", min_degree_suite},
      {5, "triangle detection equals brute force", detection},
      {6, "BMM engines agree", bmm},
      {7, "listing equals brute force", listing},
      {8, "enumeration multiset and step budget", enumeration},
      {9, "product uniformity on random matrices", uniformity},
      {10, "3-SUM via triangles equals naive", threesum},
      {11, "Four-Russians detection speedup", performance, true},
      {12, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char t[32];
    std::snprintf(t, sizeof t, "%.1fs", secs);
    if (c.id == 1 && secs >= 120) {
      o.pass = false;
      o.detail += "; runtime over 120s";
    }
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << " (" << o.detail
              << ", " << t << ")";
    if (!o.pass && c.soft) std::cout << " [soft: warning only]";
    std::cout << std::endl;
    if (!o.pass && !c.soft) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
