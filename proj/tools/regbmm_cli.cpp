#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regbmm/regbmm.hpp"

using namespace regbmm;

namespace {

constexpr int kExitError = 2;
constexpr int kExitMismatch = 3;

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream& stream() { return file ? *file : std::cout; }
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") file = std::make_unique<std::ofstream>(open_output(path));
  }
};

BoolMatrix load_matrix(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

TripartiteGraph load_graph(const std::string& path) {
  auto in = open_input(path);
  return read_graph(in);
}

void print_triangles(std::ostream& out, const std::vector<Triangle>& ts) {
  for (const auto& t : ts) out << t.x << ' ' << t.y << ' ' << t.z << '\n';
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  for (const auto& s : v) out.push_back(parse_rational(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity-based Boolean matrix multiplication and triangle tools"};
  app.require_subcommand(1);
  int exit_code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate matrices, graphs and 3-SUM instances");
  std::string gen_kind;
  std::size_t gen_rows = 16, gen_cols = 0, gen_n = 16, gen_blocks = 2;
  std::string gen_p = "1/2", gen_out;
  std::uint64_t gen_seed = 1;
  std::int64_t gen_range = 1000000;
  bool gen_graph = false, gen_sparse = false;
  gen->add_option("kind", gen_kind, "random | blockdiag | planted-triangle | threesum-random | threesum-planted")
      ->required()
      ->check(CLI::IsMember({"random", "blockdiag", "planted-triangle", "threesum-random", "threesum-planted"}));
  gen->add_option("--rows", gen_rows, "matrix rows");
  gen->add_option("--cols", gen_cols, "matrix columns (default: rows)");
  gen->add_option("-n,--n", gen_n, "part size for graphs, value count for 3-SUM");
  gen->add_option("-p,--p", gen_p, "edge probability num/den");
  gen->add_option("--blocks", gen_blocks, "diagonal blocks");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--range", gen_range, "3-SUM values lie in [-range, range]");
  gen->add_flag("--graph", gen_graph, "random: emit a tripartite graph with parts n");
  gen->add_flag("--sparse", gen_sparse, "write matrices in the sparse format");
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");
  gen->callback([&] {
    Output out(gen_out);
    const auto fmt = gen_sparse ? MatrixFormat::Sparse : MatrixFormat::Dense;
    Rng rng(gen_seed);
    const Rational p = parse_rational(gen_p);
    if (gen_kind == "random") {
      if (gen_graph) {
        write_graph(out.stream(), random_graph(gen_n, gen_n, gen_n, p, rng), fmt);
      } else {
        write_matrix(out.stream(), random_matrix(gen_rows, gen_cols == 0 ? gen_rows : gen_cols, p, rng), fmt);
      }
    } else if (gen_kind == "blockdiag") {
      write_matrix(out.stream(), block_diagonal(gen_n, gen_blocks), fmt);
    } else if (gen_kind == "planted-triangle") {
      write_graph(out.stream(), planted_triangle_graph(gen_n, gen_n, gen_n, p, rng), fmt);
    } else {
      const auto inst =
          gen_kind == "threesum-random" ? random_3sum(gen_n, gen_range, rng) : planted_3sum(gen_n, gen_range, rng);
      for (auto v : inst.values) out.stream() << v << '\n';
    }
  });

  // multiply
  auto* mul = app.add_subcommand("multiply", "Boolean product of two matrices");
  std::string mul_a, mul_b, mul_engine = "naive", mul_eps = "1/160", mul_out;
  unsigned mul_d = 3;
  std::size_t mul_block = 0;
  bool mul_check = false;
  mul->add_option("a", mul_a, "left matrix")->required();
  mul->add_option("b", mul_b, "right matrix")->required();
  mul->add_option("--engine", mul_engine, "naive | bmm-decomp")->check(CLI::IsMember({"naive", "bmm-decomp"}));
  mul->add_option("--epsilon", mul_eps, "regularity epsilon num/den");
  mul->add_option("-d,--d", mul_d, "sparsity exponent");
  mul->add_option("--block", mul_block, "block size (default ceil(n^(1/3)))");
  mul->add_flag("--check", mul_check, "cross-check against the other engine");
  mul->add_option("-o,--out", mul_out, "output path (default stdout)");
  mul->callback([&] {
    const BoolMatrix a = load_matrix(mul_a);
    const BoolMatrix b = load_matrix(mul_b);
    const Rational eps = parse_rational(mul_eps);
    auto decomp = [&] { return bmm_via_triangle(a, b, eps, mul_d, mul_block); };
    const BoolMatrix prod = mul_engine == "naive" ? bool_product(a, b) : decomp();
    if (mul_check) {
      const BoolMatrix other = mul_engine == "naive" ? decomp() : bool_product(a, b);
      if (!prod.same_entries(other)) {
        std::cerr << "engines disagree\n";
        exit_code = kExitMismatch;
        return;
      }
    }
    Output out(mul_out);
    write_matrix(out.stream(), prod);
  });

  // detect
  auto* det = app.add_subcommand("detect", "Triangle detection through the AB-decomposition");
  std::string det_graph, det_eps = "1/160";
  unsigned det_d = 3;
  bool det_witness = false, det_check = false;
  det->add_option("graph", det_graph, "graph file (A, B, C)")->required();
  det->add_option("--epsilon", det_eps, "regularity epsilon num/den");
  det->add_option("-d,--d", det_d, "sparsity exponent");
  det->add_flag("--witness", det_witness, "print a witness triangle");
  det->add_flag("--check", det_check, "cross-check against brute force");
  det->callback([&] {
    const TripartiteGraph g = load_graph(det_graph);
    const DetectResult r = detect_triangle(g, parse_rational(det_eps), det_d, det_witness);
    if (det_check && r.found == brute_force_triangles(g).empty()) {
      std::cerr << "engines disagree\n";
      exit_code = kExitMismatch;
      return;
    }
    std::cout << (r.found ? "yes" : "no") << '\n';
    if (r.witness) std::cout << r.witness->x << ' ' << r.witness->y << ' ' << r.witness->z << '\n';
  });

  // list
  auto* lst = app.add_subcommand("list", "List all triangles");
  std::string lst_graph, lst_engine = "listing", lst_eps, lst_gamma, lst_delta;
  std::optional<unsigned> lst_d, lst_h;
  std::optional<std::size_t> lst_s, lst_r;
  bool lst_count = false, lst_check = false;
  lst->add_option("graph", lst_graph, "graph file (A, B, C)")->required();
  lst->add_option("--engine", lst_engine, "listing | four-russians | brute")
      ->check(CLI::IsMember({"listing", "four-russians", "brute"}));
  lst->add_option("--epsilon", lst_eps, "listing epsilon num/den");
  lst->add_option("-d,--d", lst_d, "listing d");
  lst->add_option("--H", lst_h, "recursion depth");
  lst->add_option("--gamma", lst_gamma, "listing gamma num/den");
  lst->add_option("--delta", lst_delta, "listing delta num/den");
  lst->add_option("--s", lst_s, "Four-Russians group size");
  lst->add_option("--r", lst_r, "Four-Russians subset size");
  lst->add_flag("--count", lst_count, "print only the number of triangles");
  lst->add_flag("--check", lst_check, "cross-check against brute force");
  lst->callback([&] {
    const TripartiteGraph g = load_graph(lst_graph);
    FourRussiansParams fr = FourRussiansParams::defaults_for(g);
    if (lst_s) fr.s = *lst_s;
    if (lst_r) fr.r = *lst_r;
    ListingParams lp = ListingParams::desk(std::max({g.nx(), g.ny(), g.nz()}));
    if (!lst_eps.empty()) lp.epsilon = parse_rational(lst_eps);
    if (lst_d) lp.d = *lst_d;
    if (lst_h) lp.H = *lst_h;
    if (!lst_gamma.empty()) lp.gamma = parse_rational(lst_gamma);
    if (!lst_delta.empty()) lp.delta = parse_rational(lst_delta);
    if (lst_s || lst_r) lp.four_russians = fr;
    std::vector<Triangle> ts;
    if (lst_engine == "listing") {
      ts = list_triangles(g, lp);
    } else if (lst_engine == "four-russians") {
      ts = four_russians_list(g, fr);
    } else {
      ts = brute_force_triangles(g);
    }
    if (lst_check && ts != brute_force_triangles(g)) {
      std::cerr << "engines disagree\n";
      exit_code = kExitMismatch;
      return;
    }
    if (lst_count) {
      std::cout << ts.size() << '\n';
    } else {
      print_triangles(std::cout, ts);
    }
  });

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Constant-delay triangle enumeration");
  std::string en_graph, en_counting = "exact";
  std::size_t en_budget = 8;
  std::uint64_t en_seed = 1;
  bool en_count = false, en_stream = false, en_stats = false;
  en->add_option("graph", en_graph, "graph file (A, B, C)")->required();
  en->add_option("--budget", en_budget, "elementary steps per call");
  en->add_option("--counting", en_counting, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));
  en->add_option("--seed", en_seed, "seed for sampled counting");
  en->add_flag("--count", en_count, "print only the number of triangles");
  en->add_flag("--stream", en_stream, "print in emission order instead of sorted");
  en->add_flag("--stats", en_stats, "report delay statistics on stderr");
  en->callback([&] {
    const TripartiteGraph g = load_graph(en_graph);
    EnumConfig cfg;
    cfg.listing = ListingParams::desk(std::max({g.nx(), g.ny(), g.nz()}));
    cfg.budget = en_budget;
    cfg.seed = en_seed;
    cfg.counting = en_counting == "exact" ? CountingBackend::Exact : CountingBackend::Sampled;
    Enumerator e(g, cfg);
    std::vector<Triangle> ts = enumerate_all(e);
    if (!en_stream) std::sort(ts.begin(), ts.end());
    if (en_count) {
      std::cout << ts.size() << '\n';
    } else {
      print_triangles(std::cout, ts);
    }
    if (en_stats) {
      const auto& s = e.stats();
      std::cerr << "subgraphs " << s.subgraphs << " heavy " << s.heavy << " max_steps " << s.max_steps << " budget "
                << e.budget() << " overruns " << s.budget_overruns << '\n';
    }
  });

  // decompose
  auto* dec = app.add_subcommand("decompose", "A- or AB-regularity decomposition dump");
  std::string dec_a, dec_b, dec_eps = "1/160", dec_out;
  unsigned dec_d = 3;
  dec->add_option("a", dec_a, "matrix A")->required();
  dec->add_option("b", dec_b, "matrix B (AB-decomposition when given)");
  dec->add_option("--epsilon", dec_eps, "regularity epsilon num/den");
  dec->add_option("-d,--d", dec_d, "sparsity exponent");
  dec->add_option("-o,--out", dec_out, "output path (default stdout)");
  dec->callback([&] {
    const BoolMatrix a = load_matrix(dec_a);
    const Rational eps = parse_rational(dec_eps);
    Output out(dec_out);
    if (dec_b.empty()) {
      write_a_dump(out.stream(), a_decomposition(a, eps, dec_d), eps, dec_d);
    } else {
      const BoolMatrix b = load_matrix(dec_b);
      write_ab_dump(out.stream(), ab_decomposition(a, b, eps, dec_d), eps, dec_d);
    }
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Check a decomposition dump against its input");
  std::string ver_dump, ver_a, ver_b;
  ver->add_option("dump", ver_dump, "decomposition dump")->required();
  ver->add_option("a", ver_a, "matrix A")->required();
  ver->add_option("b", ver_b, "matrix B for AB dumps");
  ver->callback([&] {
    auto in = open_input(ver_dump);
    const DecompositionDump dump = read_dump(in);
    const BoolMatrix a = load_matrix(ver_a);
    VerifyReport rep;
    if (dump.is_ab) {
      if (ver_b.empty()) throw std::invalid_argument("AB dump needs matrix B");
      rep = verify_ab_decomposition(dump.ab_pieces, a, load_matrix(ver_b), dump.epsilon, dump.d);
    } else {
      rep = verify_a_decomposition(dump.a_pieces, a, dump.epsilon, dump.d);
    }
    rep.print(std::cout);
    if (!rep.ok()) exit_code = 1;
  });

  // threesum
  auto* ts = app.add_subcommand("threesum", "3-SUM; exit 0 for no, 1 for yes");
  std::string ts_path, ts_engine = "triangle";
  std::uint64_t ts_seed = 1;
  unsigned ts_bits = 0;
  std::optional<std::int64_t> ts_range;
  bool ts_check = false, ts_stats = false;
  ts->add_option("input", ts_path, "one integer per line")->required();
  ts->add_option("--engine", ts_engine, "naive | triangle")->check(CLI::IsMember({"naive", "triangle"}));
  ts->add_option("--seed", ts_seed, "seed");
  ts->add_option("--bucket-bits", ts_bits, "hash range bits (default ceil(log2 n / 3) + 1)");
  ts->add_option("--range", ts_range, "declared value range (default: largest magnitude)");
  ts->add_flag("--check", ts_check, "cross-check against the naive engine");
  ts->add_flag("--stats", ts_stats, "report graph statistics on stderr");
  ts->callback([&] {
    auto in = open_input(ts_path);
    std::vector<std::int64_t> values = read_integers(in);
    ThreeSumInstance inst = ts_range ? ThreeSumInstance{values, *ts_range} : ThreeSumInstance::tight(values);
    inst.validate();
    ThreeSumConfig cfg;
    cfg.seed = ts_seed;
    cfg.bucket_bits = ts_bits;
    ThreeSumStats st;
    const ThreeSumAnswer ans = ts_engine == "naive" ? solve_3sum_naive(inst) : solve_3sum_via_triangles(inst, cfg, &st);
    if (ts_check) {
      const ThreeSumAnswer other = ts_engine == "naive" ? solve_3sum_via_triangles(inst, cfg, &st) : solve_3sum_naive(inst);
      if (ans.has_value() != other.has_value()) {
        std::cerr << "engines disagree\n";
        exit_code = kExitMismatch;
        return;
      }
    }
    if (ts_stats && ts_engine == "triangle") {
      std::cerr << "phase1_hit " << st.phase1_hit << " m " << st.m << " edges " << st.edges << " triangles "
                << st.triangles << '\n';
    }
    if (ans) {
      std::cout << "yes\n" << ans->a << ' ' << ans->b << ' ' << ans->c << '\n';
      exit_code = 1;
    } else {
      std::cout << "no\n";
    }
  });

  // bench
  auto* bn = app.add_subcommand("bench", "Time triangle engines; CSV output");
  BenchConfig bcfg;
  std::vector<std::string> bn_dens{"1/2"};
  std::string bn_out, bn_eps = "1/160";
  bool bn_no_timing = false;
  bn->add_option("--engines", bcfg.engines, "naive four-russians list detect")->delimiter(',');
  bn->add_option("--sizes", bcfg.sizes, "part sizes")->delimiter(',');
  bn->add_option("--densities", bn_dens, "edge densities num/den")->delimiter(',');
  bn->add_option("--seeds", bcfg.seeds, "seeds")->delimiter(',');
  bn->add_option("--reps", bcfg.reps, "repetitions per row (at least 3)");
  bn->add_option("--jobs", bcfg.jobs, "worker threads");
  bn->add_option("--epsilon", bn_eps, "detection epsilon num/den");
  bn->add_option("-d,--d", bcfg.d, "detection d");
  bn->add_flag("--no-timing", bn_no_timing, "write wall_ns as 0");
  bn->add_option("-o,--out", bn_out, "output path (default stdout)");
  bn->callback([&] {
    bcfg.densities = parse_rationals(bn_dens);
    bcfg.epsilon = parse_rational(bn_eps);
    const auto rows = run_bench(bcfg);
    Output out(bn_out);
    write_bench_csv(out.stream(), rows, !bn_no_timing);
    double naive = 0, fr = 0;
    for (const auto& r : rows) {
      if (r.engine == "naive") naive += static_cast<double>(r.wall_ns);
      if (r.engine == "four-russians") fr += static_cast<double>(r.wall_ns);
    }
    if (naive > 0 && fr > 0) std::cerr << "naive/four-russians time ratio " << naive / fr << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return exit_code;
}
