// relguess: guess recurrences on tables, verify them, materialize walk tables, run the
// change of ordering and the Table-1 style region comparison.
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "relguess/experiments.hpp"
#include "relguess/fglm.hpp"
#include "relguess/field.hpp"
#include "relguess/formats.hpp"
#include "relguess/guess.hpp"
#include "relguess/report.hpp"
#include "relguess/tables.hpp"

using namespace relguess;

namespace {

constexpr std::uint64_t kDefaultPrime = 4294967291ULL;

struct Options {
  // table source
  std::string table, walk;
  std::string field;  // empty: from the table file, else the default prime
  std::string vars, order = "drl";
  // structures
  std::string cone, lattice, gdeg;
  // guess shape
  bool adaptive = false, prels = false, trace = false;
  std::uint32_t tdeg = 1;
  std::size_t rows = 0, cols = 0;
  std::uint64_t degree = 0;  // batch falls back to 3
  std::string caps, monomials;
  std::size_t max_staircase = 0;
  std::size_t extra_rows = 2;
  std::size_t verify_shifts = 0;
  // verify
  std::string relations;
  std::size_t shifts = 50;
  // walk-table
  std::string bounds, out;
  // fglm
  std::string matrix, gb, synthetic, mode = "blocked", save_matrix;
  std::int64_t group = 1, mu = 0;
  bool bench = false;
  int repeats = 3;
  // bench-regions
  std::string shapes = "444x441,631x564,721x711,1951x1089";
  std::string regions = "cone,half,full";
  bool relations_out = false;
  // common
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string json;
};

std::vector<std::uint64_t> parse_uints(const std::string& csv) {
  std::vector<std::uint64_t> v;
  std::string s = csv;
  for (char& c : s)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(s);
  std::uint64_t x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw std::invalid_argument("expected a list of non-negative integers: '" + csv + "'");
  return v;
}

Exponents parse_exponents(const std::string& csv, std::size_t n, const char* what) {
  auto v = parse_uints(csv);
  if (v.size() != n) throw std::invalid_argument(std::string(what) + " needs " + std::to_string(n) + " entries");
  return Exponents(v.begin(), v.end());
}

void write_json(const Options& o, const Json& j) {
  if (o.json.empty()) return;
  if (o.json == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(o.json);
  if (!f) throw std::runtime_error("cannot write " + o.json);
  f << j.dump(2) << '\n';
}

FieldSpec resolve_field(const Options& o, const std::optional<TableFileData>& data) {
  if (!o.field.empty()) return FieldSpec::parse(o.field);
  if (data) return data->field;
  FieldSpec f;
  f.prime = kDefaultPrime;
  return f;
}

template <class Fn>
void with_field(const FieldSpec& fs, Fn&& fn) {
  if (fs.rational)
    fn(RationalField());
  else
    fn(PrimeField(fs.prime));
}

struct SourceData {
  std::optional<TableFileData> file;
  std::shared_ptr<WalkCounter> walk;
  std::size_t dim = 0;
};

SourceData load_source(const Options& o) {
  if (o.table.empty() == o.walk.empty()) throw std::invalid_argument("give exactly one of --table or --walk");
  SourceData s;
  if (!o.table.empty()) {
    s.file = read_table_file(o.table);
    s.dim = s.file->dim;
  } else {
    s.walk = std::make_shared<WalkCounter>(WalkSpec::from_argument(o.walk));
    s.dim = s.walk->spec().table_dimension();
  }
  return s;
}

template <class Field>
std::unique_ptr<TableSource<Field>> make_source(const Field& F, const SourceData& s) {
  if (s.file) return std::make_unique<ExplicitTable<Field>>(F, *s.file);
  return std::make_unique<WalkTable<Field>>(F, s.walk);
}

VariableNames names_for(const Options& o, std::size_t n) {
  if (o.vars.empty()) return VariableNames::defaults(n);
  auto v = split_names(o.vars);
  if (v.size() != n) throw std::invalid_argument("--vars lists " + std::to_string(v.size()) + " names for a table of dimension " + std::to_string(n));
  return VariableNames::from_x(v);
}

// the first `count` (or all up to `degree`) x-monomials accepted by `filter`, increasing under `order`
std::vector<Monomial> first_monomials(const MonomialOrder& order, const ExponentFilter& filter, std::uint64_t degree,
                                      std::size_t count) {
  EnumerationBound b;
  if (count) {
    b.max_count = count;
  } else {
    b.max_degree = degree;
  }
  auto v = enumerate_monomials(MonomialOrder::drl(order.nvars()), filter, b);
  sort_monomials(v, order);
  return v;
}

// N DRL-smallest region monomials not in `used`
std::vector<Monomial> verification_shifts(std::size_t n, const ExponentFilter& filter, const std::vector<Monomial>& used,
                                          std::size_t N) {
  std::set<Exponents> seen;
  for (const auto& m : used) seen.insert(m.x);
  EnumerationBound b;
  b.max_count = N + seen.size();
  std::vector<Monomial> out;
  for (auto& m : enumerate_monomials(MonomialOrder::drl(n), filter, b))
    if (!seen.count(m.x) && out.size() < N) out.push_back(m);
  return out;
}

void print_report_text(const std::string& what, const Json& j) {
  std::cout << what << ": " << j["order"].get<std::string>() << " over " << j["field"].get<std::string>() << '\n';
  std::cout << "matrix " << j["matrix"]["rows"] << "x" << j["matrix"]["cols"] << ", queries " << j["queries"]
            << ", staircase size " << j["staircase"].size() << '\n';
  for (const auto& r : j["relations"])
    std::cout << "  " << r["poly"].get<std::string>() << "    [" << r["status"].get<std::string>() << "]\n";
  std::cout << "fake " << j["fake"] << ", correct " << j["correct"] << '\n';
}

// ---------------- guess ----------------

template <class Field>
void run_guess(const Field& F, const Options& o, const SourceData& sd) {
  auto src = make_source(F, sd);
  std::size_t n = sd.dim;
  auto names = names_for(o, n);
  MonomialOrder order = parse_order(o.order, n);
  std::optional<Cone> cone;
  std::optional<Lattice> lattice;
  if (!o.cone.empty()) cone = parse_cone_text(read_text_file(o.cone));
  if (!o.lattice.empty()) lattice = parse_lattice_text(read_text_file(o.lattice));
  if (cone && lattice) throw std::invalid_argument("--cone and --lattice do not combine");
  if (cone && cone->dimension() != n) throw std::invalid_argument("cone dimension does not match the table");
  if (lattice && lattice->dimension() != n) throw std::invalid_argument("lattice dimension does not match the table");

  GuessOptions opts;
  opts.cone = cone ? &*cone : nullptr;
  opts.extra_rows = o.extra_rows;
  opts.trace = o.trace;
  if (o.max_staircase) opts.max_staircase = o.max_staircase;
  if (!o.caps.empty()) opts.caps = parse_exponents(o.caps, n, "--caps");
  ExponentFilter filter;
  if (cone) filter = [&](const Exponents& e) { return cone->contains(e); };

  GuessReport<Field> rep;
  std::vector<Monomial> used;
  std::string what;
  if (o.prels) {
    if (lattice || o.adaptive) throw std::invalid_argument("--prels runs in batch mode without a lattice");
    if (!o.rows || !o.cols) throw std::invalid_argument("--prels needs --rows and --cols");
    EnumerationBound rb, cb;
    rb.max_count = o.rows;
    cb.max_count = o.cols;
    auto X = enumerate_monomials(MonomialOrder::drl(n), filter, rb);
    auto T = enumerate_mixed(MonomialOrder::drl(n), filter, o.tdeg, cb);
    sort_monomials(T, order);
    rep = guess_prels(*src, order, X, T, opts);
    used = X;
    what = "P-relations";
  } else if (o.adaptive) {
    if (o.degree) opts.max_degree = o.degree;
    rep = lattice ? lattice_adaptive_sfglm(*src, order, *lattice, opts) : adaptive_sfglm(*src, order, opts);
    used = rep.staircase;
    for (const auto& r : rep.relations) used.push_back(Monomial::pure(r.lm.x));
    what = lattice ? "lattice adaptive sFGLM" : "adaptive sFGLM";
  } else {
    std::vector<Monomial> T;
    if (!o.monomials.empty()) {
      for (const auto& line : content_lines(read_text_file(o.monomials))) {
        auto p = parse_polynomial(F, line, names);
        if (p.size() != 1 || p.has_t()) throw std::invalid_argument("monomial file: '" + line + "' is not an x-monomial");
        T.push_back(p.terms.begin()->first);
      }
      sort_monomials(T, order);
    } else {
      T = first_monomials(order, filter, o.degree ? o.degree : 3, o.cols);
    }
    rep = lattice ? lattice_sfglm(*src, order, T, *lattice, opts) : sfglm(*src, order, T, opts);
    used = T;
    what = lattice ? "lattice sFGLM" : "sFGLM";
  }
  if (o.verify_shifts) classify_relations(*src, rep, verification_shifts(n, filter, used, o.verify_shifts));
  auto j = guess_report_json(F, rep, order, names);
  print_report_text(what, j);
  Json doc;
  doc["command"] = "guess";
  doc["mode"] = what;
  doc["report"] = j;
  write_json(o, doc);
}

// ---------------- verify ----------------

template <class Field>
void run_verify(const Field& F, const Options& o, const SourceData& sd) {
  auto src = make_source(F, sd);
  std::size_t n = sd.dim;
  auto names = names_for(o, n);
  MonomialOrder order = parse_order(o.order, n);
  std::optional<Cone> cone;
  if (!o.cone.empty()) cone = parse_cone_text(read_text_file(o.cone));
  ExponentFilter filter;
  if (cone) filter = [&](const Exponents& e) { return cone->contains(e); };
  GuessReport<Field> rep;
  for (const auto& line : content_lines(read_text_file(o.relations))) {
    auto p = parse_polynomial(F, line, names);
    if (p.is_zero()) continue;
    rep.relations.push_back({p, p.leading_monomial(order)});
  }
  EnumerationBound b;
  b.max_count = o.shifts;
  classify_relations(*src, rep, enumerate_monomials(MonomialOrder::drl(n), filter, b));
  Json rels = Json::array();
  for (const auto& r : rep.relations) {
    std::string s = polynomial_to_string(F, r.poly, order, names);
    std::cout << status_name(r.status) << "  " << s << '\n';
    rels.push_back({{"poly", s}, {"status", status_name(r.status)}});
  }
  std::cout << rep.relations.size() << " relations, " << rep.fake << " fake, " << rep.correct << " correct so far ("
            << o.shifts << " shifts)\n";
  write_json(o, {{"command", "verify"}, {"shifts", o.shifts}, {"relations", rels}, {"fake", rep.fake}, {"correct", rep.correct}});
}

// ---------------- walk-table ----------------

void run_walk_table(const Options& o) {
  if (o.walk.empty() || o.bounds.empty() || o.out.empty())
    throw std::invalid_argument("walk-table needs --walk, --bounds and --out");
  WalkCounter counter(WalkSpec::from_argument(o.walk));
  TableFileData d;
  d.dim = counter.spec().table_dimension();
  d.bounds = parse_exponents(o.bounds, d.dim, "--bounds");
  if (o.field.empty()) {
    d.field.rational = true;
  } else {
    d.field = FieldSpec::parse(o.field);
  }
  Exponents i(d.dim, 0);
  std::size_t total = 0;
  while (true) {
    mpz_class c = counter.count(i);
    if (!d.field.rational) c %= d.field.prime;
    d.entries[i] = mpq_class(c);
    ++total;
    std::size_t p = 0;
    while (p < d.dim && i[p] == d.bounds[p]) i[p++] = 0;
    if (p == d.dim) break;
    ++i[p];
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << table_to_text(d);
  std::cout << "wrote " << total << " entries of " << counter.spec().to_string() << " to " << o.out << '\n';
}

// ---------------- fglm ----------------

template <class Field>
void run_fglm(const Field& F, const Options& o) {
  int sources = !o.matrix.empty() + !o.gb.empty() + !o.synthetic.empty();
  if (sources != 1) throw std::invalid_argument("give exactly one of --matrix, --gb or --synthetic");
  std::optional<GDegreeMap> g;
  MultMatrix<Field> M;
  VariableNames names;
  if (!o.synthetic.empty()) {
    auto h = parse_uints(o.synthetic);
    std::vector<std::uint32_t> heights(h.begin(), h.end());
    std::mt19937_64 rng(o.seed);
    M = synthetic_shape_matrix(F, heights, o.group, o.mu, rng);
    g = GDegreeMap::cyclic(o.group, {o.mu, 1});
    names = VariableNames::from_x({"x", "y"});
  } else if (!o.gb.empty()) {
    auto text = read_text_file(o.gb);
    auto h = parse_gb_text(text);
    names = h.names;
    if (!o.gdeg.empty()) g = parse_gdeg_text(read_text_file(o.gdeg), h.names.x.size());
    M = load_mult_matrix_gb_text(F, text, g ? &*g : nullptr);
  } else {
    auto text = read_text_file(o.matrix);
    M = load_mult_matrix_text(F, text);
    names = VariableNames::defaults(M.nvars);
    if (!o.gdeg.empty()) {
      g = parse_gdeg_text(read_text_file(o.gdeg), M.nvars);
      check_g_homogeneous(F, M, *g);
    }
  }
  if (!o.save_matrix.empty()) {
    std::ofstream f(o.save_matrix);
    if (!f) throw std::runtime_error("cannot write " + o.save_matrix);
    f << mult_matrix_to_text(F, M);
  }
  Json doc;
  doc["command"] = "fglm";
  doc["dimension"] = M.dimension();
  doc["dense_columns"] = M.dense_count();
  if (o.bench) {
    if (!g) throw std::invalid_argument("--bench needs G-degrees (--gdeg or --synthetic)");
    auto R = blocked_speedup_bench(F, M, *g, o.seed, o.repeats);
    std::cout << std::fixed << std::setprecision(4) << "D " << R.D << ", k " << R.dense_columns << ", |G| "
              << R.group_order << "\n"
              << "plain    seq gen " << R.plain_seq << " s, solve " << R.plain_solve << " s\n"
              << "blocked  seq gen " << R.blocked_seq << " s, solve " << R.blocked_solve << " s\n"
              << "seq gen speedup " << std::setprecision(2) << R.plain_seq / R.blocked_seq << ", M^d nontrivial columns "
              << R.power_nontrivial << ", outputs " << (R.identical ? "identical" : "DIFFER") << '\n';
    doc["bench"] = {{"group_order", R.group_order},   {"plain_seq", R.plain_seq},
                    {"plain_solve", R.plain_solve},   {"blocked_seq", R.blocked_seq},
                    {"blocked_solve", R.blocked_solve}, {"power_nontrivial", R.power_nontrivial},
                    {"identical", R.identical}};
    doc["basis"] = shape_basis_json(F, R.basis, names);
    write_json(o, doc);
    if (!R.identical) throw std::runtime_error("plain and blocked paths disagree");
    return;
  }
  KrylovMode mode;
  if (o.mode == "plain")
    mode = KrylovMode::Plain;
  else if (o.mode == "blocked")
    mode = KrylovMode::Blocked;
  else
    throw std::invalid_argument("--mode is plain or blocked");
  auto B = solve_shape_basis(F, M, ShapeOptions{o.seed, mode, g ? &*g : nullptr, 3});
  MonomialOrder lex = MonomialOrder::lex(B.nvars);
  for (const auto& p : B.polynomials(F)) std::cout << polynomial_to_string(F, p, lex, names) << '\n';
  std::cout << "D " << B.D << ", d " << B.deltas.d << ", distinct reads " << B.distinct_reads << ", retries " << B.retries
            << '\n';
  doc["basis"] = shape_basis_json(F, B, names);
  write_json(o, doc);
}

// ---------------- bench-regions ----------------

template <class Field>
void run_bench_regions(const Field& F, const Options& o) {
  auto counter = std::make_shared<WalkCounter>(WalkSpec::from_argument(o.walk.empty() ? "gessel" : o.walk));
  if (counter->spec().table_dimension() != 2) throw std::invalid_argument("bench-regions needs a 2D table");
  WalkTable<Field> u(F, counter);
  auto names = names_for(o, 2);
  std::vector<Region> regions;
  for (const auto& r : split_names(o.regions)) {
    if (r == "cone")
      regions.push_back(Region::Cone);
    else if (r == "half")
      regions.push_back(Region::HalfOrthant);
    else if (r == "full")
      regions.push_back(Region::FullOrthant);
    else
      throw std::invalid_argument("regions are cone, half and full");
  }
  Json runs = Json::array();
  std::cout << std::left << std::setw(12) << "matrix" << std::setw(14) << "region" << std::right << std::setw(9)
            << "queries" << std::setw(7) << "fake" << std::setw(9) << "correct" << std::setw(10) << "seconds\n";
  for (const auto& s : split_names(o.shapes)) {
    auto x = s.find('x');
    if (x == std::string::npos) throw std::invalid_argument("shapes are written RxC");
    RegionShape shape{std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1)), o.tdeg,
                      o.verify_shifts ? o.verify_shifts : 400};
    for (auto r : regions) {
      auto run = run_region(u, r, shape);
      std::cout << std::left << std::setw(12) << s << std::setw(14) << region_name(r) << std::right << std::setw(9)
                << run.report.query_count << std::setw(7) << run.report.fake << std::setw(9) << run.report.correct
                << std::setw(9) << std::fixed << std::setprecision(2) << run.seconds << '\n';
      runs.push_back(region_run_json(F, run, names, o.relations_out));
    }
  }
  write_json(o, {{"command", "bench-regions"}, {"walk", counter->spec().to_string()}, {"runs", runs}});
}

void add_common(CLI::App* c, Options& o) {
  c->add_option("--field", o.field, "prime p or Q (default: the table file's field, else 4294967291)");
  c->add_option("--seed", o.seed, "seed for every random choice");
  c->add_option("--jobs", o.jobs, "worker threads (0: OpenMP default)");
  c->add_option("--json", o.json, "write the structured report to FILE ('-' for stdout)");
}

void add_source(CLI::App* c, Options& o) {
  c->add_option("--table", o.table, "table file");
  c->add_option("--walk", o.walk, "walk preset (king, gessel), inline spec or spec file");
  c->add_option("--vars", o.vars, "comma separated variable names, largest first");
  c->add_option("--order", o.order, "lex or drl")->check(CLI::IsMember({"lex", "drl", "grevlex"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guess linear recurrences on multidimensional tables"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file; flags win");
  std::string save_config;
  app.add_option("--save-config", save_config, "write the effective options to FILE and continue")->configurable(false);
  Options o;

  auto* guess = app.add_subcommand("guess", "guess relations of a table");
  add_source(guess, o);
  add_common(guess, o);
  guess->add_option("--cone", o.cone, "cone generator file");
  guess->add_option("--lattice", o.lattice, "lattice basis file");
  guess->add_flag("--adaptive", o.adaptive, "grow the staircase adaptively");
  guess->add_flag("--prels", o.prels, "polynomial-coefficient relations from a multi-Hankel kernel");
  guess->add_option("--tdeg", o.tdeg, "total t-degree of P-relation columns");
  guess->add_option("--rows", o.rows, "row shifts (P-relations)");
  guess->add_option("--cols", o.cols, "number of column monomials");
  guess->add_option("--degree", o.degree, "degree bound of the monomial set (batch) or candidates (adaptive)");
  guess->add_option("--monomials", o.monomials, "batch column monomials, one per line");
  guess->add_option("--caps", o.caps, "per-variable exponent caps, e.g. 4,4");
  guess->add_option("--max-staircase", o.max_staircase, "stop the adaptive search at this staircase size");
  guess->add_option("--extra-rows", o.extra_rows, "extra shifts in every rank test");
  guess->add_option("--verify-shifts", o.verify_shifts, "classify relations on this many unused shifts");
  guess->add_flag("--trace", o.trace, "record the adaptive steps in the report");

  auto* verify = app.add_subcommand("verify", "test relations on further shifts");
  add_source(verify, o);
  add_common(verify, o);
  verify->add_option("--relations", o.relations, "one polynomial per line")->required();
  verify->add_option("--shifts", o.shifts, "number of DRL-smallest shifts");
  verify->add_option("--cone", o.cone, "take shifts inside this cone");

  auto* walk = app.add_subcommand("walk-table", "write a walk-count table file");
  add_common(walk, o);
  walk->add_option("--walk", o.walk, "walk preset, inline spec or spec file")->required();
  walk->add_option("--bounds", o.bounds, "inclusive index bounds, e.g. 20,10")->required();
  walk->add_option("--out", o.out, "output table file")->required();

  auto* fglm = app.add_subcommand("fglm", "LEX shape basis from a DRL basis or multiplication matrix");
  add_common(fglm, o);
  fglm->add_option("--matrix", o.matrix, "multiplication matrix file");
  fglm->add_option("--gb", o.gb, "reduced DRL Groebner basis file");
  fglm->add_option("--gdeg", o.gdeg, "G-degree file");
  fglm->add_option("--synthetic", o.synthetic, "column heights of a random bivariate staircase");
  fglm->add_option("--group", o.group, "order q of G = Z/q for --synthetic");
  fglm->add_option("--mu", o.mu, "G-degree of x for --synthetic (y has degree 1)");
  fglm->add_option("--mode", o.mode, "plain or blocked Krylov sequence");
  fglm->add_flag("--bench", o.bench, "time plain against blocked and compare the bases");
  fglm->add_option("--repeats", o.repeats, "timing repeats for --bench");
  fglm->add_option("--save-matrix", o.save_matrix, "write the multiplication matrix file");

  auto* bench = app.add_subcommand("bench-regions", "P-relations on a 2D walk table, cone against orthants");
  add_common(bench, o);
  bench->add_option("--walk", o.walk, "walk (default gessel)");
  bench->add_option("--vars", o.vars, "variable names");
  bench->add_option("--shapes", o.shapes, "comma separated RxC matrix shapes");
  bench->add_option("--regions", o.regions, "subset of cone,half,full");
  bench->add_option("--tdeg", o.tdeg, "total t-degree of the columns")->default_val(2);
  bench->add_option("--verify-shifts", o.verify_shifts, "shifts used to classify relations (default 400)");
  bench->add_flag("--relations", o.relations_out, "include the relations in the JSON report");

  for (auto* c : {guess, verify, walk, fglm, bench}) c->configurable();  // a [section] in --config selects it
  CLI11_PARSE(app, argc, argv);
  if (!save_config.empty()) {
    std::ofstream f(save_config);
    f << app.config_to_str(false, true);
  }
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  try {
    if (guess->parsed() || verify->parsed()) {
      auto sd = load_source(o);
      with_field(resolve_field(o, sd.file), [&](const auto& F) {
        if (guess->parsed())
          run_guess(F, o, sd);
        else
          run_verify(F, o, sd);
      });
    } else if (walk->parsed()) {
      run_walk_table(o);
    } else if (fglm->parsed()) {
      FieldSpec fs = resolve_field(o, std::nullopt);
      if (o.field.empty() && !o.gb.empty()) {
        auto h = parse_gb_text(read_text_file(o.gb));
        if (h.field) fs = FieldSpec::parse(*h.field);
      }
      with_field(fs, [&](const auto& F) { run_fglm(F, o); });
    } else if (bench->parsed()) {
      with_field(resolve_field(o, std::nullopt), [&](const auto& F) { run_bench_regions(F, o); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
