#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "relguess/formats.hpp"
#include "relguess/linalg.hpp"
#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"
#include "relguess/skew.hpp"
#include "relguess/structures.hpp"

namespace relguess {

// Multiplication by the last variable x_n on the normal-form basis given by the staircase.
template <class Field>
struct MultMatrix {
  using Element = typename Field::Element;
  struct Column {
    bool trivial = true;
    std::size_t target = 0;       // trivial: m * x_n is staircase[target]
    std::vector<Element> dense;   // otherwise NF(m * x_n), length D
  };

  std::size_t nvars = 0;
  std::vector<Exponents> staircase;   // staircase[0] is 1
  std::vector<Column> columns;
  std::vector<std::vector<Element>> nf;  // NF(x_i), i < n-1, length D

  std::size_t dimension() const { return staircase.size(); }
  std::size_t dense_count() const {
    return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(), [](const Column& c) { return !c.trivial; }));
  }

  // dense D x D copy, column j = NF(staircase[j] * x_n)
  DenseMatrix<Field> to_dense(const Field& F) const {
    std::size_t D = dimension();
    DenseMatrix<Field> A(D, D, F.zero());
    for (std::size_t j = 0; j < D; ++j) {
      if (columns[j].trivial)
        A.at(columns[j].target, j) = F.one();
      else
        for (std::size_t i = 0; i < D; ++i) A.at(i, j) = columns[j].dense[i];
    }
    return A;
  }

  // column-side product M w
  std::vector<Element> apply(const Field& F, const std::vector<Element>& w) const {
    std::size_t D = dimension();
    std::vector<Element> out(D, F.zero());
    for (std::size_t j = 0; j < D; ++j) {
      if (F.is_zero(w[j])) continue;
      if (columns[j].trivial) {
        out[columns[j].target] = F.add(out[columns[j].target], w[j]);
      } else {
        for (std::size_t i = 0; i < D; ++i)
          if (!F.is_zero(columns[j].dense[i])) out[i] = F.add(out[i], F.mul(w[j], columns[j].dense[i]));
      }
    }
    return out;
  }
};

// Every dense column must be G-homogeneous of degree deg(m) + deg(x_n).
template <class Field>
void check_g_homogeneous(const Field& F, const MultMatrix<Field>& M, const GDegreeMap& g) {
  auto dn = g.var_degree(M.nvars - 1);
  for (std::size_t j = 0; j < M.dimension(); ++j) {
    auto want = g.add(g.gdegree(M.staircase[j]), dn);
    const auto& c = M.columns[j];
    if (c.trivial) continue;
    for (std::size_t i = 0; i < M.dimension(); ++i)
      if (!F.is_zero(c.dense[i]) && g.gdegree(M.staircase[i]) != want)
        throw std::invalid_argument("multiplication matrix column " + std::to_string(j) + " is not G-homogeneous");
  }
  for (std::size_t i = 0; i + 1 < M.nvars; ++i) {
    Exponents xi(M.nvars, 0);
    xi[i] = 1;
    auto want = g.gdegree(xi);
    for (std::size_t s = 0; s < M.dimension(); ++s)
      if (!F.is_zero(M.nf[i][s]) && g.gdegree(M.staircase[s]) != want)
        throw std::invalid_argument("normal form of x" + std::to_string(i + 1) + " is not G-homogeneous");
  }
}

// ---- loading ----

struct GBFileHeader {
  MonomialOrder order;
  VariableNames names;
  std::optional<std::string> field;
  std::vector<std::string> polys;
};

GBFileHeader parse_gb_text(const std::string& text);

template <class Field>
MultMatrix<Field> mult_matrix_from_gb(const Field& F, const std::vector<SkewPolynomial<Field>>& gb,
                                      const MonomialOrder& order) {
  using Element = typename Field::Element;
  if (gb.empty()) throw std::invalid_argument("empty Groebner basis");
  std::size_t n = order.nvars();
  std::vector<SkewPolynomial<Field>> G;
  std::vector<Monomial> lms;
  for (const auto& g : gb) {
    if (g.is_zero()) continue;
    if (g.has_t()) throw std::invalid_argument("Groebner basis element involves t-variables");
    G.push_back(make_monic(F, g, order));
    lms.push_back(G.back().leading_monomial(order));
  }
  Exponents caps(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    bool found = false;
    for (const auto& m : lms) {
      bool pure = true;
      for (std::size_t q = 0; q < n; ++q)
        if (q != p && m.x[q] != 0) pure = false;
      if (pure && m.x[p] > 0) {
        caps[p] = found ? std::min(caps[p], m.x[p] - 1) : m.x[p] - 1;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("ideal is not zero-dimensional");
  }
  std::vector<Monomial> box = enumerate_monomials(MonomialOrder::lex(n), {}, EnumerationBound{std::nullopt, caps, std::nullopt});
  std::vector<Monomial> S;
  for (const auto& m : box) {
    bool reducible = false;
    for (const auto& l : lms)
      if (divides(l, m)) reducible = true;
    if (!reducible) S.push_back(m);
  }
  sort_monomials(S, order);
  std::unordered_map<Exponents, std::size_t, MonomialHash> pos;
  MultMatrix<Field> M;
  M.nvars = n;
  for (std::size_t i = 0; i < S.size(); ++i) {
    pos[S[i].x] = i;
    M.staircase.push_back(S[i].x);
  }
  std::size_t D = S.size();
  auto nf_of_lm = [&](const Exponents& x) -> std::optional<std::vector<Element>> {
    for (std::size_t k = 0; k < G.size(); ++k) {
      if (lms[k].x != x) continue;
      std::vector<Element> v(D, F.zero());
      for (const auto& [m, c] : G[k].terms) {
        if (m.x == x) continue;
        auto it = pos.find(m.x);
        if (it == pos.end()) throw std::invalid_argument("Groebner basis is not reduced");
        v[it->second] = F.neg(c);
      }
      return v;
    }
    return std::nullopt;
  };
  for (std::size_t j = 0; j < D; ++j) {
    Exponents mx = S[j].x;
    mx[n - 1] += 1;
    typename MultMatrix<Field>::Column col;
    auto it = pos.find(mx);
    if (it != pos.end()) {
      col.target = it->second;
    } else {
      auto v = nf_of_lm(mx);
      if (!v) throw std::invalid_argument("Property M fails: " + std::to_string(j) + "-th staircase monomial times x_n is neither in the staircase nor a leading monomial");
      col.trivial = false;
      col.dense = std::move(*v);
    }
    M.columns.push_back(std::move(col));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Exponents xi(n, 0);
    xi[i] = 1;
    auto it = pos.find(xi);
    if (it != pos.end()) {
      std::vector<Element> v(D, F.zero());
      v[it->second] = F.one();
      M.nf.push_back(std::move(v));
    } else {
      auto v = nf_of_lm(xi);
      if (!v) throw std::invalid_argument("x" + std::to_string(i + 1) + " is neither in the staircase nor a leading monomial");
      M.nf.push_back(std::move(*v));
    }
  }
  return M;
}

template <class Field>
MultMatrix<Field> load_mult_matrix_gb_text(const Field& F, const std::string& text, const GDegreeMap* gmap = nullptr) {
  auto h = parse_gb_text(text);
  std::vector<SkewPolynomial<Field>> gb;
  for (const auto& s : h.polys) gb.push_back(parse_polynomial(F, s, h.names));
  auto M = mult_matrix_from_gb(F, gb, h.order);
  if (gmap) check_g_homogeneous(F, M, *gmap);
  return M;
}

// "D k n", D staircase lines of n exponents, then D lines "trivial j" or "dense c_0 .. c_{D-1}"
template <class Field>
MultMatrix<Field> load_mult_matrix_text(const Field& F, const std::string& text, const GDegreeMap* gmap = nullptr) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("matrix file is empty");
  std::size_t D, k, n;
  {
    std::istringstream hs(lines[0]);
    if (!(hs >> D >> k >> n) || D == 0 || n == 0) throw std::invalid_argument("matrix header must read 'D k n'");
  }
  if (lines.size() != 1 + 2 * D) throw std::invalid_argument("matrix file: expected D staircase lines and D column lines");
  MultMatrix<Field> M;
  M.nvars = n;
  std::unordered_map<Exponents, std::size_t, MonomialHash> pos;
  for (std::size_t i = 0; i < D; ++i) {
    std::istringstream ls(lines[1 + i]);
    Exponents e(n);
    for (auto& v : e)
      if (!(ls >> v)) throw std::invalid_argument("matrix file: bad staircase line");
    if (!pos.emplace(e, i).second) throw std::invalid_argument("matrix file: repeated staircase monomial");
    M.staircase.push_back(e);
  }
  if (std::any_of(M.staircase[0].begin(), M.staircase[0].end(), [](auto e) { return e != 0; }))
    throw std::invalid_argument("matrix file: first staircase monomial must be 1");
  for (std::size_t j = 0; j < D; ++j) {
    std::istringstream ls(lines[1 + D + j]);
    std::string kind;
    ls >> kind;
    typename MultMatrix<Field>::Column col;
    if (kind == "trivial") {
      if (!(ls >> col.target) || col.target >= D) throw std::invalid_argument("matrix file: bad trivial column");
      Exponents want = M.staircase[j];
      want[n - 1] += 1;
      if (M.staircase[col.target] != want) throw std::invalid_argument("matrix file: trivial column points at the wrong monomial");
    } else if (kind == "dense") {
      col.trivial = false;
      std::string tok;
      while (ls >> tok) {
        mpq_class q(tok);
        q.canonicalize();
        col.dense.push_back(F.from_rational(q));
      }
      if (col.dense.size() != D) throw std::invalid_argument("matrix file: dense column must have D entries");
    } else {
      throw std::invalid_argument("matrix file: column kind must be 'trivial' or 'dense'");
    }
    M.columns.push_back(std::move(col));
  }
  if (M.dense_count() != k) throw std::invalid_argument("matrix file: header k does not match the dense column count");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Exponents xi(n, 0);
    xi[i] = 1;
    auto it = pos.find(xi);
    if (it == pos.end())
      throw std::invalid_argument("x" + std::to_string(i + 1) + " is not in the staircase and the matrix file carries no normal form for it");
    std::vector<typename Field::Element> v(D, F.zero());
    v[it->second] = F.one();
    M.nf.push_back(std::move(v));
  }
  if (gmap) check_g_homogeneous(F, M, *gmap);
  return M;
}

template <class Field>
std::string mult_matrix_to_text(const Field& F, const MultMatrix<Field>& M) {
  std::ostringstream out;
  out << M.dimension() << ' ' << M.dense_count() << ' ' << M.nvars << '\n';
  for (const auto& e : M.staircase) {
    for (std::size_t p = 0; p < e.size(); ++p) out << (p ? " " : "") << e[p];
    out << '\n';
  }
  for (const auto& c : M.columns) {
    if (c.trivial) {
      out << "trivial " << c.target << '\n';
      continue;
    }
    out << "dense";
    for (const auto& v : c.dense) out << ' ' << F.to_string(v);
    out << '\n';
  }
  return out.str();
}

// ---- G-degree data ----

struct Deltas {
  std::uint64_t d = 1;                // minimal d > 0 with deg(x_n^d) = 0
  std::vector<std::uint64_t> delta;   // delta[i] minimal with deg(x_n^delta) = deg(x_i); delta[n-1] for x_n^D
};

Deltas compute_deltas(const GDegreeMap& g, std::uint64_t D);

// ---- Krylov sequences ----

enum class KrylovMode { Plain, Blocked };

// Rows v_e = r M^e for the requested exponents. Plain: one small step at a time over full dense
// columns, serial. Blocked: columns restricted to their G-degree block, steps of M^d between
// exponents of one residue class, blocks processed concurrently.
template <class Field>
class KrylovEngine {
 public:
  using Element = typename Field::Element;
  using Vec = std::vector<Element>;
  using Callback = std::function<void(std::uint64_t, const Vec&)>;

  KrylovEngine(const Field& F, const MultMatrix<Field>& M, KrylovMode mode, const GDegreeMap* gmap, std::uint64_t d)
      : F_(F), M_(M), mode_(mode), d_(mode == KrylovMode::Plain ? 1 : d) {
    if (mode_ == KrylovMode::Blocked) build_blocks(gmap);
  }

  void run(const Vec& r, std::vector<std::uint64_t> exps, const Callback& cb) {
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    if (mode_ == KrylovMode::Plain) {
      Vec v = r;
      std::uint64_t e = 0;
      for (auto target : exps) {
        while (e < target) {
          v = small_step_plain(v);
          ++e;
        }
        cb(e, v);
      }
      return;
    }
    std::map<std::uint64_t, std::vector<std::uint64_t>> classes;
    for (auto e : exps) classes[e % d_].push_back(e);
    for (auto& [res, list] : classes) {
      Vec v = r;
      std::uint64_t e = 0;
      for (auto target : list) {
        while (target - e >= d_ && e + d_ <= target && have_power_) {
          v = big_step(v);
          e += d_;
        }
        while (e < target) {
          v = small_step_blocked(v);
          ++e;
        }
        cb(e, v);
      }
    }
  }

  std::size_t power_nontrivial_columns() const {
    std::size_t c = 0;
    for (const auto& b : blocks_)
      for (const auto& col : b.power) c += col.trivial ? 0 : 1;
    return c;
  }

  std::size_t block_count() const { return blocks_.size(); }

 private:
  struct SparseCol {
    bool trivial = true;
    std::size_t target = 0;       // global index
    std::vector<Element> local;   // dense over the rows of the target block
  };
  struct Block {
    std::vector<std::size_t> members;  // global indices of staircase monomials in this block
    std::size_t src = 0;               // block holding the rows that feed this block's columns
    std::vector<SparseCol> cols;       // columns of M for members
    std::vector<SparseCol> power;      // columns of M^d for members (rows in this same block)
  };

  Vec small_step_plain(const Vec& v) const {
    std::size_t D = M_.dimension();
    Vec out(D, F_.zero());
    for (std::size_t j = 0; j < D; ++j) {
      const auto& c = M_.columns[j];
      if (c.trivial) {
        out[j] = v[c.target];
      } else {
        Element acc = F_.zero();
        for (std::size_t i = 0; i < D; ++i) acc = F_.add(acc, F_.mul(v[i], c.dense[i]));
        out[j] = acc;
      }
    }
    return out;
  }

  Vec small_step_blocked(const Vec& v) const { return step_with(v, false); }
  Vec big_step(const Vec& v) const { return step_with(v, true); }

  Vec step_with(const Vec& v, bool power) const {
    Vec out(M_.dimension(), F_.zero());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& B = blocks_[b];
      const Block& R = blocks_[power ? b : B.src];
      const auto& cols = power ? B.power : B.cols;
      for (std::size_t q = 0; q < B.members.size(); ++q) {
        const SparseCol& c = cols[q];
        if (c.trivial) {
          out[B.members[q]] = v[c.target];
          continue;
        }
        Element acc = F_.zero();
        for (std::size_t i = 0; i < R.members.size(); ++i) acc = F_.add(acc, F_.mul(v[R.members[i]], c.local[i]));
        out[B.members[q]] = acc;
      }
    }
    return out;
  }

  void build_blocks(const GDegreeMap* gmap) {
    std::size_t D = M_.dimension(), n = M_.nvars;
    GDegreeMap triv = GDegreeMap::trivial(n);
    const GDegreeMap& g = gmap ? *gmap : triv;
    std::size_t nb = g.group_order();
    blocks_.assign(nb, Block{});
    block_of_.assign(D, 0);
    local_of_.assign(D, 0);
    for (std::size_t j = 0; j < D; ++j) {
      auto b = g.index_of(g.gdegree(M_.staircase[j]));
      block_of_[j] = b;
      local_of_[j] = blocks_[b].members.size();
      blocks_[b].members.push_back(j);
    }
    auto dn = g.var_degree(n - 1);
    for (std::size_t b = 0; b < nb; ++b) {
      Block& B = blocks_[b];
      // rows feeding block b under M live in degree deg(b) + deg(x_n)
      if (!B.members.empty()) {
        auto deg = g.gdegree(M_.staircase[B.members[0]]);
        B.src = g.index_of(g.add(deg, dn));
      }
      for (auto j : B.members) {
        const auto& c = M_.columns[j];
        SparseCol sc;
        if (c.trivial) {
          sc.target = c.target;
        } else {
          sc.trivial = false;
          const Block& R = blocks_[B.src];
          // R may not be filled yet; defer to the second pass
          (void)R;
        }
        B.cols.push_back(std::move(sc));
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      Block& B = blocks_[b];
      const Block& R = blocks_[B.src];
      for (std::size_t q = 0; q < B.members.size(); ++q) {
        const auto& c = M_.columns[B.members[q]];
        if (c.trivial) continue;
        auto& local = B.cols[q].local;
        local.assign(R.members.size(), F_.zero());
        for (std::size_t i = 0; i < R.members.size(); ++i) local[i] = c.dense[R.members[i]];
      }
    }
    build_power();
  }

  // columns of M^d: chase trivial chains, expand the rest on their block
  void build_power() {
    std::size_t D = M_.dimension();
    for (auto& B : blocks_) B.power.assign(B.members.size(), SparseCol{});
    std::vector<std::size_t> all(D);
    for (std::size_t j = 0; j < D; ++j) all[j] = j;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t j = 0; j < D; ++j) {
      std::size_t cur = j;
      std::uint64_t s = 0;
      while (s < d_ && M_.columns[cur].trivial) {
        cur = M_.columns[cur].target;
        ++s;
      }
      SparseCol out;
      if (s == d_) {
        out.target = cur;
      } else {
        Vec w(D, F_.zero());
        w[cur] = F_.one();
        for (; s < d_; ++s) w = M_.apply(F_, w);
        out.trivial = false;
        const Block& B = blocks_[block_of_[j]];
        out.local.assign(B.members.size(), F_.zero());
        for (std::size_t i = 0; i < B.members.size(); ++i) out.local[i] = w[B.members[i]];
        for (std::size_t i = 0; i < D; ++i)
          if (!F_.is_zero(w[i]) && block_of_[i] != block_of_[j])
            throw std::logic_error("x_n^d does not preserve G-degree blocks");
      }
      blocks_[block_of_[j]].power[local_of_[j]] = std::move(out);
    }
    have_power_ = true;
  }

  const Field& F_;
  const MultMatrix<Field>& M_;
  KrylovMode mode_;
  std::uint64_t d_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_, local_of_;
  bool have_power_ = false;
};

template <class Field>
std::map<std::uint64_t, std::vector<typename Field::Element>> krylov_sequence(const Field& F, const MultMatrix<Field>& M,
                                                                              const std::vector<typename Field::Element>& r,
                                                                              const std::vector<std::uint64_t>& exps,
                                                                              KrylovMode mode = KrylovMode::Plain,
                                                                              const GDegreeMap* gmap = nullptr,
                                                                              std::uint64_t d = 1) {
  std::map<std::uint64_t, std::vector<typename Field::Element>> out;
  KrylovEngine<Field>(F, M, mode, gmap, d).run(r, exps, [&](std::uint64_t e, const auto& v) { out[e] = v; });
  return out;
}

// ---- shape basis ----

template <class Field>
struct ShapeLexBasis {
  using Element = typename Field::Element;
  std::size_t D = 0, nvars = 0;
  std::vector<Element> eliminant;              // coefficients of x_n^e, e < D; x_n^D + sum
  std::vector<std::vector<Element>> others;    // x_i + sum others[i][e] x_n^e
  Deltas deltas;
  std::size_t distinct_reads = 0;
  std::size_t retries = 0;
  double seq_seconds = 0, solve_seconds = 0;

  bool same_polynomials(const ShapeLexBasis& o) const { return eliminant == o.eliminant && others == o.others; }

  std::vector<SkewPolynomial<Field>> polynomials(const Field& F) const {
    std::vector<SkewPolynomial<Field>> out;
    auto xn = [&](std::uint64_t e) {
      Exponents x(nvars, 0);
      x[nvars - 1] = static_cast<std::uint32_t>(e);
      return Monomial::pure(x);
    };
    SkewPolynomial<Field> g(nvars);
    g.add_term(F, xn(D), F.one());
    for (std::size_t e = 0; e < D; ++e) g.add_term(F, xn(e), eliminant[e]);
    out.push_back(g);
    for (std::size_t i = 0; i + 1 < nvars; ++i) {
      SkewPolynomial<Field> p(nvars);
      p.add_term(F, Monomial::var(nvars, i), F.one());
      for (std::size_t e = 0; e < D; ++e) p.add_term(F, xn(e), others[i][e]);
      out.push_back(p);
    }
    return out;
  }
};

struct ShapeOptions {
  std::uint64_t seed = 1;
  KrylovMode mode = KrylovMode::Blocked;
  const GDegreeMap* gmap = nullptr;   // nullptr: no group information (d = 1)
  int max_retries = 3;
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Field>
ShapeLexBasis<Field> solve_shape_basis(const Field& F, const MultMatrix<Field>& M, const ShapeOptions& opts) {
  using Element = typename Field::Element;
  using Clock = std::chrono::steady_clock;
  const std::size_t D = M.dimension(), n = M.nvars;
  GDegreeMap triv = GDegreeMap::trivial(n);
  const GDegreeMap& g = opts.gmap ? *opts.gmap : triv;
  Deltas dl = compute_deltas(g, D);
  const std::uint64_t d = dl.d;
  const std::uint64_t dn = dl.delta[n - 1];
  const std::uint64_t cn = (D - dn) / d;

  // exponents of [x_n^e] and [x_i x_n^e] the systems read
  std::set<std::uint64_t> pow_reads;
  std::vector<std::set<std::uint64_t>> mixed_reads(n - 1);
  for (std::uint64_t j = 0; j < 2 * cn; ++j) pow_reads.insert(2 * dn + j * d);
  std::vector<std::uint64_t> ci(n - 1, 0), sigma(n - 1, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::uint64_t di = dl.delta[i];
    ci[i] = di <= D - 1 ? (D - 1 - di) / d + 1 : 0;
    // rows aligned with the eliminant system; when di < dn those rows vanish on ker M_n inside
    // block di and there is one more unknown than rows, so read from x_n^{jd} instead
    std::uint64_t s = 2 * dn;
    while (s < di) s += d;
    sigma[i] = di < dn ? 0 : s - di;
    for (std::uint64_t j = 0; j + 1 < 2 * ci[i]; ++j) pow_reads.insert(sigma[i] + di + j * d);
    for (std::uint64_t j = 0; j < ci[i]; ++j) mixed_reads[i].insert(sigma[i] + j * d);
  }
  std::vector<std::uint64_t> exps(pow_reads.begin(), pow_reads.end());
  for (const auto& s : mixed_reads) exps.insert(exps.end(), s.begin(), s.end());

  ShapeLexBasis<Field> out;
  out.D = D;
  out.nvars = n;
  out.deltas = dl;
  for (const auto& s : mixed_reads) out.distinct_reads += s.size();
  out.distinct_reads += pow_reads.size();

  std::mt19937_64 rng(opts.seed);
  KrylovEngine<Field> engine(F, M, opts.mode, opts.gmap, d);
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    std::vector<Element> r(D);
    for (auto& x : r) x = F.random(rng);
    std::unordered_map<std::uint64_t, Element> powv;
    std::vector<std::unordered_map<std::uint64_t, Element>> mixv(n - 1);
    auto t0 = Clock::now();
    engine.run(r, exps, [&](std::uint64_t e, const std::vector<Element>& v) {
      if (pow_reads.count(e)) powv[e] = v[0];
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!mixed_reads[i].count(e)) continue;
        Element acc = F.zero();
        for (std::size_t s = 0; s < D; ++s)
          if (!F.is_zero(M.nf[i][s])) acc = F.add(acc, F.mul(v[s], M.nf[i][s]));
        mixv[i][e] = acc;
      }
    });
    auto t1 = Clock::now();
    out.seq_seconds += std::chrono::duration<double>(t1 - t0).count();

    bool singular = false;
    // eliminant: unknowns at x_n^{dn + j d}
    {
      DenseMatrix<Field> A(cn, cn, F.zero()), B(cn, 1, F.zero());
      for (std::uint64_t j = 0; j < cn; ++j) {
        for (std::uint64_t k = 0; k < cn; ++k) A.at(j, k) = powv.at(2 * dn + (j + k) * d);
        B.at(j, 0) = F.neg(powv.at(D + dn + j * d));
      }
      auto X = solve_nonsingular(F, A, B);
      if (!X) {
        singular = true;
      } else {
        out.eliminant.assign(D, F.zero());
        for (std::uint64_t k = 0; k < cn; ++k) out.eliminant[dn + k * d] = X->at(k, 0);
      }
    }
    out.others.assign(n - 1, std::vector<Element>(D, F.zero()));
    for (std::size_t i = 0; i + 1 < n && !singular; ++i) {
      std::uint64_t c = ci[i], di = dl.delta[i];
      if (c == 0) continue;
      DenseMatrix<Field> A(c, c, F.zero()), B(c, 1, F.zero());
      for (std::uint64_t j = 0; j < c; ++j) {
        for (std::uint64_t k = 0; k < c; ++k) A.at(j, k) = powv.at(sigma[i] + di + (j + k) * d);
        B.at(j, 0) = F.neg(mixv[i].at(sigma[i] + j * d));
      }
      auto X = solve_nonsingular(F, A, B);
      if (!X) {
        singular = true;
        break;
      }
      for (std::uint64_t k = 0; k < c; ++k) out.others[i][di + k * d] = X->at(k, 0);
    }
    out.solve_seconds += std::chrono::duration<double>(Clock::now() - t1).count();
    if (!singular) return out;
    ++out.retries;
  }
  throw SingularSystem("Hankel systems stayed singular after " + std::to_string(opts.max_retries) + " retries; the ideal is probably not in shape position");
}

// NF(x_n^D + g_n) and NF(x_i + g_i) computed column-side; all must vanish.
template <class Field>
std::vector<std::vector<typename Field::Element>> shape_residual_vectors(const Field& F, const MultMatrix<Field>& M,
                                                                         const ShapeLexBasis<Field>& B) {
  using Element = typename Field::Element;
  std::size_t D = M.dimension(), n = M.nvars;
  std::vector<std::vector<Element>> powers;  // NF(x_n^e), e <= D
  std::vector<Element> w(D, F.zero());
  w[0] = F.one();
  for (std::size_t e = 0; e <= D; ++e) {
    powers.push_back(w);
    if (e < D) w = M.apply(F, w);
  }
  std::vector<std::vector<Element>> out;
  std::vector<Element> rn = powers[D];
  for (std::size_t e = 0; e < D; ++e)
    if (!F.is_zero(B.eliminant[e]))
      for (std::size_t s = 0; s < D; ++s) rn[s] = F.add(rn[s], F.mul(B.eliminant[e], powers[e][s]));
  out.push_back(rn);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<Element> ri = M.nf[i];
    for (std::size_t e = 0; e < D; ++e)
      if (!F.is_zero(B.others[i][e]))
        for (std::size_t s = 0; s < D; ++s) ri[s] = F.add(ri[s], F.mul(B.others[i][e], powers[e][s]));
    out.push_back(ri);
  }
  return out;
}

// r M^e w = 0 for `count` exponents past the ones the solver read, with a fresh seeded r
template <class Field>
bool shape_residuals_vanish(const Field& F, const MultMatrix<Field>& M, const ShapeLexBasis<Field>& B,
                            std::uint64_t seed, std::size_t count = 10) {
  using Element = typename Field::Element;
  auto ws = shape_residual_vectors(F, M, B);
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::vector<Element> r(M.dimension());
  for (auto& x : r) x = F.random(rng);
  std::uint64_t start = 2 * M.dimension() + 1;
  std::vector<std::uint64_t> exps;
  for (std::size_t k = 0; k < count; ++k) exps.push_back(start + k);
  bool ok = true;
  KrylovEngine<Field>(F, M, KrylovMode::Plain, nullptr, 1).run(r, exps, [&](std::uint64_t, const std::vector<Element>& v) {
    for (const auto& w : ws) {
      Element acc = F.zero();
      for (std::size_t s = 0; s < v.size(); ++s) acc = F.add(acc, F.mul(v[s], w[s]));
      if (!F.is_zero(acc)) ok = false;
    }
  });
  return ok;
}

template <class Field>
struct SpeedupReport {
  double plain_seq = 0, plain_solve = 0, blocked_seq = 0, blocked_solve = 0;
  bool identical = false;
  std::size_t D = 0, dense_columns = 0, group_order = 1, power_nontrivial = 0;
  ShapeLexBasis<Field> basis;
};

template <class Field>
SpeedupReport<Field> blocked_speedup_bench(const Field& F, const MultMatrix<Field>& M, const GDegreeMap& g,
                                           std::uint64_t seed, int repeats = 1) {
  SpeedupReport<Field> rep;
  rep.D = M.dimension();
  rep.dense_columns = M.dense_count();
  rep.group_order = g.group_order();
  ShapeOptions plain{seed, KrylovMode::Plain, nullptr, 3};
  ShapeOptions blocked{seed, KrylovMode::Blocked, &g, 3};
  ShapeLexBasis<Field> a, b;
  rep.plain_seq = rep.plain_solve = rep.blocked_seq = rep.blocked_solve = 1e300;
  for (int k = 0; k < std::max(1, repeats); ++k) {
    a = solve_shape_basis(F, M, plain);
    b = solve_shape_basis(F, M, blocked);
    rep.plain_seq = std::min(rep.plain_seq, a.seq_seconds);
    rep.plain_solve = std::min(rep.plain_solve, a.solve_seconds);
    rep.blocked_seq = std::min(rep.blocked_seq, b.seq_seconds);
    rep.blocked_solve = std::min(rep.blocked_solve, b.solve_seconds);
  }
  rep.identical = a.same_polynomials(b);
  rep.power_nontrivial = KrylovEngine<Field>(F, M, KrylovMode::Blocked, &g, b.deltas.d).power_nontrivial_columns();
  rep.basis = b;
  return rep;
}

// ---- synthetic inputs ----

// Bivariate staircase with strictly decreasing column heights h_0 > h_1 > ... (Property M holds),
// G = Z/q with deg(x_n) = 1 and deg(x_1) = mu. Dense columns are random inside their G-degree block.
template <class Field>
MultMatrix<Field> synthetic_mult_matrix(const Field& F, const std::vector<std::uint32_t>& heights, std::int64_t q,
                                        std::int64_t mu, std::mt19937_64& rng) {
  using Element = typename Field::Element;
  for (std::size_t a = 1; a < heights.size(); ++a)
    if (heights[a] >= heights[a - 1]) throw std::invalid_argument("heights must be strictly decreasing");
  if (heights.size() < 2 || heights.back() == 0) throw std::invalid_argument("need at least two nonempty columns");
  std::vector<Monomial> S;
  for (std::uint32_t a = 0; a < heights.size(); ++a)
    for (std::uint32_t b = 0; b < heights[a]; ++b) S.push_back(Monomial::pure({a, b}));
  MonomialOrder order = MonomialOrder::drl(2);
  sort_monomials(S, order);
  GDegreeMap g = GDegreeMap::cyclic(q, {mu, 1});
  MultMatrix<Field> M;
  M.nvars = 2;
  std::unordered_map<Exponents, std::size_t, MonomialHash> pos;
  for (std::size_t i = 0; i < S.size(); ++i) {
    pos[S[i].x] = i;
    M.staircase.push_back(S[i].x);
  }
  std::size_t D = S.size();
  for (std::size_t j = 0; j < D; ++j) {
    Exponents my = S[j].x;
    my[1] += 1;
    typename MultMatrix<Field>::Column col;
    auto it = pos.find(my);
    if (it != pos.end()) {
      col.target = it->second;
    } else {
      col.trivial = false;
      col.dense.assign(D, F.zero());
      auto want = g.gdegree(my);
      for (std::size_t i = 0; i < D; ++i)
        if (g.gdegree(S[i].x) == want) col.dense[i] = F.random(rng);
    }
    M.columns.push_back(std::move(col));
  }
  std::vector<Element> nfx(D, F.zero());
  nfx[pos.at(Exponents{1, 0})] = F.one();
  M.nf.push_back(nfx);
  return M;
}

// Shape position needs each G-degree block to hold exactly the Krylov vectors x_n^e, e < D, of
// its degree.
inline bool synthetic_blocks_balanced(const std::vector<std::uint32_t>& heights, std::int64_t q, std::int64_t mu) {
  std::vector<std::int64_t> count(q, 0);
  std::int64_t D = 0;
  for (std::uint32_t a = 0; a < heights.size(); ++a)
    for (std::uint32_t b = 0; b < heights[a]; ++b) {
      ++count[((mu * a + b) % q + q) % q];
      ++D;
    }
  for (std::int64_t r = 0; r < q; ++r)
    if (count[r] != D / q + (r < D % q ? 1 : 0)) return false;
  return true;
}

// 1 is a cyclic vector for M, checked block by block on the Krylov vectors of each G-degree.
template <class Field>
bool krylov_cyclic(const Field& F, const MultMatrix<Field>& M, const GDegreeMap& g) {
  std::size_t D = M.dimension();
  std::vector<std::vector<std::vector<typename Field::Element>>> per_block(g.group_order());
  std::vector<std::size_t> block_of(D);
  std::vector<std::size_t> block_size(g.group_order(), 0);
  for (std::size_t j = 0; j < D; ++j) block_size[block_of[j] = g.index_of(g.gdegree(M.staircase[j]))]++;
  std::vector<typename Field::Element> w(D, F.zero());
  w[0] = F.one();
  for (std::size_t e = 0; e < D; ++e) {
    std::size_t b = std::numeric_limits<std::size_t>::max();
    for (std::size_t s = 0; s < D; ++s)
      if (!F.is_zero(w[s])) b = block_of[s];
    if (b == std::numeric_limits<std::size_t>::max()) return false;
    per_block[b].push_back(w);
    w = M.apply(F, w);
  }
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    if (per_block[b].size() != block_size[b]) return false;
    if (per_block[b].empty()) continue;
    std::vector<std::size_t> rows;
    for (std::size_t s = 0; s < D; ++s)
      if (block_of[s] == b) rows.push_back(s);
    DenseMatrix<Field> A(rows.size(), per_block[b].size(), F.zero());
    for (std::size_t c = 0; c < per_block[b].size(); ++c)
      for (std::size_t r = 0; r < rows.size(); ++r) A.at(r, c) = per_block[b][c][rows[r]];
    if (matrix_rank(F, A) != rows.size()) return false;
  }
  return true;
}

// Regenerates the random columns until the result is in shape position.
template <class Field>
MultMatrix<Field> synthetic_shape_matrix(const Field& F, const std::vector<std::uint32_t>& heights, std::int64_t q,
                                         std::int64_t mu, std::mt19937_64& rng, int attempts = 8) {
  if (!synthetic_blocks_balanced(heights, q, mu))
    throw std::invalid_argument("staircase blocks do not match the Krylov degree counts");
  GDegreeMap g = GDegreeMap::cyclic(q, {mu, 1});
  for (int k = 0; k < attempts; ++k) {
    auto M = synthetic_mult_matrix(F, heights, q, mu, rng);
    if (krylov_cyclic(F, M, g)) return M;
  }
  throw std::runtime_error("no cyclic synthetic matrix found");
}

}  // namespace relguess
