#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "relguess/hankel.hpp"
#include "relguess/linalg.hpp"
#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"
#include "relguess/structures.hpp"
#include "relguess/tables.hpp"

namespace relguess {

enum class RelationStatus { Unverified, Fake, CorrectSoFar };

inline const char* status_name(RelationStatus s) {
  switch (s) {
    case RelationStatus::Fake:
      return "fake";
    case RelationStatus::CorrectSoFar:
      return "correct-so-far";
    default:
      return "unverified";
  }
}

template <class Field>
struct Relation {
  SkewPolynomial<Field> poly;
  Monomial lm;
  RelationStatus status = RelationStatus::Unverified;
  std::size_t coset = 0;
};

template <class Field>
struct CosetData {
  Exponents representative;
  std::vector<Monomial> labels;
  DenseMatrix<Field> matrix;
  std::vector<Monomial> profile;
};

template <class Field>
struct TraceStep {
  std::size_t coset = 0;
  Monomial candidate;
  std::vector<Monomial> labels;
  DenseMatrix<Field> matrix;
  bool extended = false;
  std::optional<SkewPolynomial<Field>> relation;
};

template <class Field>
struct GuessReport {
  std::vector<Relation<Field>> relations;
  std::vector<Monomial> staircase;
  std::size_t query_count = 0;
  std::size_t matrix_rows = 0, matrix_cols = 0;
  std::size_t fake = 0, correct = 0;
  std::vector<CosetData<Field>> cosets;
  std::vector<TraceStep<Field>> trace;
};

struct GuessOptions {
  const Cone* cone = nullptr;                 // restrict to T[C]; divisibility becomes cone-relative
  std::size_t extra_rows = 0;                 // buffer of additional shifts in the rank tests
  std::optional<std::size_t> max_staircase;   // adaptive modes
  std::optional<Exponents> caps;              // adaptive cone stream, LEX needs them
  std::optional<std::uint64_t> max_degree;    // adaptive candidate degree bound
  Exec exec = Exec::Parallel;
  bool trace = false;
};

namespace detail {

inline DividesFn divisibility(const GuessOptions& o) {
  if (!o.cone) return [](const Monomial& a, const Monomial& b) { return divides(a, b); };
  const Cone* c = o.cone;
  return [c](const Monomial& a, const Monomial& b) { return c->divides(a, b); };
}

inline ExponentFilter universe_filter(const GuessOptions& o) {
  if (!o.cone) return {};
  const Cone* c = o.cone;
  return [c](const Exponents& e) { return c->contains(e); };
}

inline bool contains_monomial(const std::vector<Monomial>& v, const Monomial& m) {
  return std::find(v.begin(), v.end(), m) != v.end();
}

template <class Field>
std::vector<Monomial> leading_monomials(const std::vector<Relation<Field>>& rels) {
  std::vector<Monomial> lms;
  for (const auto& r : rels) lms.push_back(r.lm);
  return lms;
}

inline Exponents grow_caps(const std::vector<Monomial>& ms, std::size_t n, std::uint32_t slack) {
  Exponents caps(n, 0);
  for (const auto& m : ms)
    for (std::size_t p = 0; p < n; ++p) caps[p] = std::max(caps[p], m.x[p]);
  for (auto& c : caps) c += slack;
  return caps;
}

template <class Field>
DenseMatrix<Field> submatrix(const Field& F, const MultiHankelMatrix<Field>& H, const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols) {
  DenseMatrix<Field> A(rows.size(), cols.size(), F.zero());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) A.at(i, j) = H.m.at(rows[i], cols[j]);
  return A;
}

inline std::size_t index_of(const std::vector<Monomial>& v, const Monomial& m) {
  auto it = std::find(v.begin(), v.end(), m);
  if (it == v.end()) throw std::logic_error("label not found");
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace detail

// First `count` monomials of the universe (N^n or the cone) not in `exclude`, increasing.
inline std::vector<Monomial> next_universe_monomials(const MonomialOrder& order, const GuessOptions& opts,
                                                     const std::vector<Monomial>& exclude, std::size_t count) {
  std::unordered_set<Monomial, MonomialHash> ex(exclude.begin(), exclude.end());
  auto filter = detail::universe_filter(opts);
  std::size_t n = order.nvars();
  std::vector<Monomial> out;
  if (count == 0) return out;
  std::uint32_t slack = static_cast<std::uint32_t>(count);
  std::size_t want = exclude.size() + count;
  for (int attempt = 0; attempt < 32; ++attempt) {
    EnumerationBound b;
    if (order.kind() == OrderKind::Lex)
      b.caps = detail::grow_caps(exclude, n, slack);
    else
      b.max_count = want;
    out.clear();
    for (auto& m : enumerate_monomials(order, filter, b)) {
      if (ex.count(m)) continue;
      out.push_back(std::move(m));
      if (out.size() == count) return out;
    }
    slack *= 2;
    want *= 2;
  }
  return out;
}

// ---------------- batch sFGLM ----------------

template <class Field>
GuessReport<Field> sfglm(TableSource<Field>& src, const MonomialOrder& order, std::vector<Monomial> T,
                         const GuessOptions& opts = {}) {
  const Field& F = src.field();
  TableView<Field> u(src);
  auto div = detail::divisibility(opts);
  sort_monomials(T, order);
  if (T.empty()) throw std::invalid_argument("sfglm: empty monomial set");
  if (!is_staircase(T, T, div)) throw std::invalid_argument("sfglm: T is not a staircase");
  if (opts.cone)
    for (const auto& m : T)
      if (!opts.cone->contains(m.x)) throw std::invalid_argument("sfglm: T leaves the cone");

  std::vector<Monomial> R = T;
  auto B = next_universe_monomials(order, opts, T, opts.extra_rows);
  R.insert(R.end(), B.begin(), B.end());

  auto H = build_hankel<Field>(u, R, T, opts.exec);
  std::vector<Monomial> P;
  for (auto c : column_rank_profile(F, H.m)) P.push_back(T[c]);
  auto S = staircase_close(P, T, order, div);

  GuessReport<Field> rep;
  rep.matrix_rows = R.size();
  rep.matrix_cols = T.size();
  rep.staircase = S;

  std::vector<std::size_t> all_rows(R.size()), scols;
  for (std::size_t i = 0; i < R.size(); ++i) all_rows[i] = i;
  for (const auto& s : S) scols.push_back(detail::index_of(T, s));
  auto A = detail::submatrix(F, H, all_rows, scols);

  std::vector<Monomial> L;
  for (const auto& m : T)
    if (!detail::contains_monomial(S, m)) L.push_back(m);
  while (!L.empty()) {
    Monomial g = L.front();
    std::size_t gc = detail::index_of(T, g);
    std::vector<typename Field::Element> b(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) b[i] = F.neg(H.m.at(i, gc));
    auto gamma = solve_vector(F, A, b);
    if (gamma) {
      SkewPolynomial<Field> p(g.nvars());
      p.add_term(F, g, F.one());
      for (std::size_t j = 0; j < S.size(); ++j) p.add_term(F, S[j], (*gamma)[j]);
      rep.relations.push_back({std::move(p), g});
    }
    std::vector<Monomial> rest;
    for (const auto& m : L)
      if (!div(g, m)) rest.push_back(m);
    L = std::move(rest);
  }
  rep.query_count = u.distinct();
  return rep;
}

// ---------------- lattice sFGLM ----------------

template <class Field>
GuessReport<Field> lattice_sfglm(TableSource<Field>& src, const MonomialOrder& order, std::vector<Monomial> T,
                                 const Lattice& lattice, const GuessOptions& opts = {}) {
  const Field& F = src.field();
  TableView<Field> u(src);
  sort_monomials(T, order);
  if (T.empty()) throw std::invalid_argument("lattice_sfglm: empty monomial set");
  if (!is_staircase(T, T)) throw std::invalid_argument("lattice_sfglm: T is not a staircase");
  std::size_t n = T.front().nvars();
  std::size_t ncos = lattice.index();
  Monomial one = Monomial::one(n);

  std::vector<CosetData<Field>> cos(ncos);
  for (std::size_t a = 0; a < ncos; ++a) {
    cos[a].representative = lattice.domain()[a];
    cos[a].labels.push_back(one);
  }
  for (const auto& m : T) {
    auto a = lattice.coset_index(m.x);
    if (!m.is_one()) cos[a].labels.push_back(m);
  }

  std::vector<MultiHankelMatrix<Field>> H(ncos);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) if (opts.exec == Exec::Parallel)
  for (std::size_t a = 0; a < ncos; ++a) {
    try {
      H[a] = build_hankel<Field>(u, cos[a].labels, cos[a].labels, Exec::Serial);
      for (auto c : column_rank_profile(F, H[a].m)) cos[a].profile.push_back(cos[a].labels[c]);
      cos[a].matrix = H[a].m;
    } catch (...) {
#pragma omp critical(relguess_lattice_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  std::vector<Monomial> U;
  for (const auto& c : cos) U.insert(U.end(), c.profile.begin(), c.profile.end());
  sort_monomials(U, order);
  U.erase(std::unique(U.begin(), U.end()), U.end());
  auto S = staircase_close(U, T, order);

  GuessReport<Field> rep;
  rep.staircase = S;
  for (const auto& c : cos) {
    rep.matrix_rows += c.labels.size();
    rep.matrix_cols += c.labels.size();
  }

  std::vector<Monomial> L;
  for (const auto& m : T)
    if (!detail::contains_monomial(S, m)) L.push_back(m);
  while (!L.empty()) {
    Monomial g = L.front();
    auto a = lattice.coset_index(g.x);
    const auto& Sa = cos[a].profile;
    std::vector<std::size_t> idx;
    for (const auto& s : Sa) idx.push_back(detail::index_of(cos[a].labels, s));
    auto A = detail::submatrix(F, H[a], idx, idx);
    std::size_t gc = detail::index_of(cos[a].labels, g);
    std::vector<typename Field::Element> b;
    for (auto i : idx) b.push_back(F.neg(H[a].m.at(i, gc)));
    auto gamma = solve_vector(F, A, b);
    if (gamma) {
      SkewPolynomial<Field> p(n);
      p.add_term(F, g, F.one());
      for (std::size_t j = 0; j < Sa.size(); ++j) p.add_term(F, Sa[j], (*gamma)[j]);
      rep.relations.push_back({std::move(p), g, RelationStatus::Unverified, a});
    }
    std::vector<Monomial> rest;
    for (const auto& m : L)
      if (!divides(g, m)) rest.push_back(m);
    L = std::move(rest);
  }
  rep.cosets = std::move(cos);
  rep.query_count = u.distinct();
  return rep;
}

// ---------------- adaptive variants ----------------

namespace detail {

template <class Field>
class AdaptiveEngine {
 public:
  using Element = typename Field::Element;

  AdaptiveEngine(TableSource<Field>& src, const MonomialOrder& order, const Lattice* lattice, const GuessOptions& opts)
      : F_(src.field()), u_(src), order_(order), lattice_(lattice), opts_(opts), div_(divisibility(opts)) {
    n_ = src.dimension();
    ncos_ = lattice ? lattice->index() : 1;
  }

  GuessReport<Field> run() {
    GuessReport<Field> rep;
    Monomial one = Monomial::one(n_);
    Element u0 = u_.query(one.x);
    if (F_.is_zero(u0)) {
      rep.relations.push_back({SkewPolynomial<Field>::monomial(F_, one, F_.one()), one});
      rep.query_count = u_.distinct();
      return rep;
    }
    cos_.assign(ncos_, Coset(F_));
    for (std::size_t a = 0; a < ncos_; ++a) {
      auto& c = cos_[a];
      c.S.push_back(one);
      c.rows.push_back(one);
      c.lu.accept(c.lu.probe({}, {}, u0));
      if (opts_.trace) {
        TraceStep<Field> st;
        st.coset = a;
        st.candidate = one;
        st.labels = {one};
        st.matrix = DenseMatrix<Field>(1, 1, u0);
        st.extended = true;
        rep.trace.push_back(std::move(st));
      }
    }
    init_candidates();

    while (true) {
      if (opts_.max_staircase && staircase_size() >= *opts_.max_staircase) break;
      auto next = pop_candidate();
      if (!next) break;
      const Monomial& m = *next;
      std::size_t a = lattice_ ? lattice_->coset_index(m.x) : 0;
      auto& c = cos_[a];
      std::optional<SkewPolynomial<Field>> rel;
      if (opts_.extra_rows == 0)
        rel = square_step(c, m);
      else
        rel = buffered_step(c, m);
      if (opts_.trace) {
        TraceStep<Field> st;
        st.coset = a;
        st.candidate = m;
        st.labels = c.S;
        if (rel) st.labels.push_back(m);
        auto H = build_hankel<Field>(u_, st.labels, st.labels, Exec::Serial);
        st.matrix = H.m;
        st.extended = !rel;
        st.relation = rel;
        rep.trace.push_back(std::move(st));
      }
      if (rel) {
        rep.relations.push_back({*rel, m, RelationStatus::Unverified, a});
        lms_.push_back(m);
      } else {
        push_successors(m);
      }
    }
    for (const auto& c : cos_) rep.staircase.insert(rep.staircase.end(), c.S.begin(), c.S.end());
    sort_monomials(rep.staircase, order_);
    rep.staircase.erase(std::unique(rep.staircase.begin(), rep.staircase.end()), rep.staircase.end());
    for (const auto& c : cos_) {
      rep.matrix_rows = std::max(rep.matrix_rows, c.rows.size() + (opts_.extra_rows ? opts_.extra_rows : 0));
      rep.matrix_cols = std::max(rep.matrix_cols, c.S.size());
    }
    rep.query_count = u_.distinct();
    return rep;
  }

 private:
  struct Coset {
    explicit Coset(const Field& F) : lu(F) {}
    std::vector<Monomial> S;
    std::vector<Monomial> rows;  // buffered mode: every shift used so far
    IncrementalLU<Field> lu;
  };

  Element entry(const Monomial& r, const Monomial& c) {
    return bracket_monomial<Field>(u_, Monomial(add_exponents(r.x, c.x), c.t));
  }

  std::optional<SkewPolynomial<Field>> square_step(Coset& c, const Monomial& m) {
    std::vector<Element> col, row;
    for (const auto& s : c.S) {
      col.push_back(entry(s, m));
      row.push_back(entry(m, s));
    }
    auto probe = c.lu.probe(col, row, entry(m, m));
    if (!F_.is_zero(probe.schur)) {
      c.lu.accept(probe);
      c.S.push_back(m);
      c.rows.push_back(m);
      return std::nullopt;
    }
    auto gamma = c.lu.solve_negated(probe);
    SkewPolynomial<Field> p(n_);
    p.add_term(F_, m, F_.one());
    for (std::size_t j = 0; j < c.S.size(); ++j) p.add_term(F_, c.S[j], gamma[j]);
    return p;
  }

  std::optional<SkewPolynomial<Field>> buffered_step(Coset& c, const Monomial& m) {
    std::vector<Monomial> rows = c.rows;
    if (!contains_monomial(rows, m)) rows.push_back(m);
    std::vector<Monomial> seen = rows;
    for (const auto& b : next_universe_monomials(order_, opts_, seen, opts_.extra_rows))
      if (!contains_monomial(rows, b)) rows.push_back(b);
    std::vector<Monomial> cols = c.S;
    cols.push_back(m);
    auto H = build_hankel<Field>(u_, rows, cols, Exec::Serial);
    c.rows = rows;
    if (matrix_rank(F_, H.m) == cols.size()) {
      c.S.push_back(m);
      return std::nullopt;
    }
    DenseMatrix<Field> A(rows.size(), c.S.size(), F_.zero());
    std::vector<Element> b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < c.S.size(); ++j) A.at(i, j) = H.m.at(i, j);
      b[i] = F_.neg(H.m.at(i, c.S.size()));
    }
    auto gamma = solve_vector(F_, A, b);
    if (!gamma) throw std::logic_error("buffered rank test: staircase columns lost independence");
    SkewPolynomial<Field> p(n_);
    p.add_term(F_, m, F_.one());
    for (std::size_t j = 0; j < c.S.size(); ++j) p.add_term(F_, c.S[j], (*gamma)[j]);
    return p;
  }

  bool pruned(const Monomial& m) const {
    for (const auto& g : lms_)
      if (div_(g, m)) return true;
    return false;
  }

  std::size_t staircase_size() const {
    std::size_t s = 0;
    for (const auto& c : cos_) s += c.S.size();
    return s;
  }

  void init_candidates() {
    if (opts_.cone) {
      EnumerationBound b;
      b.caps = opts_.caps;
      b.max_degree = opts_.max_degree;
      if (order_.kind() == OrderKind::DegRevLex && !b.caps && !b.max_degree)
        throw std::invalid_argument("adaptive cone mode needs a degree bound or caps");
      stream_ = enumerate_monomials(order_, universe_filter(opts_), b);
      stream_pos_ = 0;
      return;
    }
    for (std::size_t p = 0; p < n_; ++p) queue_.insert(Monomial::var(n_, p));
  }

  std::optional<Monomial> pop_candidate() {
    if (opts_.cone) {
      while (stream_pos_ < stream_.size()) {
        const Monomial& m = stream_[stream_pos_++];
        if (m.is_one() || pruned(m)) continue;
        return m;
      }
      return std::nullopt;
    }
    while (!queue_.empty()) {
      Monomial m = *queue_.begin();
      queue_.erase(queue_.begin());
      if (pruned(m)) continue;
      return m;
    }
    return std::nullopt;
  }

  void push_successors(const Monomial& m) {
    if (opts_.cone) return;
    for (std::size_t p = 0; p < n_; ++p) {
      Monomial q = m * Monomial::var(n_, p);
      if (opts_.max_degree && q.degree() > *opts_.max_degree) continue;
      if (opts_.caps && q.x[p] > (*opts_.caps)[p]) continue;
      if (!pruned(q)) queue_.insert(q);
    }
  }

  const Field& F_;
  TableView<Field> u_;
  const MonomialOrder& order_;
  const Lattice* lattice_;
  const GuessOptions& opts_;
  DividesFn div_;
  std::size_t n_ = 0, ncos_ = 1;
  std::vector<Coset> cos_;
  std::vector<Monomial> lms_;
  std::set<Monomial, OrderLess> queue_{OrderLess{&order_}};
  std::vector<Monomial> stream_;
  std::size_t stream_pos_ = 0;
};

}  // namespace detail

template <class Field>
GuessReport<Field> adaptive_sfglm(TableSource<Field>& src, const MonomialOrder& order, const GuessOptions& opts = {}) {
  return detail::AdaptiveEngine<Field>(src, order, nullptr, opts).run();
}

template <class Field>
GuessReport<Field> lattice_adaptive_sfglm(TableSource<Field>& src, const MonomialOrder& order, const Lattice& lattice,
                                          const GuessOptions& opts = {}) {
  if (opts.cone) throw std::invalid_argument("lattice mode does not combine with a cone");
  return detail::AdaptiveEngine<Field>(src, order, &lattice, opts).run();
}

// ---------------- P-relations ----------------

// Kernel of H_{X,T}; T must be increasing so every kernel vector leads with its free column.
template <class Field>
GuessReport<Field> guess_prels(TableSource<Field>& src, const MonomialOrder& order, const std::vector<Monomial>& X,
                               const std::vector<Monomial>& T, const GuessOptions& opts = {}) {
  const Field& F = src.field();
  TableView<Field> u(src);
  for (std::size_t j = 1; j < T.size(); ++j)
    if (!order.less(T[j - 1], T[j])) throw std::invalid_argument("guess_prels: columns must be strictly increasing");
  auto div = detail::divisibility(opts);
  auto H = build_hankel<Field>(u, X, T, opts.exec);
  auto K = right_kernel(F, H.m);

  GuessReport<Field> rep;
  rep.matrix_rows = X.size();
  rep.matrix_cols = T.size();
  for (auto p : K.pivots) rep.staircase.push_back(T[p]);
  for (std::size_t q = 0; q < K.vectors.size(); ++q) {
    const Monomial& lm = T[K.free_columns[q]];
    bool multiple = false;
    for (const auto& r : rep.relations)
      if (div(r.lm, lm)) {
        multiple = true;
        break;
      }
    if (multiple) continue;
    SkewPolynomial<Field> p(lm.nvars());
    for (std::size_t j = 0; j < T.size(); ++j) p.add_term(F, T[j], K.vectors[q][j]);
    rep.relations.push_back({std::move(p), lm});
  }
  rep.query_count = u.distinct();
  return rep;
}

// fake if some shift gives a nonzero bracket; shifts should avoid those used for construction
template <class Field>
void classify_relations(TableSource<Field>& src, GuessReport<Field>& rep, const std::vector<Monomial>& shifts) {
  const Field& F = src.field();
  rep.fake = rep.correct = 0;
  for (auto& r : rep.relations) {
    r.status = RelationStatus::CorrectSoFar;
    for (const auto& s : shifts)
      if (!F.is_zero(shifted_bracket<Field>(src, r.poly, s.x))) {
        r.status = RelationStatus::Fake;
        break;
      }
    (r.status == RelationStatus::Fake ? rep.fake : rep.correct)++;
  }
}

}  // namespace relguess
