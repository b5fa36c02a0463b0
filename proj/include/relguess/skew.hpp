#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"
#include "relguess/structures.hpp"

namespace relguess {

// t^l x^j * t^k x^i = t^l (t - j)^k x^{j+i}, expanded per variable
template <class Field>
SkewPolynomial<Field> skew_mul_monomials(const Field& F, const Monomial& a, const Monomial& b,
                                         const typename Field::Element& coef) {
  using Element = typename Field::Element;
  std::size_t n = a.nvars();
  SkewPolynomial<Field> out(n);
  if (F.is_zero(coef)) return out;
  Exponents x = add_exponents(a.x, b.x);
  // per variable: list of (q, coefficient of t_p^q in (t_p - j_p)^{k_p})
  std::vector<std::vector<Element>> factors(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::uint32_t k = b.t[p];
    Element minus_j = F.neg(F.from_int(static_cast<std::int64_t>(a.x[p])));
    factors[p].resize(k + 1);
    for (std::uint32_t q = 0; q <= k; ++q) {
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), k, q);
      factors[p][q] = F.mul(F.from_integer(bin), F.pow(minus_j, k - q));
    }
  }
  std::vector<std::uint32_t> q(n, 0);
  while (true) {
    Element c = coef;
    Monomial m(x, a.t);
    for (std::size_t p = 0; p < n && !F.is_zero(c); ++p) {
      c = F.mul(c, factors[p][q[p]]);
      std::uint64_t e = static_cast<std::uint64_t>(m.t[p]) + q[p];
      if (e > 0xffffffffULL) throw std::overflow_error("exponent overflow");
      m.t[p] = static_cast<std::uint32_t>(e);
    }
    out.add_term(F, m, c);
    std::size_t p = 0;
    while (p < n && q[p] == b.t[p]) q[p++] = 0;
    if (p == n) break;
    ++q[p];
  }
  return out;
}

template <class Field>
SkewPolynomial<Field> skew_mul(const Field& F, const SkewPolynomial<Field>& a, const SkewPolynomial<Field>& b) {
  SkewPolynomial<Field> out(std::max(a.nvars, b.nvars));
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms)
      for (const auto& [m, c] : skew_mul_monomials(F, ma, mb, F.mul(ca, cb)).terms) out.add_term(F, m, c);
  return out;
}

template <class Field>
SkewPolynomial<Field> skew_mul_monomial_right(const Field& F, const SkewPolynomial<Field>& a, const Monomial& q) {
  SkewPolynomial<Field> out(a.nvars);
  for (const auto& [m, c] : a.terms)
    for (const auto& [mm, cc] : skew_mul_monomials(F, m, q, c).terms) out.add_term(F, mm, cc);
  return out;
}

// All G-degrees of the support agree; returns that degree.
template <class Field>
std::optional<GDegreeMap::Degree> is_g_homogeneous(const SkewPolynomial<Field>& f, const GDegreeMap& g) {
  std::optional<GDegreeMap::Degree> d;
  for (const auto& [m, c] : f.terms) {
    auto e = g.gdegree(m.x);
    if (!d)
      d = e;
    else if (*d != e)
      return std::nullopt;
  }
  if (!d) d = g.zero();
  return d;
}

// Minimal common multiples of a and b in N^n x C (t-parts: componentwise max). Without a cone the
// answer is the usual lcm.
std::vector<Monomial> monomial_lcms(const Monomial& a, const Monomial& b, const Cone* cone, std::uint64_t max_degree);

template <class Field>
struct SPolynomial {
  SkewPolynomial<Field> poly;
  Monomial lcm;
  Monomial mult_f, mult_g;
  typename Field::Element scale_f, scale_g;
};

// f * m_f / lc(f) - g * m_g / lc(g) for each minimal common multiple of the leading monomials.
template <class Field>
std::vector<SPolynomial<Field>> skew_spoly(const Field& F, const SkewPolynomial<Field>& f, const SkewPolynomial<Field>& g,
                                           const MonomialOrder& order, const Cone* cone = nullptr,
                                           std::uint64_t max_degree = 64) {
  const auto& lf = f.leading(order);
  const auto& lg = g.leading(order);
  auto lcms = monomial_lcms(lf.first, lg.first, cone, max_degree);
  if (lcms.empty()) throw std::domain_error("leading monomials have no common multiple in the cone");
  std::vector<SPolynomial<Field>> out;
  for (const auto& L : lcms) {
    SPolynomial<Field> s;
    s.lcm = L;
    s.mult_f = quotient(L, lf.first);
    s.mult_g = quotient(L, lg.first);
    s.scale_f = F.inv(lf.second);
    s.scale_g = F.neg(F.inv(lg.second));
    s.poly = poly_add(F, poly_scale(F, skew_mul_monomial_right(F, f, s.mult_f), s.scale_f),
                      poly_scale(F, skew_mul_monomial_right(F, g, s.mult_g), s.scale_g));
    out.push_back(std::move(s));
  }
  return out;
}

struct BuchbergerOptions {
  std::uint64_t max_degree = 6;      // S-pairs with a larger lcm are skipped and flag truncation
  std::size_t max_pairs = 20000;
  const Cone* cone = nullptr;
  const GDegreeMap* gmap = nullptr;
  bool trace = true;                 // keep right cofactors w.r.t. the input generators
};

template <class Field>
struct BuchbergerResult {
  std::vector<SkewPolynomial<Field>> basis;
  bool truncated = false;
  // basis[i] = sum_j generators[j] * cofactors[i][j]
  std::vector<std::vector<SkewPolynomial<Field>>> cofactors;
};

// Right ideal Groebner basis in K[t]<x>: reducers act by right multiplication.
template <class Field>
class SkewBuchberger {
 public:
  using Poly = SkewPolynomial<Field>;
  using Element = typename Field::Element;

  SkewBuchberger(const Field& F, const MonomialOrder& order, const BuchbergerOptions& opts)
      : F_(F), order_(order), opts_(opts) {}

  BuchbergerResult<Field> run(const std::vector<Poly>& gens) {
    ngens_ = gens.size();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      check_universe(gens[i]);
      if (opts_.gmap && !is_g_homogeneous(gens[i], *opts_.gmap))
        throw std::invalid_argument("generator is not G-homogeneous");
      if (gens[i].is_zero()) continue;
      std::vector<Poly> cof(ngens_, Poly(gens[i].nvars));
      cof[i] = Poly::monomial(F_, Monomial::one(gens[i].nvars), F_.one());
      insert(gens[i], std::move(cof));
    }
    std::size_t processed = 0;
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(),
                                 [&](const Pair& a, const Pair& b) { return order_.less(a.lcm, b.lcm); });
      Pair pr = *it;
      pairs_.erase(it);
      if (++processed > opts_.max_pairs) {
        truncated_ = true;
        break;
      }
      auto sp = build_spoly(pr);
      auto [r, cof] = reduce(sp.first, sp.second);
      if (!r.is_zero()) insert(r, std::move(cof));
    }
    return finish();
  }

  void load_basis(const std::vector<Poly>& basis) {
    for (const auto& b : basis) {
      if (b.is_zero()) continue;
      basis_.push_back(make_monic(F_, b, order_));
      lm_.push_back(b.leading_monomial(order_));
      cof_.emplace_back();
    }
  }

  std::pair<Poly, std::vector<Poly>> reduce(Poly p, std::vector<Poly> cof) const {
    Poly rem(p.nvars);
    while (!p.is_zero()) {
      auto lt = p.leading(order_);
      Monomial m = lt.first;
      Element c = lt.second;
      bool done = false;
      for (std::size_t k = 0; k < basis_.size(); ++k) {
        if (!divides_(lm_[k], m)) continue;
        Monomial q = quotient(m, lm_[k]);
        Element s = F_.neg(c);  // basis elements are monic
        p = poly_add(F_, p, poly_scale(F_, skew_mul_monomial_right(F_, basis_[k], q), s));
        if (opts_.trace) add_cofactor(cof, cof_[k], q, s);
        done = true;
        break;
      }
      if (!done) {
        rem.add_term(F_, m, c);
        p.terms.erase(m);
      }
    }
    return {rem, cof};
  }

 private:
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };

  bool divides_(const Monomial& a, const Monomial& b) const {
    return opts_.cone ? opts_.cone->divides(a, b) : divides(a, b);
  }

  void check_universe(const Poly& f) const {
    if (!opts_.cone) return;
    for (const auto& [m, c] : f.terms)
      if (!opts_.cone->contains(m.x)) throw std::invalid_argument("polynomial support leaves the cone universe");
  }

  void add_cofactor(std::vector<Poly>& cof, const std::vector<Poly>& other, const Monomial& q, const Element& s) const {
    for (std::size_t j = 0; j < ngens_; ++j)
      if (!other[j].is_zero()) cof[j] = poly_add(F_, cof[j], poly_scale(F_, skew_mul_monomial_right(F_, other[j], q), s));
  }

  void insert(const Poly& f, std::vector<Poly> cof) {
    check_universe(f);
    if (opts_.gmap && !is_g_homogeneous(f, *opts_.gmap)) throw std::logic_error("lost G-homogeneity");
    Element inv = F_.inv(f.leading_coefficient(order_));
    Poly g = poly_scale(F_, f, inv);
    if (opts_.trace)
      for (auto& c : cof) c = poly_scale(F_, c, inv);
    std::size_t k = basis_.size();
    basis_.push_back(g);
    lm_.push_back(g.leading_monomial(order_));
    cof_.push_back(std::move(cof));
    for (std::size_t i = 0; i < k; ++i) {
      if (!basis_[i].has_t() && !g.has_t() && coprime_x(lm_[i], lm_[k])) continue;
      std::vector<Monomial> lcms;
      try {
        lcms = monomial_lcms(lm_[i], lm_[k], opts_.cone, opts_.max_degree);
      } catch (const std::domain_error&) {
        truncated_ = true;
        continue;
      }
      if (lcms.empty()) truncated_ = true;
      for (auto& L : lcms) {
        if (L.degree() > opts_.max_degree) {
          truncated_ = true;
          continue;
        }
        pairs_.push_back({i, k, L});
      }
    }
  }

  static bool coprime_x(const Monomial& a, const Monomial& b) {
    for (std::size_t p = 0; p < a.nvars(); ++p)
      if (a.x[p] && b.x[p]) return false;
    return true;
  }

  std::pair<Poly, std::vector<Poly>> build_spoly(const Pair& pr) const {
    Monomial mf = quotient(pr.lcm, lm_[pr.i]);
    Monomial mg = quotient(pr.lcm, lm_[pr.j]);
    Poly s = poly_sub(F_, skew_mul_monomial_right(F_, basis_[pr.i], mf), skew_mul_monomial_right(F_, basis_[pr.j], mg));
    std::vector<Poly> cof(ngens_, Poly(s.nvars));
    if (opts_.trace) {
      add_cofactor(cof, cof_[pr.i], mf, F_.one());
      add_cofactor(cof, cof_[pr.j], mg, F_.neg(F_.one()));
    }
    return {s, cof};
  }

  BuchbergerResult<Field> finish() {
    // drop elements whose leading monomial is a multiple of another's, then tail-reduce
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      bool redundant = false;
      for (std::size_t j = 0; j < basis_.size() && !redundant; ++j) {
        if (j == k || !divides_(lm_[j], lm_[k])) continue;
        redundant = lm_[j] != lm_[k] || j < k;
      }
      if (!redundant) keep.push_back(k);
    }
    std::vector<Poly> nb;
    std::vector<Monomial> nl;
    std::vector<std::vector<Poly>> nc;
    for (auto k : keep) {
      nb.push_back(basis_[k]);
      nl.push_back(lm_[k]);
      nc.push_back(cof_[k]);
    }
    basis_ = nb;
    lm_ = nl;
    cof_ = nc;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      Poly head = Poly::monomial(F_, lm_[k], F_.one());
      Poly tail = poly_sub(F_, basis_[k], head);
      Monomial lm = lm_[k];
      auto cof = cof_[k];
      // tail is reduced against the other elements only
      basis_.erase(basis_.begin() + k);
      lm_.erase(lm_.begin() + k);
      cof_.erase(cof_.begin() + k);
      auto [r, c] = reduce(tail, std::move(cof));
      basis_.insert(basis_.begin() + k, poly_add(F_, head, r));
      lm_.insert(lm_.begin() + k, lm);
      cof_.insert(cof_.begin() + k, std::move(c));
    }
    BuchbergerResult<Field> res;
    res.basis = basis_;
    res.truncated = truncated_;
    if (opts_.trace) res.cofactors = cof_;
    std::vector<std::size_t> idx(basis_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return order_.less(lm_[a], lm_[b]); });
    BuchbergerResult<Field> sorted;
    sorted.truncated = truncated_;
    for (auto i : idx) {
      sorted.basis.push_back(res.basis[i]);
      if (opts_.trace) sorted.cofactors.push_back(res.cofactors[i]);
    }
    return sorted;
  }

  const Field& F_;
  const MonomialOrder& order_;
  BuchbergerOptions opts_;
  std::size_t ngens_ = 0;
  std::vector<Poly> basis_;
  std::vector<Monomial> lm_;
  std::vector<std::vector<Poly>> cof_;
  std::vector<Pair> pairs_;
  bool truncated_ = false;
};

template <class Field>
BuchbergerResult<Field> skew_buchberger(const Field& F, const std::vector<SkewPolynomial<Field>>& gens,
                                        const MonomialOrder& order, const BuchbergerOptions& opts = {}) {
  return SkewBuchberger<Field>(F, order, opts).run(gens);
}

// Normal form of f against a basis produced by skew_buchberger (same order and options).
template <class Field>
SkewPolynomial<Field> skew_reduce(const Field& F, const SkewPolynomial<Field>& f, const BuchbergerResult<Field>& gb,
                                  const MonomialOrder& order, const BuchbergerOptions& opts = {}) {
  BuchbergerOptions o = opts;
  o.trace = false;
  SkewBuchberger<Field> reducer(F, order, o);
  reducer.load_basis(gb.basis);
  return reducer.reduce(f, {}).first;
}

}  // namespace relguess
