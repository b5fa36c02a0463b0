#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "relguess/monomial.hpp"

namespace relguess {

// Element of K[t]<x> in normal form sum c * t^k x^i. Also used for plain x-polynomials.
template <class Field>
struct SkewPolynomial {
  using Element = typename Field::Element;

  std::size_t nvars = 0;
  std::map<Monomial, Element> terms;  // nonzero coefficients only

  SkewPolynomial() = default;
  explicit SkewPolynomial(std::size_t n) : nvars(n) {}

  static SkewPolynomial monomial(const Field& F, const Monomial& m, const Element& c) {
    SkewPolynomial p(m.nvars());
    p.add_term(F, m, c);
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }

  void add_term(const Field& F, const Monomial& m, const Element& c) {
    if (F.is_zero(c)) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
      return;
    }
    it->second = F.add(it->second, c);
    if (F.is_zero(it->second)) terms.erase(it);
  }

  Element coefficient(const Field& F, const Monomial& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? F.zero() : it->second;
  }

  // largest term under `order`; undefined on zero
  const std::pair<const Monomial, Element>& leading(const MonomialOrder& order) const {
    auto best = terms.begin();
    for (auto it = std::next(terms.begin()); it != terms.end(); ++it)
      if (order.less(best->first, it->first)) best = it;
    return *best;
  }
  const Monomial& leading_monomial(const MonomialOrder& order) const { return leading(order).first; }
  Element leading_coefficient(const MonomialOrder& order) const { return leading(order).second; }

  std::vector<std::pair<Monomial, Element>> sorted_terms(const MonomialOrder& order) const {
    std::vector<std::pair<Monomial, Element>> v(terms.begin(), terms.end());
    std::sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return order.less(b.first, a.first); });
    return v;
  }

  bool has_t() const {
    for (const auto& [m, c] : terms)
      if (m.has_t()) return true;
    return false;
  }

  bool operator==(const SkewPolynomial& o) const { return terms == o.terms; }
};

template <class Field>
SkewPolynomial<Field> poly_add(const Field& F, SkewPolynomial<Field> a, const SkewPolynomial<Field>& b) {
  for (const auto& [m, c] : b.terms) a.add_term(F, m, c);
  return a;
}

template <class Field>
SkewPolynomial<Field> poly_scale(const Field& F, const SkewPolynomial<Field>& a,
                                 const typename Field::Element& s) {
  SkewPolynomial<Field> r(a.nvars);
  if (F.is_zero(s)) return r;
  for (const auto& [m, c] : a.terms) r.terms.emplace(m, F.mul(c, s));
  return r;
}

template <class Field>
SkewPolynomial<Field> poly_sub(const Field& F, SkewPolynomial<Field> a, const SkewPolynomial<Field>& b) {
  for (const auto& [m, c] : b.terms) a.add_term(F, m, F.neg(c));
  return a;
}

template <class Field>
SkewPolynomial<Field> make_monic(const Field& F, const SkewPolynomial<Field>& a, const MonomialOrder& order) {
  if (a.is_zero()) return a;
  return poly_scale(F, a, F.inv(a.leading_coefficient(order)));
}

// ---- text format: sums of products of integers, num/den, variables and parenthesized
// subexpressions, with '^' powers. Products are skew and taken in the written order. ----

using RationalTerms = std::vector<std::pair<Monomial, mpq_class>>;

RationalTerms parse_polynomial_terms(const std::string& text, const VariableNames& names);

template <class Field>
SkewPolynomial<Field> parse_polynomial(const Field& F, const std::string& text, const VariableNames& names) {
  SkewPolynomial<Field> p(names.x.size());
  for (const auto& [m, c] : parse_polynomial_terms(text, names)) p.add_term(F, m, F.from_rational(c));
  return p;
}

template <class Field>
std::string polynomial_to_string(const Field& F, const SkewPolynomial<Field>& p, const MonomialOrder& order,
                                 const VariableNames& names) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.sorted_terms(order)) {
    bool negative = F.is_negative(c);
    auto mag = negative ? F.neg(c) : c;
    if (first)
      s += negative ? "-" : "";
    else
      s += negative ? " - " : " + ";
    first = false;
    std::string ms = monomial_to_string(m, names);
    if (m.is_one())
      s += F.to_string(mag);
    else if (F.is_one(mag))
      s += ms;
    else
      s += F.to_string(mag) + "*" + ms;
  }
  return s;
}

}  // namespace relguess
