#include "relguess/monomial.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace relguess {

Exponents add_exponents(const Exponents& a, const Exponents& b) {
  if (a.size() != b.size()) throw std::invalid_argument("exponent length mismatch");
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t s = static_cast<std::uint64_t>(a[i]) + b[i];
    if (s > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("exponent overflow");
    r[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

bool exponents_divide(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::uint64_t exponent_sum(const Exponents& a) {
  return std::accumulate(a.begin(), a.end(), std::uint64_t{0});
}

bool Monomial::is_one() const {
  return std::all_of(x.begin(), x.end(), [](auto e) { return e == 0; }) && !has_t();
}

bool Monomial::has_t() const {
  return std::any_of(t.begin(), t.end(), [](auto e) { return e != 0; });
}

std::size_t MonomialHash::operator()(const Exponents& e) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : e) h = (h ^ v) * 0x100000001b3ULL + (h >> 29);
  return h;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  return (*this)(m.x) * 31 + (*this)(m.t);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  return Monomial(add_exponents(a.x, b.x), add_exponents(a.t, b.t));
}

bool divides(const Monomial& a, const Monomial& b) {
  return exponents_divide(a.x, b.x) && exponents_divide(a.t, b.t);
}

Monomial quotient(const Monomial& b, const Monomial& a) {
  if (!divides(a, b)) throw std::invalid_argument("quotient of non-multiple");
  Monomial q(b.nvars());
  for (std::size_t i = 0; i < b.nvars(); ++i) {
    q.x[i] = b.x[i] - a.x[i];
    q.t[i] = b.t[i] - a.t[i];
  }
  return q;
}

MonomialOrder::MonomialOrder(OrderKind kind, std::vector<std::size_t> perm)
    : kind_(kind), perm_(std::move(perm)) {
  std::vector<std::size_t> s = perm_;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != i) throw std::invalid_argument("variable ranking is not a permutation");
}

MonomialOrder MonomialOrder::drl(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return MonomialOrder(OrderKind::DegRevLex, p);
}

MonomialOrder MonomialOrder::lex(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return MonomialOrder(OrderKind::Lex, p);
}

namespace {

// exponent of the r-th ranked variable (0 = largest) in the 2n-variable sequence x..., t...
inline std::uint32_t ranked(const Monomial& m, const std::vector<std::size_t>& perm, std::size_t r) {
  std::size_t n = perm.size();
  return r < n ? m.x[perm[r]] : m.t[perm[r - n]];
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  std::size_t n = perm_.size();
  if (a.x.size() != n || b.x.size() != n) throw std::invalid_argument("monomial dimension does not match the order");
  if (kind_ == OrderKind::Lex) {
    for (std::size_t r = 0; r < 2 * n; ++r) {
      auto ea = ranked(a, perm_, r), eb = ranked(b, perm_, r);
      if (ea != eb) return ea < eb ? -1 : 1;
    }
    return 0;
  }
  auto da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t r = 2 * n; r-- > 0;) {
    auto ea = ranked(a, perm_, r), eb = ranked(b, perm_, r);
    if (ea != eb) return ea > eb ? -1 : 1;
  }
  return 0;
}

int MonomialOrder::compare_x(const Exponents& a, const Exponents& b) const {
  std::size_t n = perm_.size();
  if (kind_ == OrderKind::Lex) {
    for (std::size_t r = 0; r < n; ++r) {
      auto ea = a[perm_[r]], eb = b[perm_[r]];
      if (ea != eb) return ea < eb ? -1 : 1;
    }
    return 0;
  }
  auto da = exponent_sum(a), db = exponent_sum(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t r = n; r-- > 0;) {
    auto ea = a[perm_[r]], eb = b[perm_[r]];
    if (ea != eb) return ea > eb ? -1 : 1;
  }
  return 0;
}

std::string MonomialOrder::describe(const std::vector<std::string>& xnames) const {
  std::string s = kind_ == OrderKind::Lex ? "LEX(" : "DRL(";
  for (std::size_t r = perm_.size(); r-- > 0;) {
    s += perm_[r] < xnames.size() ? xnames[perm_[r]] : "x" + std::to_string(perm_[r] + 1);
    if (r > 0) s += "<";
  }
  return s + ")";
}

namespace {

void compositions(std::size_t vars, std::uint64_t total, const Exponents* caps, std::size_t offset,
                  Exponents& cur, std::size_t pos, const std::function<void(const Exponents&)>& emit) {
  if (pos + 1 == vars) {
    if (caps && total > (*caps)[offset + pos]) return;
    cur[pos] = static_cast<std::uint32_t>(total);
    emit(cur);
    return;
  }
  std::uint64_t hi = total;
  if (caps) hi = std::min<std::uint64_t>(hi, (*caps)[offset + pos]);
  for (std::uint64_t e = 0; e <= hi; ++e) {
    cur[pos] = static_cast<std::uint32_t>(e);
    compositions(vars, total - e, caps, offset, cur, pos + 1, emit);
  }
}

void for_each_of_degree(std::size_t vars, std::uint64_t d, const Exponents* caps,
                        const std::function<void(const Exponents&)>& emit) {
  if (vars == 0) {
    if (d == 0) emit(Exponents{});
    return;
  }
  Exponents cur(vars, 0);
  compositions(vars, d, caps, 0, cur, 0, emit);
}

constexpr std::uint64_t kDegreeSafety = 1u << 16;

}  // namespace

std::vector<Monomial> enumerate_monomials(const MonomialOrder& order, const ExponentFilter& filter,
                                          const EnumerationBound& bound) {
  return enumerate_mixed(order, filter, 0, bound);
}

std::vector<Monomial> enumerate_mixed(const MonomialOrder& order, const ExponentFilter& filter,
                                      std::uint32_t max_tdeg, const EnumerationBound& bound) {
  std::size_t n = order.nvars();
  std::vector<Monomial> out;
  auto accept = [&](const Exponents& xe) { return !filter || filter(xe); };
  const Exponents* caps = bound.caps ? &*bound.caps : nullptr;
  if (caps && caps->size() != n) throw std::invalid_argument("caps length mismatch");

  if (order.kind() == OrderKind::Lex) {
    if (!caps) throw std::invalid_argument("LEX enumeration needs per-variable caps");
    // box of x-parts times all t-parts of degree <= max_tdeg
    std::vector<Exponents> tparts;
    for (std::uint32_t k = 0; k <= max_tdeg; ++k)
      for_each_of_degree(n, k, nullptr, [&](const Exponents& te) { tparts.push_back(te); });
    Exponents cur(n, 0);
    while (true) {
      if (accept(cur)) {
        for (const auto& te : tparts) {
          Monomial m(cur, te);
          if (!bound.max_degree || m.degree() <= *bound.max_degree) out.push_back(std::move(m));
        }
      }
      std::size_t p = 0;
      while (p < n && cur[p] == (*caps)[p]) cur[p++] = 0;
      if (p == n) break;
      ++cur[p];
    }
    sort_monomials(out, order);
    if (bound.max_count && out.size() > *bound.max_count) out.resize(*bound.max_count);
    return out;
  }

  if (!bound.max_degree && !bound.max_count && !caps)
    throw std::invalid_argument("unbounded DRL enumeration");
  std::uint64_t dmax = bound.max_degree ? *bound.max_degree : kDegreeSafety;
  for (std::uint64_t d = 0; d <= dmax; ++d) {
    std::vector<Monomial> layer;
    for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(d, max_tdeg); ++k) {
      std::vector<Exponents> tparts;
      for_each_of_degree(n, k, nullptr, [&](const Exponents& te) { tparts.push_back(te); });
      for_each_of_degree(n, d - k, caps, [&](const Exponents& xe) {
        if (!accept(xe)) return;
        for (const auto& te : tparts) layer.emplace_back(xe, te);
      });
    }
    sort_monomials(layer, order);
    for (auto& m : layer) {
      if (bound.max_count && out.size() >= *bound.max_count) return out;
      out.push_back(std::move(m));
    }
    if (bound.max_count && out.size() >= *bound.max_count) return out;
    if (caps && !bound.max_degree && d > exponent_sum(*caps) + max_tdeg) break;
  }
  return out;
}

void sort_monomials(std::vector<Monomial>& v, const MonomialOrder& order) {
  std::sort(v.begin(), v.end(), OrderLess{&order});
}

std::vector<Monomial> staircase_close(const std::vector<Monomial>& S, const std::vector<Monomial>& T,
                                      const MonomialOrder& order, const DividesFn& div) {
  std::vector<Monomial> out = S;
  for (const auto& m : T) {
    if (std::find(S.begin(), S.end(), m) != S.end()) continue;
    for (const auto& s : S) {
      if (div(m, s)) {
        out.push_back(m);
        break;
      }
    }
  }
  sort_monomials(out, order);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_staircase(const std::vector<Monomial>& S, const std::vector<Monomial>& universe, const DividesFn& div) {
  for (const auto& s : S)
    for (const auto& m : universe)
      if (div(m, s) && std::find(S.begin(), S.end(), m) == S.end()) return false;
  return true;
}

std::vector<std::string> default_names(const std::string& stem, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(stem + std::to_string(i + 1));
  return v;
}

VariableNames VariableNames::defaults(std::size_t n) {
  return {default_names("x", n), default_names("t", n)};
}

VariableNames VariableNames::from_x(std::vector<std::string> xs) {
  VariableNames v;
  for (const auto& s : xs) v.t.push_back("t" + s);
  v.x = std::move(xs);
  return v;
}

std::string monomial_to_string(const Monomial& m, const VariableNames& names) {
  std::string s;
  auto put = [&](const std::string& name, std::uint32_t e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += name;
    if (e > 1) s += "^" + std::to_string(e);
  };
  for (std::size_t i = 0; i < m.t.size(); ++i) put(names.t[i], m.t[i]);
  for (std::size_t i = 0; i < m.x.size(); ++i) put(names.x[i], m.x[i]);
  return s.empty() ? "1" : s;
}

}  // namespace relguess
