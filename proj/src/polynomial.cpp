#include "relguess/polynomial.hpp"

#include <cctype>
#include <stdexcept>

#include "relguess/field.hpp"
#include "relguess/skew.hpp"

namespace relguess {

namespace {

using QPoly = SkewPolynomial<RationalField>;

struct Parser {
  const std::string& s;
  const VariableNames& names;
  const RationalField& Q;
  std::size_t pos = 0;
  int depth = 0;

  std::size_t n() const { return names.x.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at column " + std::to_string(pos + 1) + ": " + what +
                                " in '" + s + "'");
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }

  mpz_class integer() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return mpz_class(s.substr(start, pos - start));
  }

  // longest variable name that is a prefix of the remaining input
  bool variable(Monomial& m) {
    skip();
    std::size_t best = 0;
    int which = -1;
    bool is_t = false;
    auto consider = [&](const std::vector<std::string>& v, bool t) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& name = v[i];
        if (name.size() > best && s.compare(pos, name.size(), name) == 0) {
          best = name.size();
          which = static_cast<int>(i);
          is_t = t;
        }
      }
    };
    consider(names.x, false);
    consider(names.t, true);
    if (which < 0) return false;
    pos += best;
    (is_t ? m.t : m.x)[which] = 1;
    return true;
  }

  QPoly atom() {
    char ch = peek();
    if (ch == '(') {
      ++pos;
      if (++depth > 64) fail("nesting too deep");
      QPoly p = expr();
      --depth;
      if (peek() != ')') fail("expected ')'");
      ++pos;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mpz_class num = integer(), den = 1;
      if (peek() == '/') {
        ++pos;
        den = integer();
        if (den == 0) fail("zero denominator");
      }
      mpq_class q(num, den);
      q.canonicalize();
      return QPoly::monomial(Q, Monomial::one(n()), q);
    }
    Monomial m(n());
    if (!variable(m)) fail("expected coefficient or variable");
    return QPoly::monomial(Q, m, mpq_class(1));
  }

  QPoly factor() {
    QPoly a = atom();
    if (peek() != '^') return a;
    ++pos;
    mpz_class e = integer();
    if (!e.fits_ulong_p() || e.get_ui() > 0xffffffffULL) fail("exponent too large");
    std::uint64_t k = e.get_ui();
    // pure monomials are powered directly, everything else by repeated products
    if (a.size() == 1 && !a.terms.begin()->first.has_t()) {
      auto [m, c] = *a.terms.begin();
      Monomial r(n());
      for (std::size_t p = 0; p < n(); ++p) {
        std::uint64_t v = std::uint64_t(m.x[p]) * k;
        if (v > 0xffffffffULL) throw std::overflow_error("exponent overflow");
        r.x[p] = static_cast<std::uint32_t>(v);
      }
      mpq_class cc;
      mpz_pow_ui(mpq_numref(cc.get_mpq_t()), mpq_numref(c.get_mpq_t()), k);
      mpz_pow_ui(mpq_denref(cc.get_mpq_t()), mpq_denref(c.get_mpq_t()), k);
      cc.canonicalize();
      return QPoly::monomial(Q, r, cc);
    }
    if (k > 64) fail("power of a non-monomial is limited to 64");
    QPoly r = QPoly::monomial(Q, Monomial::one(n()), mpq_class(1));
    for (std::uint64_t i = 0; i < k; ++i) r = skew_mul(Q, r, a);
    return r;
  }

  bool starts_factor() {
    char ch = peek();
    if (ch == '(' || std::isdigit(static_cast<unsigned char>(ch))) return true;
    Monomial m(n());
    std::size_t save = pos;
    bool v = variable(m);
    pos = save;
    return v;
  }

  QPoly term() {
    QPoly p = factor();
    while (true) {
      if (peek() == '*') {
        ++pos;
        p = skew_mul(Q, p, factor());
      } else if (starts_factor()) {
        p = skew_mul(Q, p, factor());
      } else {
        return p;
      }
    }
  }

  QPoly expr() {
    QPoly p(n());
    bool first = true;
    while (true) {
      char ch = peek();
      int sign = 1;
      if (ch == '+' || ch == '-') {
        sign = ch == '-' ? -1 : 1;
        ++pos;
      } else if (!first) {
        return p;
      }
      first = false;
      QPoly t = term();
      p = sign > 0 ? poly_add(Q, p, t) : poly_sub(Q, p, t);
    }
  }
};

}  // namespace

RationalTerms parse_polynomial_terms(const std::string& text, const VariableNames& names) {
  if (names.t.size() != names.x.size()) throw std::invalid_argument("variable name lists differ in length");
  RationalField Q;
  Parser p{text, names, Q};
  if (p.peek() == '\0') p.fail("empty polynomial");
  QPoly r = p.expr();
  if (p.peek() != '\0') p.fail(p.peek() == ')' ? "unbalanced ')'" : "expected + or -");
  RationalTerms out;
  for (const auto& [m, c] : r.terms) out.emplace_back(m, c);
  return out;
}

}  // namespace relguess
