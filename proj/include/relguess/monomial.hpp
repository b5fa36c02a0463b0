#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace relguess {

using Exponents = std::vector<std::uint32_t>;

Exponents add_exponents(const Exponents& a, const Exponents& b);  // throws std::overflow_error
bool exponents_divide(const Exponents& a, const Exponents& b);      // a <= b componentwise
std::uint64_t exponent_sum(const Exponents& a);

// t^k x^i. Both parts always have the same length n; a pure x-monomial has k = 0.
struct Monomial {
  Exponents x;
  Exponents t;

  Monomial() = default;
  explicit Monomial(std::size_t n) : x(n, 0), t(n, 0) {}
  Monomial(Exponents xe, Exponents te) : x(std::move(xe)), t(std::move(te)) {}
  static Monomial pure(Exponents xe) {
    Exponents te(xe.size(), 0);
    return Monomial(std::move(xe), std::move(te));
  }
  static Monomial one(std::size_t n) { return Monomial(n); }
  static Monomial var(std::size_t n, std::size_t p) {
    Monomial m(n);
    m.x[p] = 1;
    return m;
  }

  std::size_t nvars() const { return x.size(); }
  bool is_one() const;
  bool has_t() const;
  std::uint64_t degree() const { return exponent_sum(x) + exponent_sum(t); }

  bool operator==(const Monomial& o) const { return x == o.x && t == o.t; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
  // canonical (not a monomial order); only for ordered containers
  bool operator<(const Monomial& o) const { return x != o.x ? x < o.x : t < o.t; }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
  std::size_t operator()(const Exponents& e) const;
};

// commutative product of exponent vectors; this is the leading-monomial product, not the skew one
Monomial operator*(const Monomial& a, const Monomial& b);
bool divides(const Monomial& a, const Monomial& b);
Monomial quotient(const Monomial& b, const Monomial& a);  // b / a, requires divides(a, b)

enum class OrderKind { Lex, DegRevLex };

// Variables ranked largest first by `perm`; every t_p ranks below every x_q, and t_p follows
// the rank of x_p inside the t block.
class MonomialOrder {
 public:
  MonomialOrder() = default;
  MonomialOrder(OrderKind kind, std::vector<std::size_t> perm);
  static MonomialOrder drl(std::size_t n);
  static MonomialOrder lex(std::size_t n);

  OrderKind kind() const { return kind_; }
  std::size_t nvars() const { return perm_.size(); }
  const std::vector<std::size_t>& perm() const { return perm_; }

  int compare(const Monomial& a, const Monomial& b) const;
  int compare_x(const Exponents& a, const Exponents& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  // "DRL(y<x)" style
  std::string describe(const std::vector<std::string>& xnames) const;

 private:
  OrderKind kind_ = OrderKind::DegRevLex;
  std::vector<std::size_t> perm_;
};

struct OrderLess {
  const MonomialOrder* order;
  bool operator()(const Monomial& a, const Monomial& b) const { return order->less(a, b); }
};

using ExponentFilter = std::function<bool(const Exponents&)>;

struct EnumerationBound {
  std::optional<std::uint64_t> max_degree;  // total degree over x and t
  std::optional<Exponents> caps;            // per x-variable, required for LEX
  std::optional<std::size_t> max_count;
};

// Increasing pure x-monomials accepted by `filter`.
std::vector<Monomial> enumerate_monomials(const MonomialOrder& order, const ExponentFilter& filter,
                                          const EnumerationBound& bound);

// Increasing t^k x^i with |k| <= max_tdeg and x-part accepted by `filter`.
std::vector<Monomial> enumerate_mixed(const MonomialOrder& order, const ExponentFilter& filter,
                                      std::uint32_t max_tdeg, const EnumerationBound& bound);

using DividesFn = std::function<bool(const Monomial&, const Monomial&)>;

// S plus every m in T that divides some element of S, sorted increasingly
std::vector<Monomial> staircase_close(const std::vector<Monomial>& S, const std::vector<Monomial>& T,
                                      const MonomialOrder& order, const DividesFn& div = divides);
bool is_staircase(const std::vector<Monomial>& S, const std::vector<Monomial>& universe,
                  const DividesFn& div = divides);

void sort_monomials(std::vector<Monomial>& v, const MonomialOrder& order);

std::vector<std::string> default_names(const std::string& stem, std::size_t n);

struct VariableNames {
  std::vector<std::string> x;
  std::vector<std::string> t;
  static VariableNames defaults(std::size_t n);
  static VariableNames from_x(std::vector<std::string> xs);
};

std::string monomial_to_string(const Monomial& m, const VariableNames& names);

}  // namespace relguess
