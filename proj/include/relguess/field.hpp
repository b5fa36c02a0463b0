#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace relguess {

bool is_prime_u64(std::uint64_t n);

// Z/pZ with p < 2^63. Elements are canonical residues in [0, p).
class PrimeField {
 public:
  using Element = std::uint64_t;

  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }
  bool is_rational() const { return false; }

  Element zero() const { return 0; }
  Element one() const { return 1; }

  Element from_int(std::int64_t v) const {
    if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
    std::uint64_t r = static_cast<std::uint64_t>(-(v + 1)) % p_;
    return r == p_ - 1 ? 0 : p_ - 1 - r;
  }
  Element from_integer(const mpz_class& v) const;
  Element from_rational(const mpq_class& v) const;

  Element add(Element a, Element b) const {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const { return a >= b ? a - b : a + (p_ - b); }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  // a - f*b in one reduction when p < 2^32
  Element sub_mul(Element a, Element f, Element b) const {
    if (small_) return (a + (p_ - f) * b) % p_;
    return sub(a, mul(f, b));
  }
  Element mul(Element a, Element b) const {
    if (small_) return (a * b) % p_;
    return static_cast<Element>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const {
    Element r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  bool is_zero(Element a) const { return a == 0; }
  bool equal(Element a, Element b) const { return a == b; }
  bool is_one(Element a) const { return a == 1; }

  Element random(std::mt19937_64& rng) const {
    return std::uniform_int_distribution<std::uint64_t>(0, p_ - 1)(rng);
  }
  Element random_nonzero(std::mt19937_64& rng) const {
    return std::uniform_int_distribution<std::uint64_t>(1, p_ - 1)(rng);
  }

  std::string to_string(Element a) const { return std::to_string(a); }
  // sign-free rendering used by the polynomial printer
  bool is_negative(Element) const { return false; }

 private:
  std::uint64_t p_;
  bool small_;
};

// Q, exact, backed by GMP.
class RationalField {
 public:
  using Element = mpq_class;

  std::string name() const { return "Q"; }
  bool is_rational() const { return true; }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(std::int64_t v) const { return mpq_class(mpz_class(static_cast<long>(v))); }
  Element from_integer(const mpz_class& v) const { return mpq_class(v); }
  Element from_rational(const mpq_class& v) const { return v; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element sub_mul(const Element& a, const Element& f, const Element& b) const { return a - f * b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    if (sgn(a) == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  Element div(const Element& a, const Element& b) const { return a * inv(b); }
  Element pow(Element a, std::uint64_t e) const {
    Element r = 1;
    while (e) {
      if (e & 1) r *= a;
      a *= a;
      e >>= 1;
    }
    return r;
  }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  bool is_one(const Element& a) const { return a == 1; }

  // small random integers; enough for generic-position arguments in tests
  Element random(std::mt19937_64& rng) const {
    return from_int(std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng));
  }
  Element random_nonzero(std::mt19937_64& rng) const {
    Element r;
    do r = random(rng);
    while (is_zero(r));
    return r;
  }

  std::string to_string(const Element& a) const { return a.get_str(); }
  bool is_negative(const Element& a) const { return sgn(a) < 0; }
};

}  // namespace relguess
