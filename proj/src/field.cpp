#include "relguess/field.hpp"

namespace relguess {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Miller-Rabin with the first twelve primes as bases is exact below 2^64.
bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static const std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto q : small) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : small) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p), small_(p < (1ULL << 32)) {
  if (p >= (1ULL << 63)) throw std::invalid_argument("prime field modulus must be below 2^63");
  if (!is_prime_u64(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

PrimeField::Element PrimeField::from_integer(const mpz_class& v) const {
  static_assert(sizeof(unsigned long) == 8);
  return mpz_fdiv_ui(v.get_mpz_t(), p_);
}

PrimeField::Element PrimeField::from_rational(const mpq_class& v) const {
  Element den = from_integer(v.get_den());
  if (den == 0) throw std::domain_error("denominator vanishes modulo " + std::to_string(p_));
  return div(from_integer(v.get_num()), den);
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  // extended Euclid on signed 128-bit to stay clear of overflow
  __int128 t = 0, nt = 1, r = p_, nr = a;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p_;
  return static_cast<Element>(t);
}

}  // namespace relguess
