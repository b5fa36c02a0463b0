#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "relguess/structures.hpp"

using namespace relguess;
using testutil::monos;

TEST_CASE("orders on the small cases") {
  MonomialOrder drl(OrderKind::DegRevLex, {0, 1}), lex(OrderKind::Lex, {0, 1});
  auto xy = Monomial::pure({1, 1}), y3 = Monomial::pure({0, 3});
  CHECK(drl.compare(xy, y3) < 0);
  CHECK(lex.compare(Monomial::pure({1, 0}), Monomial::pure({0, 4})) > 0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    auto m = Monomial::pure({static_cast<std::uint32_t>(rng() % 4), static_cast<std::uint32_t>(rng() % 4)});
    if (m.is_one()) continue;
    CHECK(drl.less(Monomial::one(2), m));
    CHECK(lex.less(Monomial::one(2), m));
  }
  // every t below every x
  CHECK(drl.less(Monomial({0, 0}, {1, 0}), Monomial::pure({0, 1})));
  CHECK(drl.less(Monomial({0, 1}, {1, 0}), Monomial::pure({0, 2})));
  CHECK_THROWS(drl.compare(Monomial::pure({1}), xy));
}

TEST_CASE("DRL and LEX agree with a naive definition") {
  // reference: DRL compares total degree, then the last differing exponent (smaller wins)
  auto drl_ref = [](const Exponents& a, const Exponents& b) {
    auto da = exponent_sum(a), db = exponent_sum(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t p = a.size(); p-- > 0;)
      if (a[p] != b[p]) return a[p] > b[p] ? -1 : 1;
    return 0;
  };
  MonomialOrder drl = MonomialOrder::drl(3), lex = MonomialOrder::lex(3);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    Exponents a(3), b(3);
    for (auto& v : a) v = rng() % 4;
    for (auto& v : b) v = rng() % 4;
    CHECK(drl.compare(Monomial::pure(a), Monomial::pure(b)) == drl_ref(a, b));
    int l = a == b ? 0 : (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()) ? -1 : 1);
    CHECK(lex.compare(Monomial::pure(a), Monomial::pure(b)) == l);
  }
}

TEST_CASE("DRL enumeration starts 1, y, x, y^2, xy, x^2") {
  MonomialOrder drl(OrderKind::DegRevLex, {0, 1});
  auto v = enumerate_monomials(drl, {}, EnumerationBound{std::nullopt, std::nullopt, 6});
  CHECK(v == monos({{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}}));
}

TEST_CASE("cone filter under LEX") {
  Cone C({{1, 1}, {2, 0}});
  MonomialOrder lex(OrderKind::Lex, {0, 1});
  auto v = enumerate_monomials(lex, [&](const Exponents& e) { return C.contains(e); },
                               EnumerationBound{std::nullopt, Exponents{4, 4}, std::nullopt});
  REQUIRE(v.size() >= 4);
  CHECK(std::vector<Monomial>(v.begin(), v.begin() + 4) == monos({{0, 0}, {1, 1}, {2, 0}, {2, 2}}));
  CHECK(std::find(v.begin(), v.end(), Monomial::pure({4, 0})) != v.end());
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(lex.less(v[k - 1], v[k]));
}

TEST_CASE("enumeration edge cases") {
  MonomialOrder drl = MonomialOrder::drl(2), lex = MonomialOrder::lex(2);
  CHECK(enumerate_monomials(drl, [](const Exponents&) { return false; }, EnumerationBound{5, std::nullopt, std::nullopt}).empty());
  CHECK_THROWS(enumerate_monomials(lex, {}, EnumerationBound{std::nullopt, std::nullopt, 10}));
}

TEST_CASE("enumeration is increasing and downward closed") {
  MonomialOrder drl = MonomialOrder::drl(3);
  auto v = enumerate_monomials(drl, {}, EnumerationBound{4, std::nullopt, std::nullopt});
  CHECK(v.size() == 35);  // C(4+3, 3)
  std::set<Exponents> seen;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) CHECK(drl.less(v[k - 1], v[k]));
    for (std::size_t p = 0; p < 3; ++p)
      if (v[k].x[p] > 0) {
        auto d = v[k].x;
        --d[p];
        CHECK(seen.count(d) == 1);
      }
    seen.insert(v[k].x);
  }
}

TEST_CASE("mixed enumeration keeps t below x") {
  MonomialOrder drl = MonomialOrder::drl(2);
  auto v = enumerate_mixed(drl, {}, 1, EnumerationBound{2, std::nullopt, std::nullopt});
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(drl.less(v[k - 1], v[k]));
  CHECK(v[1] == Monomial({0, 0}, {0, 1}));
}

TEST_CASE("staircase_close") {
  MonomialOrder drl = MonomialOrder::drl(2);
  CHECK(staircase_close(monos({{0, 0}, {0, 2}}), monos({{0, 0}, {0, 1}, {0, 2}}), drl) ==
        monos({{0, 0}, {0, 1}, {0, 2}}));
  auto T = enumerate_monomials(drl, {}, EnumerationBound{3, std::nullopt, std::nullopt});
  CHECK(staircase_close(monos({{0, 0}}), T, drl) == monos({{0, 0}}));
  auto S = monos({{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(staircase_close(S, T, drl) == S);

  std::mt19937_64 rng(5);
  for (int c = 0; c < 200; ++c) {
    std::vector<Monomial> pick;
    for (const auto& m : T)
      if (rng() % 4 == 0) pick.push_back(m);
    auto closed = staircase_close(pick, T, drl);
    for (const auto& m : closed)
      for (const auto& d : T)
        if (divides(d, m)) CHECK(std::find(closed.begin(), closed.end(), d) != closed.end());
    CHECK(is_staircase(closed, T));
  }
}

TEST_CASE("multiplicativity on random triples") {
  std::mt19937_64 rng(9);
  for (auto kind : {OrderKind::Lex, OrderKind::DegRevLex}) {
    MonomialOrder o(kind, {2, 0, 1});
    for (int k = 0; k < 300; ++k) {
      auto r = [&] {
        Exponents x(3), t(3);
        for (auto& v : x) v = rng() % 4;
        for (auto& v : t) v = rng() % 2;
        return Monomial(x, t);
      };
      auto a = r(), b = r(), c = r();
      if (o.less(a, b)) CHECK(o.less(a * c, b * c));
    }
  }
}

TEST_CASE("exponent overflow is an error") {
  Exponents a{0xffffffffu}, b{1};
  CHECK_THROWS_AS(add_exponents(a, b), std::overflow_error);
}

TEST_SUITE("fields") {
  template <class Field>
  void axioms(const Field& F, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 500; ++k) {
      auto a = F.random(rng), b = F.random(rng), c = F.random(rng);
      CHECK(F.equal(F.add(a, b), F.add(b, a)));
      CHECK(F.equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c))));
      CHECK(F.equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c))));
      CHECK(F.is_zero(F.add(a, F.neg(a))));
      CHECK(F.equal(F.sub_mul(a, b, c), F.sub(a, F.mul(b, c))));
      if (!F.is_zero(a)) CHECK(F.is_one(F.mul(a, F.inv(a))));
    }
  }

  TEST_CASE("prime field axioms") {
    axioms(PrimeField(7), 1);
    axioms(PrimeField(testutil::kBigPrime), 2);
    axioms(PrimeField(9223372036854775783ULL), 3);
    CHECK_THROWS(PrimeField(8));
    PrimeField F(7);
    CHECK(F.from_int(-1) == 6);
    CHECK(F.from_rational(mpq_class(1, 2)) == 4);
    CHECK_THROWS(F.inv(0));
  }

  TEST_CASE("rational field axioms") {
    axioms(RationalField(), 4);
    RationalField Q;
    CHECK(Q.inv(Q.from_int(-4)) == mpq_class(-1, 4));
  }
}
