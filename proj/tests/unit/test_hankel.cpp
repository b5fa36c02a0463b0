#include <random>

#include "../common/oracles.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "relguess/hankel.hpp"

using namespace relguess;
using testutil::mat;
using testutil::monos;

namespace {

FunctionTable<PrimeField> random_table(const PrimeField& F, std::size_t dim, std::uint64_t seed) {
  return FunctionTable<PrimeField>(F, dim, [F, seed](const Exponents& i) {
    std::uint64_t h = seed;
    for (auto v : i) h = h * 1000003ULL + v + 1;
    std::mt19937_64 r(h);
    return F.random(r);
  });
}

}  // namespace

TEST_CASE("the 6x9 multi-Hankel matrix") {
  PrimeField F(testutil::kBigPrime);
  auto u = random_table(F, 2, 7);
  auto names = VariableNames{{"x", "y"}, {"t", "u"}};
  auto X = monos({{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}});
  std::vector<Monomial> T;
  for (auto s : {"1", "u", "t", "y", "x", "u*y", "t*y", "u*x", "t*x"})
    T.push_back(parse_polynomial(F, s, names).terms.begin()->first);
  auto H = build_hankel<PrimeField>(u, X, T);
  REQUIRE(H.m.rows == 6);
  REQUIRE(H.m.cols == 9);
  // row xy, column uy: [u x y^2] = 2 u_{1,2}
  CHECK(H.m.at(4, 5) == F.mul(2, u.query({1, 2})));
  // row 1, column t: 0^1 u_{0,0}
  CHECK(H.m.at(0, 2) == 0);
  // entrywise: i^k u_i
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      auto e = add_exponents(X[i].x, T[j].x);
      auto w = F.one();
      for (std::size_t p = 0; p < 2; ++p) w = F.mul(w, F.pow(e[p], T[j].t[p]));
      CHECK(H.m.at(i, j) == F.mul(w, u.query(e)));
    }
}

TEST_CASE("1x1 and Hankel structure") {
  PrimeField F(101);
  auto u = random_table(F, 2, 3);
  auto one = monos({{0, 0}});
  auto H1 = build_hankel<PrimeField>(u, one, one);
  CHECK(H1.m.at(0, 0) == u.query({0, 0}));

  auto X = enumerate_monomials(MonomialOrder::drl(2), {}, EnumerationBound{3, std::nullopt, std::nullopt});
  auto H = build_hankel<PrimeField>(u, X, X);
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < X.size(); ++b)
      for (std::size_t c = 0; c < X.size(); ++c)
        for (std::size_t d = 0; d < X.size(); ++d)
          if (add_exponents(X[a].x, X[b].x) == add_exponents(X[c].x, X[d].x)) CHECK(H.m.at(a, b) == H.m.at(c, d));
}

TEST_CASE("serial and parallel fills agree") {
  PrimeField F(testutil::kBigPrime);
  auto u = random_table(F, 2, 11);
  auto drl = MonomialOrder::drl(2);
  auto X = enumerate_monomials(drl, {}, EnumerationBound{6, std::nullopt, std::nullopt});
  auto T = enumerate_mixed(drl, {}, 2, EnumerationBound{5, std::nullopt, std::nullopt});
  auto a = build_hankel<PrimeField>(u, X, T, Exec::Serial);
  auto b = build_hankel<PrimeField>(u, X, T, Exec::Parallel);
  CHECK(a.m == b.m);
}

TEST_CASE("column rank profiles") {
  RationalField Q;
  MultiHankelMatrix<RationalField> H{{}, monos({{0, 0}, {0, 1}, {0, 2}}), mat(Q, {{1, 2, 2}, {2, 0, 0}, {2, 0, 0}})};
  CHECK(column_rank_profile_labels(Q, H) == monos({{0, 0}, {0, 1}}));

  PrimeField F(13);
  CHECK(column_rank_profile(F, DenseMatrix<PrimeField>(4, 5, 0)).empty());

  std::mt19937_64 rng(6);
  for (int c = 0; c < 300; ++c) {
    DenseMatrix<PrimeField> A(6, 6, 0);
    // sparse entries make dependent columns common
    for (auto& v : A.a) v = rng() % 3 ? 0 : F.random(rng);
    CHECK(column_rank_profile(F, A) == oracle::prefix_rank_profile(F, A));
    CHECK(matrix_rank(F, A) == oracle::rank_transposed(F, A));
  }
}

TEST_CASE("solve_relation") {
  PrimeField F(7);
  FunctionTable<PrimeField> u(F, 2, [&](const Exponents& i) { return testutil::mod7_value(F, i); });
  auto names = VariableNames::from_x({"x", "y"});
  MonomialOrder lex(OrderKind::Lex, {0, 1});
  auto S = monos({{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  auto r1 = solve_relation<PrimeField>(u, S, S, Monomial::pure({0, 4}));
  auto r2 = solve_relation<PrimeField>(u, S, S, Monomial::pure({1, 0}));
  REQUIRE(r1);
  REQUIRE(r2);
  CHECK(polynomial_to_string(F, *r1, lex, names) == "y^4 + 6*y^2 + 2");
  CHECK(polynomial_to_string(F, *r2, lex, names) == "x + 2*y^3 + 5*y");

  // empty S: the relation is g itself, and it is consistent iff every shift vanishes
  FunctionTable<PrimeField> z(F, 2, [&](const Exponents& i) { return i[0] == 0 ? F.one() : F.zero(); });
  auto rows = monos({{0, 0}, {0, 1}, {1, 0}});
  auto ok = solve_relation<PrimeField>(z, rows, {}, Monomial::pure({1, 0}));
  REQUIRE(ok);
  CHECK(polynomial_to_string(F, *ok, lex, names) == "x");
  CHECK_FALSE(solve_relation<PrimeField>(z, rows, {}, Monomial::pure({0, 1})));

  RationalField Q;
  FunctionTable<RationalField> w(Q, 2, [&](const Exponents& i) {
    return mpq_class(mpq_class(mpz_class(1) << i[0]) * ((i[1] + 1) % 3));
  });
  auto one = monos({{0, 0}});
  auto c0 = monos({{0, 0}, {0, 3}, {1, 0}});
  auto y3 = solve_relation<RationalField>(w, c0, one, Monomial::pure({0, 3}));
  auto x = solve_relation<RationalField>(w, c0, one, Monomial::pure({1, 0}));
  REQUIRE(y3);
  REQUIRE(x);
  CHECK(polynomial_to_string(Q, *y3, lex, names) == "y^3 - 1");
  CHECK(polynomial_to_string(Q, *x, lex, names) == "x - 2");
}

TEST_CASE("linear solvers agree with substitution") {
  PrimeField F(101);
  std::mt19937_64 rng(12);
  for (int c = 0; c < 100; ++c) {
    DenseMatrix<PrimeField> A(5, 4, 0);
    for (auto& v : A.a) v = rng() % 2 ? 0 : F.random(rng);
    std::vector<std::uint64_t> b(5);
    for (auto& v : b) v = F.random(rng);
    auto x = solve_vector(F, A, b);
    if (!x) {
      // inconsistent: appending b raises the rank
      DenseMatrix<PrimeField> Ab(5, 5, 0);
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 4; ++j) Ab.at(i, j) = A.at(i, j);
        Ab.at(i, 4) = b[i];
      }
      CHECK(oracle::rank_transposed(F, Ab) > oracle::rank_transposed(F, A));
      continue;
    }
    for (std::size_t i = 0; i < 5; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < 4; ++j) acc = F.add(acc, F.mul(A.at(i, j), (*x)[j]));
      CHECK(acc == b[i]);
    }
    auto K = right_kernel(F, A);
    CHECK(K.vectors.size() + oracle::rank_transposed(F, A) == 4);
    for (const auto& v : K.vectors)
      for (std::size_t i = 0; i < 5; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < 4; ++j) acc = F.add(acc, F.mul(A.at(i, j), v[j]));
        CHECK(acc == 0);
      }
  }
}

TEST_CASE("bordered LU") {
  PrimeField F(31);
  std::mt19937_64 rng(13);
  for (int c = 0; c < 200; ++c) {
    const std::size_t N = 6;
    DenseMatrix<PrimeField> A(N, N, 0);
    for (auto& v : A.a) v = rng() % 3 ? F.random(rng) : 0;
    IncrementalLU<PrimeField> lu(F);
    for (std::size_t k = 0; k < N; ++k) {
      std::vector<std::uint64_t> col(k), row(k);
      for (std::size_t i = 0; i < k; ++i) col[i] = A.at(i, k), row[i] = A.at(k, i);
      auto p = lu.probe(col, row, A.at(k, k));
      DenseMatrix<PrimeField> lead(k + 1, k + 1, 0);
      for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j) lead.at(i, j) = A.at(i, j);
      bool nonsingular = oracle::rank_transposed(F, lead) == k + 1;
      CHECK(!F.is_zero(p.schur) == nonsingular);
      if (k > 0) {
        // leading k x k block solves against column k
        auto g = lu.solve_negated(p);
        DenseMatrix<PrimeField> B(k, k, 0);
        std::vector<std::uint64_t> rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) B.at(i, j) = A.at(i, j);
          rhs[i] = F.neg(A.at(i, k));
        }
        auto ref = solve_vector(F, B, rhs);
        REQUIRE(ref);
        CHECK(g == *ref);
      }
      if (!nonsingular) break;
      lu.accept(p);
    }
  }
}
