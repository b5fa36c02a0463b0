#include <array>
#include <random>
#include <set>

#include "../common/oracles.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "relguess/fglm.hpp"

using namespace relguess;

namespace {

const char* kLexGB = "order lex vars x,y\nfield 7\ny^4 + 6*y^2 + 2\nx + 2*y^3 + 5*y\n";
const char* kDrlGB = "order drl vars x,y\nfield 7\nx*y + 3\nx^2 + y^2 + 6\ny^3 + 4*x + 6*y\n";

template <class Field>
std::vector<typename Field::Element> row_times(const Field& F, const std::vector<typename Field::Element>& r,
                                               const DenseMatrix<Field>& A) {
  std::vector<typename Field::Element> out(A.cols, F.zero());
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) out[j] = F.add(out[j], F.mul(r[i], A.at(i, j)));
  return out;
}

// univariate matrix of multiplication by x on K[x]/(prod (x - a_k))
MultMatrix<PrimeField> companion(const PrimeField& F, const std::vector<std::uint64_t>& roots,
                                 std::vector<std::uint64_t>& coeffs) {
  coeffs = {1};
  for (auto a : roots) {
    std::vector<std::uint64_t> next(coeffs.size() + 1, 0);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
      next[e + 1] = F.add(next[e + 1], coeffs[e]);
      next[e] = F.sub(next[e], F.mul(a, coeffs[e]));
    }
    coeffs = next;
  }
  std::size_t D = roots.size();
  MultMatrix<PrimeField> M;
  M.nvars = 1;
  for (std::uint32_t e = 0; e < D; ++e) M.staircase.push_back({e});
  for (std::size_t j = 0; j < D; ++j) {
    MultMatrix<PrimeField>::Column c;
    if (j + 1 < D) {
      c.target = j + 1;
    } else {
      c.trivial = false;
      for (std::size_t e = 0; e < D; ++e) c.dense.push_back(F.neg(coeffs[e]));
    }
    M.columns.push_back(c);
  }
  coeffs.pop_back();
  return M;
}

}  // namespace

TEST_CASE("multiplication matrix of the mod-7 example") {
  PrimeField F(7);
  auto M = load_mult_matrix_gb_text(F, kLexGB);
  CHECK(M.dimension() == 4);
  CHECK(M.staircase == std::vector<Exponents>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(M.dense_count() == 1);
  CHECK(M.columns[0].target == 1);
  CHECK(M.columns[2].target == 3);
  // y^4 = -6 y^2 - 2; x = -2 y^3 - 5 y
  CHECK(M.columns[3].dense == std::vector<std::uint64_t>{5, 0, 1, 0});
  CHECK(M.nf[0] == std::vector<std::uint64_t>{0, 2, 0, 5});
}

TEST_CASE("one-point ideal") {
  PrimeField F(101);
  auto M = load_mult_matrix_gb_text(F, "order lex vars x\nx - 3\n");
  REQUIRE(M.dimension() == 1);
  CHECK(M.to_dense(F).at(0, 0) == 3);
  auto B = solve_shape_basis(F, M, ShapeOptions{});
  CHECK(B.eliminant == std::vector<std::uint64_t>{98});
}

TEST_CASE("matrix files round trip") {
  PrimeField F(1009);
  std::mt19937_64 rng(3);
  auto M = synthetic_shape_matrix(F, {4, 3, 1}, 1, 0, rng);
  CHECK(M.dimension() == 8);
  auto back = load_mult_matrix_text(F, mult_matrix_to_text(F, M));
  CHECK(back.staircase == M.staircase);
  CHECK(back.to_dense(F) == M.to_dense(F));
  CHECK(back.nf == M.nf);
  CHECK_THROWS(load_mult_matrix_text(F, "2 0 1\n0\n1\ntrivial 1\ntrivial 0\n"));
}

TEST_CASE("deltas") {
  auto t = compute_deltas(GDegreeMap::trivial(3), 10);
  CHECK(t.d == 1);
  CHECK(t.delta == std::vector<std::uint64_t>{0, 0, 0});
  auto z3 = compute_deltas(GDegreeMap::cyclic(3, {2, 1}), 9);
  CHECK(z3.d == 3);
  CHECK(z3.delta == std::vector<std::uint64_t>{2, 0});
  CHECK_THROWS_AS(compute_deltas(GDegreeMap::cyclic(4, {1, 2}), 8), std::invalid_argument);
  // brute force over exponents 0..q-1
  for (std::int64_t q : {2, 3, 4, 6})
    for (std::int64_t mu = 0; mu < q; ++mu)
      for (std::int64_t nu = 1; nu < q; ++nu) {
        auto g = GDegreeMap::cyclic(q, {mu, nu});
        std::int64_t d = 1;
        while (d * nu % q) ++d;
        std::int64_t delta = -1;
        for (std::int64_t e = 0; e < d && delta < 0; ++e)
          if (e * nu % q == mu) delta = e;
        if (delta < 0) {
          CHECK_THROWS(compute_deltas(g, 12));
          continue;
        }
        auto r = compute_deltas(g, 12);
        CHECK(r.d == static_cast<std::uint64_t>(d));
        CHECK(r.delta[0] == static_cast<std::uint64_t>(delta));
        CHECK(r.delta[1] == static_cast<std::uint64_t>(12 % d));
      }
}

TEST_CASE("Krylov rows against dense powers") {
  PrimeField F(7);
  auto M = load_mult_matrix_gb_text(F, kDrlGB);
  auto A = M.to_dense(F);
  std::vector<std::uint64_t> r{3, 1, 4, 1};
  std::vector<std::uint64_t> exps;
  for (std::uint64_t e = 0; e <= 10; ++e) exps.push_back(e);
  auto seq = krylov_sequence(F, M, r, exps);
  auto v = r;
  for (std::uint64_t e = 0; e <= 10; ++e) {
    CHECK(seq.at(e) == v);
    v = row_times(F, v, A);
  }

  PrimeField G(1009);
  std::mt19937_64 rng(4);
  auto S = synthetic_shape_matrix(G, {12, 9, 6}, 3, 1, rng);
  auto gm = GDegreeMap::cyclic(3, {1, 1});
  std::vector<std::uint64_t> r2(S.dimension());
  for (auto& x : r2) x = G.random(rng);
  std::vector<std::uint64_t> many;
  for (std::uint64_t e = 0; e < 2 * S.dimension(); e += 1 + rng() % 3) many.push_back(e);
  auto plain = krylov_sequence(G, S, r2, many, KrylovMode::Plain);
  auto blocked = krylov_sequence(G, S, r2, many, KrylovMode::Blocked, &gm, 3);
  CHECK(plain == blocked);
}

TEST_CASE("shape bases from Groebner bases") {
  PrimeField F(7);
  auto names = VariableNames::from_x({"x", "y"});
  auto lex = MonomialOrder::lex(2);
  for (auto text : {kDrlGB, kLexGB}) {
    auto M = load_mult_matrix_gb_text(F, text);
    for (auto mode : {KrylovMode::Plain, KrylovMode::Blocked}) {
      ShapeOptions o;
      o.mode = mode;
      auto B = solve_shape_basis(F, M, o);
      std::vector<std::string> s;
      for (const auto& p : B.polynomials(F)) s.push_back(polynomial_to_string(F, p, lex, names));
      CHECK(s == std::vector<std::string>{"y^4 + 6*y^2 + 2", "x + 2*y^3 + 5*y"});
      CHECK(shape_residuals_vanish(F, M, B, 9));
    }
  }
}

TEST_CASE("eliminant of a diagonalizable matrix") {
  PrimeField F(testutil::kBigPrime);
  std::mt19937_64 rng(10);
  for (int c = 0; c < 20; ++c) {
    std::size_t D = 1 + rng() % 12;
    std::set<std::uint64_t> roots;
    while (roots.size() < D) roots.insert(F.random(rng));
    std::vector<std::uint64_t> coeffs;
    auto M = companion(F, {roots.begin(), roots.end()}, coeffs);
    auto B = solve_shape_basis(F, M, ShapeOptions{static_cast<std::uint64_t>(c)});
    CHECK(B.eliminant == coeffs);
    CHECK(B.eliminant == oracle::dense_minimal_polynomial(F, M.to_dense(F)));
  }
}

TEST_CASE("three variables through interpolation") {
  // D points with distinct last coordinates; the staircase is 1, z, ..., z^{D-1} and NF(x_i) is
  // the interpolating polynomial of the i-th coordinates
  PrimeField F(testutil::kBigPrime);
  std::mt19937_64 rng(14);
  const std::size_t D = 7;
  std::vector<std::array<std::uint64_t, 3>> pts;
  std::set<std::uint64_t> zs;
  while (pts.size() < D) {
    std::array<std::uint64_t, 3> p{F.random(rng), F.random(rng), F.random(rng)};
    if (zs.insert(p[2]).second) pts.push_back(p);
  }
  std::vector<std::uint64_t> roots, coeffs;
  for (const auto& p : pts) roots.push_back(p[2]);
  auto M1 = companion(F, roots, coeffs);
  MultMatrix<PrimeField> M;
  M.nvars = 3;
  for (std::uint32_t e = 0; e < D; ++e) M.staircase.push_back({0, 0, e});
  M.columns = M1.columns;
  DenseMatrix<PrimeField> V(D, D, 0);
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t e = 0; e < D; ++e) V.at(k, e) = F.pow(roots[k], e);
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<std::uint64_t> b;
    for (const auto& p : pts) b.push_back(p[i]);
    M.nf.push_back(*solve_vector(F, V, b));
  }
  auto B = solve_shape_basis(F, M, ShapeOptions{});
  auto eval = [&](const std::vector<std::uint64_t>& c, std::uint64_t z) {
    std::uint64_t acc = 0;
    for (std::size_t e = c.size(); e-- > 0;) acc = F.add(F.mul(acc, z), c[e]);
    return acc;
  };
  for (const auto& p : pts) {
    CHECK(F.add(F.pow(p[2], D), eval(B.eliminant, p[2])) == 0);
    // x_i + g_i(z) vanishes at the point
    CHECK(F.add(p[0], eval(B.others[0], p[2])) == 0);
    CHECK(F.add(p[1], eval(B.others[1], p[2])) == 0);
  }
}

TEST_CASE("group-aware solving on synthetic ideals") {
  PrimeField F(testutil::kBigPrime);
  std::mt19937_64 rng(2);
  struct Case {
    std::vector<std::uint32_t> h;
    std::int64_t q, mu;
  };
  for (const auto& c : std::vector<Case>{{{12, 9, 6}, 3, 1}, {{12, 9, 6}, 3, 0}, {{7, 5, 2}, 2, 1}, {{13, 11, 6}, 6, 1}}) {
    if (!synthetic_blocks_balanced(c.h, c.q, c.mu)) continue;
    auto M = synthetic_shape_matrix(F, c.h, c.q, c.mu, rng);
    auto g = GDegreeMap::cyclic(c.q, {c.mu, 1});
    CAPTURE(c.q);
    auto rep = blocked_speedup_bench(F, M, g, 7);
    CHECK(rep.identical);
    CHECK(rep.basis.eliminant == oracle::dense_minimal_polynomial(F, M.to_dense(F)));
    CHECK(shape_residuals_vanish(F, M, rep.basis, 3));
    std::uint64_t D = M.dimension(), d = rep.basis.deltas.d;
    CHECK(rep.power_nontrivial <= std::max<std::uint64_t>(D, M.dense_count() * d));
    // supports follow the residue classes of the G-degrees
    for (std::uint64_t e = 0; e < D; ++e) {
      if (!F.is_zero(rep.basis.eliminant[e])) CHECK(e % d == rep.basis.deltas.delta[1]);
      if (!F.is_zero(rep.basis.others[0][e])) CHECK(e % d == rep.basis.deltas.delta[0]);
    }
    // fewer reads than the plain count 2D + D
    auto plain = solve_shape_basis(F, M, ShapeOptions{7, KrylovMode::Plain, nullptr, 3});
    CHECK(plain.distinct_reads == 3 * D);
    if (c.q > 1) CHECK(rep.basis.distinct_reads < plain.distinct_reads);
  }
}

TEST_CASE("homogeneity checks on loading") {
  PrimeField F(7);
  auto z3 = GDegreeMap({3}, {{2}, {1}});
  CHECK_THROWS(load_mult_matrix_gb_text(F, kDrlGB, &z3));
  CHECK_THROWS(load_mult_matrix_gb_text(F, "order lex vars x,y\nx^2 + y\n"));  // not zero-dimensional
}
