#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "relguess/formats.hpp"
#include "relguess/structures.hpp"

using namespace relguess;

namespace {

// all combinations with coefficient sum <= bound
bool cone_brute(const std::vector<Exponents>& gens, const Exponents& target, unsigned bound) {
  std::set<Exponents> level{Exponents(target.size(), 0)};
  std::set<Exponents> all = level;
  for (unsigned s = 0; s < bound; ++s) {
    std::set<Exponents> next;
    for (const auto& v : level)
      for (const auto& g : gens) next.insert(add_exponents(v, g));
    all.insert(next.begin(), next.end());
    level = std::move(next);
  }
  return all.count(target) > 0;
}

// v in the row span of a 2x2 integer basis, by Cramer's rule
bool in_span2(const IntMatrix& B, std::int64_t v0, std::int64_t v1) {
  std::int64_t det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  std::int64_t c0 = v0 * B[1][1] - v1 * B[1][0];
  std::int64_t c1 = B[0][0] * v1 - B[0][1] * v0;
  return c0 % det == 0 && c1 % det == 0;
}

}  // namespace

TEST_CASE("cone membership") {
  std::vector<Exponents> g{{1, 1}, {1, 2}, {2, 1}};
  Cone C(g);
  CHECK(C.contains({3, 3}));
  CHECK(C.contains({0, 0}));
  CHECK_FALSE(C.contains({1, 0}));
  for (std::uint32_t a = 0; a <= 7; ++a)
    for (std::uint32_t b = 0; b <= 7; ++b) CHECK(C.contains({a, b}) == cone_brute(g, {a, b}, 7));
}

TEST_CASE("cone closed under addition") {
  Cone C({{1, 1}, {2, 0}, {0, 3}});
  std::mt19937_64 rng(2);
  for (int k = 0; k < 300; ++k) {
    Exponents a{static_cast<std::uint32_t>(rng() % 8), static_cast<std::uint32_t>(rng() % 8)};
    Exponents b{static_cast<std::uint32_t>(rng() % 8), static_cast<std::uint32_t>(rng() % 8)};
    if (C.contains(a) && C.contains(b)) CHECK(C.contains(add_exponents(a, b)));
  }
  CHECK(C.divides(Monomial::pure({1, 0}), Monomial::pure({2, 1})));
  CHECK_FALSE(C.divides(Monomial::pure({1, 0}), Monomial::pure({2, 0})));
}

TEST_CASE("lattice cosets") {
  Lattice L(IntMatrix{{0, 3}, {1, 0}});
  CHECK(L.index() == 3);
  CHECK(L.coset({0, 5}) == Exponents{0, 2});
  for (std::uint32_t i = 0; i < 6; ++i)
    for (std::uint32_t j = 0; j < 9; ++j) CHECK(L.coset({i, j}) == Exponents{0, j % 3});
  auto Z = Lattice::full(2);
  CHECK(Z.index() == 1);
  CHECK(Z.coset({4, 7}) == Exponents{0, 0});
}

TEST_CASE("random lattices against an integer solve") {
  std::mt19937_64 rng(8);
  int tested = 0;
  while (tested < 40) {
    IntMatrix B{{static_cast<std::int64_t>(rng() % 5), static_cast<std::int64_t>(rng() % 5) - 2},
                {static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5)}};
    std::int64_t det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
    if (det == 0) continue;
    ++tested;
    Lattice L(B);
    CHECK(L.index() == static_cast<std::size_t>(det < 0 ? -det : det));
    // domain points are pairwise inequivalent
    const auto& A = L.domain();
    for (std::size_t a = 0; a < A.size(); ++a)
      for (std::size_t b = a + 1; b < A.size(); ++b)
        CHECK_FALSE(in_span2(B, std::int64_t(A[a][0]) - A[b][0], std::int64_t(A[a][1]) - A[b][1]));
    for (int k = 0; k < 30; ++k) {
      Exponents i{static_cast<std::uint32_t>(rng() % 20), static_cast<std::uint32_t>(rng() % 20)};
      auto a = L.coset(i);
      CHECK(in_span2(B, std::int64_t(i[0]) - a[0], std::int64_t(i[1]) - a[1]));
    }
  }
}

TEST_CASE("degenerate lattice bases are rejected") {
  CHECK_THROWS(Lattice(IntMatrix{{1, 2}, {2, 4}}));
}

TEST_CASE("G-degrees") {
  auto g = GDegreeMap::cyclic(3, {1, 1});
  CHECK(g.is_zero(g.gdegree({0, 0})));
  CHECK(g.is_zero(g.gdegree({1, 2})));
  std::mt19937_64 rng(4);
  GDegreeMap h({2, 6}, {{1, 3}, {0, 5}, {1, 1}});
  for (int k = 0; k < 200; ++k) {
    Exponents a(3), b(3);
    for (auto& v : a) v = rng() % 7;
    for (auto& v : b) v = rng() % 7;
    CHECK(h.gdegree(add_exponents(a, b)) == h.add(h.gdegree(a), h.gdegree(b)));
  }
}

TEST_CASE("zero-degree lattices") {
  auto triv = gdegree_zero_lattice(GDegreeMap::trivial(2));
  CHECK(triv.index() == 1);

  auto one = gdegree_zero_lattice(GDegreeMap::cyclic(3, {1}));
  CHECK(one.index() == 3);
  CHECK(one.contains({3}));
  CHECK_FALSE(one.contains({1}));

  auto g = GDegreeMap::cyclic(3, {1, 1});
  auto L = gdegree_zero_lattice(g);
  CHECK(L.index() == 3);
  CHECK(L.contains({3, 0}));
  CHECK(L.contains({-1, 1}));
  CHECK(L.contains({2, 1}));
  CHECK_FALSE(L.contains({1, 0}));
  // a point lies in the coset of a exactly when its G-degree matches
  for (std::uint32_t i = 0; i < 8; ++i)
    for (std::uint32_t j = 0; j < 8; ++j) CHECK(g.gdegree(L.coset({i, j})) == g.gdegree({i, j}));
  std::set<GDegreeMap::Degree> degs;
  for (const auto& a : L.domain()) degs.insert(g.gdegree(a));
  CHECK(degs.size() == 3);
}

TEST_CASE("structure text formats round trip") {
  Cone C({{1, 1}, {2, 0}});
  CHECK(parse_cone_text(cone_to_text(C)).generators() == C.generators());
  Lattice L(IntMatrix{{0, 3}, {1, 0}});
  auto L2 = parse_lattice_text(lattice_to_text(L));
  CHECK(L2.hnf() == L.hnf());
  CHECK(L2.domain() == L.domain());
  GDegreeMap g({2, 6}, {{1, 3}, {0, 5}});
  auto g2 = parse_gdeg_text(gdeg_to_text(g), 2);
  CHECK(g2.factors() == g.factors());
  CHECK(g2.var_degree(1) == g.var_degree(1));
}
