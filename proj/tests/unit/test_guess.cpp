#include <memory>

#include "doctest.h"
#include "helpers.hpp"
#include "relguess/guess.hpp"

using namespace relguess;
using testutil::monos;
using testutil::rel_strings;

namespace {

std::vector<std::string> v(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }

}  // namespace

TEST_CASE("batch guessing on the mod-7 example") {
  PrimeField F(7);
  FunctionTable<PrimeField> u(F, 2, [&](const Exponents& i) { return testutil::mod7_value(F, i); });
  auto names = VariableNames::from_x({"x", "y"});
  MonomialOrder lex(OrderKind::Lex, {0, 1}), drl(OrderKind::DegRevLex, {0, 1});
  auto T1 = monos({{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 0}, {1, 1}, {2, 0}, {3, 0}, {4, 0}});
  auto r1 = sfglm(u, lex, T1);
  CHECK(rel_strings(F, r1, lex, names) == v({"y^4 + 6*y^2 + 2", "x + 2*y^3 + 5*y"}));
  CHECK(r1.staircase == monos({{0, 0}, {0, 1}, {0, 2}, {0, 3}}));
  auto T2 = enumerate_monomials(drl, {}, EnumerationBound{3, std::nullopt, std::nullopt});
  auto r2 = sfglm(u, drl, T2);
  CHECK(rel_strings(F, r2, drl, names) == v({"x*y + 3", "x^2 + y^2 + 6", "y^3 + 4*x + 6*y"}));
  // every distinct sum of two labels is read once
  CHECK(r2.query_count <= 28);
}

TEST_CASE("zero tables give the unit relation") {
  PrimeField F(101);
  FunctionTable<PrimeField> z(F, 2, [](const Exponents&) { return std::uint64_t{0}; });
  auto names = VariableNames::from_x({"x", "y"});
  auto drl = MonomialOrder::drl(2);
  auto T = enumerate_monomials(drl, {}, EnumerationBound{2, std::nullopt, std::nullopt});
  CHECK(rel_strings(F, sfglm(z, drl, T), drl, names) == v({"1"}));
  auto a = adaptive_sfglm(z, drl);
  CHECK(rel_strings(F, a, drl, names) == v({"1"}));
  CHECK(a.staircase.empty());
}

TEST_CASE("geometric sequence in one variable") {
  PrimeField F(testutil::kBigPrime);
  FunctionTable<PrimeField> u(F, 1, [&](const Exponents& i) { return F.pow(2, i[0]); });
  auto names = VariableNames::from_x({"x"});
  auto lex = MonomialOrder::lex(1);
  GuessOptions o;
  o.caps = Exponents{6};
  auto r = adaptive_sfglm(u, lex, o);
  CHECK(rel_strings(F, r, lex, names) == std::vector<std::string>{"x + " + std::to_string(testutil::kBigPrime - 2)});
  CHECK(r.staircase == monos({{0}}));
  // the rank drop the relation rests on
  CHECK(F.sub(F.mul(u.query({0}), u.query({2})), F.mul(u.query({1}), u.query({1}))) == 0);
}

TEST_CASE("single-coset lattice matches the adaptive run") {
  PrimeField F(7);
  FunctionTable<PrimeField> u(F, 2, [&](const Exponents& i) { return testutil::mod7_value(F, i); });
  auto names = VariableNames::from_x({"x", "y"});
  for (auto kind : {OrderKind::Lex, OrderKind::DegRevLex}) {
    MonomialOrder o(kind, {0, 1});
    GuessOptions opts;
    opts.caps = Exponents{6, 6};
    auto a = adaptive_sfglm(u, o, opts);
    auto b = lattice_adaptive_sfglm(u, o, Lattice::full(2), opts);
    CHECK(rel_strings(F, a, o, names) == rel_strings(F, b, o, names));
    CHECK(a.staircase == b.staircase);
    CHECK(a.query_count == b.query_count);
  }
}

TEST_CASE("x^4 - a x^2 over the even lattice") {
  // u_{i+4} = a u_{i+2}; with a = 0 the {1}-augmented odd block has determinant -u_2 u_3^2, so x^3
  // shows up exactly when u_3 != 0 (for a != 0 it shows up regardless)
  RationalField Q;
  const mpq_class a = 0;
  auto make = [&](std::vector<mpq_class> head) {
    return std::make_unique<FunctionTable<RationalField>>(Q, 1, [head, a](const Exponents& i) {
      if (i[0] < 4) return head[i[0]];
      std::uint32_t base = 2 + i[0] % 2, steps = (i[0] - base) / 2;
      mpq_class r = head[base];
      for (std::uint32_t s = 0; s < steps; ++s) r *= a;
      return r;
    });
  };
  auto lex = MonomialOrder::lex(1);
  Lattice L(IntMatrix{{2}});
  GuessOptions o;
  o.caps = Exponents{10};
  auto x3 = Monomial::pure({3});
  for (const auto& head : std::vector<std::vector<mpq_class>>{{1, 1, 2, 1}, {1, 0, 2, 5}, {1, 1, 2, 0}}) {
    auto u = make(head);
    auto r = lattice_adaptive_sfglm(*u, lex, L, o);
    bool has = std::find(r.staircase.begin(), r.staircase.end(), x3) != r.staircase.end();
    CAPTURE(head[3].get_str());
    CHECK(has == (head[3] != 0));
  }
}

TEST_CASE("cone-restricted King walk finds the fake relation") {
  PrimeField F(testutil::kBigPrime);
  WalkTable<PrimeField> u(F, std::make_shared<WalkCounter>(WalkSpec::preset("king")));
  Cone C({{1, 1}, {2, 0}});
  MonomialOrder lex(OrderKind::Lex, {0, 1});
  auto names = VariableNames::from_x({"x0", "x1"});
  GuessOptions o;
  o.cone = &C;
  o.caps = Exponents{4, 4};
  o.max_staircase = 3;
  o.trace = true;
  auto r = adaptive_sfglm(u, lex, o);
  auto s = rel_strings(F, r, lex, names);
  REQUIRE(s.size() >= 1);
  CHECK(s[0] == "x0*x1 + " + std::to_string(testutil::kBigPrime - 1));
  classify_relations(u, r, monos({{2, 0}}));
  CHECK(r.relations[0].status == RelationStatus::Fake);
  // Catalan minors along the run
  bool saw2 = false, saw3 = false;
  for (const auto& t : r.trace) {
    if (t.matrix == testutil::mat(F, {{1, 1}, {1, 2}})) saw2 = true;
    if (t.matrix == testutil::mat(F, {{1, 1, 2}, {1, 2, 5}, {2, 5, 14}})) saw3 = true;
  }
  CHECK(saw2);
  CHECK(saw3);
}

TEST_CASE("classification") {
  PrimeField F(testutil::kBigPrime);
  WalkTable<PrimeField> king(F, std::make_shared<WalkCounter>(WalkSpec::preset("king")));
  auto names = VariableNames::from_x({"x0", "x1"});
  GuessReport<PrimeField> rep;
  auto p = parse_polynomial(F, "x0*x1 - 1", names);
  rep.relations.push_back({p, Monomial::pure({1, 1})});
  // (x0 x1 - 1) x0^2 reads u_{3,1} - u_{2,0}; by hand: ++-, +-+ end at 1, and +- ends at 0
  CHECK(shifted_bracket<PrimeField>(king, p, {2, 0}) == 1);
  classify_relations(king, rep, monos({{2, 0}}));
  CHECK(rep.fake == 1);
  classify_relations(king, rep, {});
  CHECK(rep.correct == 1);
  CHECK(rep.relations[0].status == RelationStatus::CorrectSoFar);

  PrimeField F7(7);
  FunctionTable<PrimeField> u(F7, 2, [&](const Exponents& i) { return testutil::mod7_value(F7, i); });
  auto xy = VariableNames::from_x({"x", "y"});
  GuessReport<PrimeField> gb;
  for (auto s : {"x*y + 3", "x^2 + y^2 + 6", "y^3 + 4*x + 6*y"})
    gb.relations.push_back({parse_polynomial(F7, s, xy), Monomial::one(2)});
  classify_relations(u, gb, enumerate_monomials(MonomialOrder::drl(2), {}, EnumerationBound{20, std::nullopt, std::nullopt}));
  CHECK(gb.correct == 3);
  CHECK(gb.fake == 0);
}

TEST_CASE("P-relations of the binomial table") {
  RationalField Q;
  FunctionTable<RationalField> b(Q, 2, [](const Exponents& i) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), i[0], i[1]);
    return mpq_class(c);
  });
  auto names = VariableNames{{"x", "y"}, {"t", "u"}};
  auto drl = MonomialOrder::drl(2);
  auto X = enumerate_monomials(drl, {}, EnumerationBound{6, std::nullopt, std::nullopt});
  auto T = enumerate_mixed(drl, {}, 1, EnumerationBound{2, std::nullopt, std::nullopt});
  auto r = guess_prels(b, drl, X, T);
  // both expected operators annihilate the table, and their leading monomials are reached
  for (auto s : {"u*y - t + u", "t*x - u*x - t - 1"}) {
    auto p = parse_polynomial(Q, s, names);
    for (const auto& sh : X) CHECK(shifted_bracket<RationalField>(b, p, sh.x) == 0);
    const auto& lm = p.leading_monomial(drl);
    bool covered = false;
    for (const auto& rel : r.relations) covered |= divides(rel.lm, lm);
    CHECK(covered);
  }

  FunctionTable<RationalField> z(Q, 2, [](const Exponents&) { return mpq_class(0); });
  auto rz = guess_prels(z, drl, X, T);
  CHECK(rz.staircase.empty());
  CHECK(rz.relations.size() == 1);  // every column is free; only 1 is kept as a leading monomial
}

TEST_CASE("divisibility-minimal leading monomials") {
  PrimeField F(7);
  FunctionTable<PrimeField> u(F, 2, [&](const Exponents& i) { return testutil::mod7_value(F, i); });
  auto drl = MonomialOrder::drl(2);
  auto T = enumerate_monomials(drl, {}, EnumerationBound{5, std::nullopt, std::nullopt});
  GuessOptions o;
  o.extra_rows = 2;
  auto r = sfglm(u, drl, T, o);
  for (std::size_t a = 0; a < r.relations.size(); ++a) {
    CHECK(std::find(r.staircase.begin(), r.staircase.end(), r.relations[a].lm) == r.staircase.end());
    for (std::size_t b = 0; b < r.relations.size(); ++b)
      if (a != b) CHECK_FALSE(divides(r.relations[a].lm, r.relations[b].lm));
  }
  CHECK(is_staircase(r.staircase, T));
}
