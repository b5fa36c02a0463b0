#include "doctest.h"
#include "helpers.hpp"
#include "relguess/fglm.hpp"
#include "relguess/formats.hpp"

using namespace relguess;

TEST_CASE("polynomial text") {
  RationalField Q;
  auto names = VariableNames{{"x", "y"}, {"t", "u"}};
  auto drl = MonomialOrder::drl(2);
  auto p = parse_polynomial(Q, "1/2*x^2*y - 3*t*x + 7/3 - (x + 1)*(x - 1)", names);
  CHECK(polynomial_to_string(Q, p, drl, names) == "1/2*x^2*y - x^2 - 3*t*x + 10/3");
  for (auto s : {"x*y + 3", "t^2*u*x*y^3 - 5*y", "-x", "0"})
    CHECK(polynomial_to_string(Q, parse_polynomial(Q, s, names), drl, names) == s);
  CHECK_THROWS(parse_polynomial(Q, "x + z", names));
  CHECK_THROWS(parse_polynomial(Q, "x^", names));
  CHECK_THROWS(parse_polynomial(Q, "(x + 1", names));

  PrimeField F(7);
  CHECK(polynomial_to_string(F, parse_polynomial(F, "x - 1/2", names), drl, names) == "x + 3");
}

TEST_CASE("orders and names") {
  CHECK(parse_order("lex", 2).kind() == OrderKind::Lex);
  CHECK(parse_order("grevlex", 2).kind() == OrderKind::DegRevLex);
  CHECK_THROWS(parse_order("weird", 2));
  CHECK(split_names("x0, x1,x2") == std::vector<std::string>{"x0", "x1", "x2"});
  CHECK(content_lines("# c\n\n a 1 # tail\nb\n").size() == 2);
}

TEST_CASE("Groebner basis files") {
  auto h = parse_gb_text("# comment\norder drl vars x,y\nfield 7\nx*y + 3\nx^2 + y^2 + 6\n");
  CHECK(h.names.x == std::vector<std::string>{"x", "y"});
  CHECK(h.field == std::optional<std::string>("7"));
  CHECK(h.polys.size() == 2);
  CHECK_THROWS(parse_gb_text("x + 1\n"));
}

TEST_CASE("bad structure files") {
  CHECK_THROWS(parse_cone_text(""));
  CHECK_THROWS(parse_lattice_text("1 2\n"));
  CHECK_THROWS(parse_gdeg_text("factors 3\n1\n", 2));
}
