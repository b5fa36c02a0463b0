#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "relguess/field.hpp"
#include "relguess/linalg.hpp"
#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"

namespace testutil {

using namespace relguess;

constexpr std::uint64_t kBigPrime = 4294967291ULL;

inline std::vector<Monomial> monos(std::initializer_list<Exponents> l) {
  std::vector<Monomial> v;
  for (const auto& e : l) v.push_back(Monomial::pure(e));
  return v;
}

template <class Field>
DenseMatrix<Field> mat(const Field& F, std::vector<std::vector<long>> rows) {
  DenseMatrix<Field> m(rows.size(), rows.empty() ? 0 : rows[0].size(), F.zero());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = F.from_int(rows[i][j]);
  return m;
}

// u_{i,j} = (5+4i+3j) 2^(i+j) + (3+6i+j) 5^(i+j) mod 7
inline PrimeField::Element mod7_value(const PrimeField& F, const Exponents& i) {
  auto e = i[0] + i[1];
  return F.add(F.mul(F.from_int(5 + 4 * i[0] + 3 * i[1]), F.pow(2, e)),
               F.mul(F.from_int(3 + 6 * i[0] + i[1]), F.pow(5, e)));
}

template <class Field, class Report>
std::vector<std::string> rel_strings(const Field& F, const Report& r, const MonomialOrder& o, const VariableNames& names) {
  std::vector<std::string> out;
  for (const auto& rel : r.relations) out.push_back(polynomial_to_string(F, rel.poly, o, names));
  return out;
}

}  // namespace testutil
