#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "relguess/linalg.hpp"
#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"
#include "relguess/tables.hpp"

namespace relguess {

enum class Exec { Serial, Parallel };

// Rows are x-shifts x^i, columns are t^k x^j; entry [t^k x^{i+j}]_u.
template <class Field>
struct MultiHankelMatrix {
  std::vector<Monomial> row_labels;
  std::vector<Monomial> col_labels;
  DenseMatrix<Field> m;

  std::string dump(const Field& F, const VariableNames& names) const {
    std::vector<std::string> rl, cl;
    for (const auto& r : row_labels) rl.push_back(monomial_to_string(r, names));
    for (const auto& c : col_labels) cl.push_back(monomial_to_string(c, names));
    std::vector<std::vector<std::string>> cells(m.rows, std::vector<std::string>(m.cols));
    std::vector<std::size_t> width(m.cols, 0);
    for (std::size_t j = 0; j < m.cols; ++j) width[j] = cl[j].size();
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) {
        cells[i][j] = F.to_string(m.at(i, j));
        width[j] = std::max(width[j], cells[i][j].size());
      }
    std::size_t lw = 0;
    for (const auto& s : rl) lw = std::max(lw, s.size());
    std::ostringstream out;
    auto pad = [](const std::string& s, std::size_t w) { return std::string(w - s.size(), ' ') + s; };
    out << std::string(lw + 3, ' ');
    for (std::size_t j = 0; j < m.cols; ++j) out << ' ' << pad(cl[j], width[j]);
    out << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
      out << pad(rl[i], lw) << "  (";
      for (std::size_t j = 0; j < m.cols; ++j) out << ' ' << pad(cells[i][j], width[j]);
      out << " )\n";
    }
    return out.str();
  }
};

// Straight loop over entries, one table query each. Kept as the reference for the parallel fill.
template <class Field, class Source>
MultiHankelMatrix<Field> build_hankel_serial(Source& u, const std::vector<Monomial>& X, const std::vector<Monomial>& T) {
  const Field& F = u.field();
  MultiHankelMatrix<Field> H{X, T, DenseMatrix<Field>(X.size(), T.size(), F.zero())};
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < T.size(); ++j) {
      Monomial e(add_exponents(X[i].x, T[j].x), T[j].t);
      H.m.at(i, j) = bracket_monomial<Field>(u, e);
    }
  return H;
}

// Gathers the distinct indices first, fetches them concurrently, then fills rows concurrently.
template <class Field, class Source>
MultiHankelMatrix<Field> build_hankel_parallel(Source& u, const std::vector<Monomial>& X,
                                               const std::vector<Monomial>& T) {
  using Element = typename Field::Element;
  const Field& F = u.field();
  MultiHankelMatrix<Field> H{X, T, DenseMatrix<Field>(X.size(), T.size(), F.zero())};

  std::unordered_map<Exponents, std::size_t, MonomialHash> slot;
  std::vector<Exponents> keys;
  for (const auto& r : X)
    for (const auto& c : T) {
      auto s = add_exponents(r.x, c.x);
      if (slot.emplace(s, keys.size()).second) keys.push_back(std::move(s));
    }
  std::vector<Element> values(keys.size(), F.zero());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t q = 0; q < keys.size(); ++q) {
    try {
      values[q] = u.query(keys[q]);
    } catch (...) {
#pragma omp critical(relguess_hankel_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < T.size(); ++j) {
      auto s = add_exponents(X[i].x, T[j].x);
      Monomial e(s, T[j].t);
      Element w = monomial_weight(F, e);
      H.m.at(i, j) = F.is_zero(w) ? F.zero() : F.mul(w, values[slot.at(s)]);
    }
  }
  return H;
}

template <class Field, class Source>
MultiHankelMatrix<Field> build_hankel(Source& u, const std::vector<Monomial>& X, const std::vector<Monomial>& T,
                                      Exec exec = Exec::Parallel) {
  return exec == Exec::Serial ? build_hankel_serial<Field>(u, X, T) : build_hankel_parallel<Field>(u, X, T);
}

template <class Field>
std::vector<Monomial> column_rank_profile_labels(const Field& F, const MultiHankelMatrix<Field>& H) {
  std::vector<Monomial> out;
  for (auto c : column_rank_profile(F, H.m)) out.push_back(H.col_labels[c]);
  return out;
}

// g + sum gamma_s s with H_{rows,S} gamma + H_{rows,{g}} = 0; nullopt if inconsistent.
template <class Field, class Source>
std::optional<SkewPolynomial<Field>> solve_relation(Source& u, const std::vector<Monomial>& rows,
                                                    const std::vector<Monomial>& S, const Monomial& g) {
  const Field& F = u.field();
  std::vector<Monomial> cols = S;
  cols.push_back(g);
  auto H = build_hankel<Field>(u, rows, cols, Exec::Serial);
  DenseMatrix<Field> A(rows.size(), S.size(), F.zero());
  std::vector<typename Field::Element> b(rows.size(), F.zero());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < S.size(); ++j) A.at(i, j) = H.m.at(i, j);
    b[i] = F.neg(H.m.at(i, S.size()));
  }
  auto gamma = solve_vector(F, A, b);
  if (!gamma) return std::nullopt;
  SkewPolynomial<Field> p(g.nvars());
  p.add_term(F, g, F.one());
  for (std::size_t j = 0; j < S.size(); ++j) p.add_term(F, S[j], (*gamma)[j]);
  return p;
}

}  // namespace relguess
