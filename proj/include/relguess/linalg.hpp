#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace relguess {

template <class Field>
struct DenseMatrix {
  using Element = typename Field::Element;
  std::size_t rows = 0, cols = 0;
  std::vector<Element> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, const Element& z) : rows(r), cols(c), a(r * c, z) {}

  Element& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Element& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Gauss-Jordan (or plain forward elimination) in place. Columns are scanned left to right and
// the pivot row is the first remaining row with a nonzero entry. Pivots are searched among the
// first `pivot_cols` columns only, so trailing columns act as right-hand sides.
template <class Field>
std::vector<std::size_t> echelonize(const Field& F, DenseMatrix<Field>& A, bool reduced, std::size_t pivot_cols) {
  using Element = typename Field::Element;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t C = A.cols;
  for (std::size_t c = 0; c < pivot_cols && r < A.rows; ++c) {
    std::size_t p = r;
    while (p < A.rows && F.is_zero(A.at(p, c))) ++p;
    if (p == A.rows) continue;
    if (p != r)
      for (std::size_t j = c; j < C; ++j) std::swap(A.at(p, j), A.at(r, j));
    Element inv = F.inv(A.at(r, c));
    Element* prow = &A.a[r * C];
    for (std::size_t j = c; j < C; ++j) prow[j] = F.mul(prow[j], inv);
    for (std::size_t i = reduced ? 0 : r + 1; i < A.rows; ++i) {
      if (i == r) continue;
      Element* row = &A.a[i * C];
      if (F.is_zero(row[c])) continue;
      Element f = row[c];
      for (std::size_t j = c; j < C; ++j)
        if (!F.is_zero(prow[j])) row[j] = F.sub_mul(row[j], f, prow[j]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Leftmost maximal set of linearly independent columns.
template <class Field>
std::vector<std::size_t> column_rank_profile(const Field& F, DenseMatrix<Field> A) {
  return echelonize(F, A, false, A.cols);
}

template <class Field>
std::size_t matrix_rank(const Field& F, DenseMatrix<Field> A) {
  return echelonize(F, A, false, A.cols).size();
}

// Solutions of A X = B (B with several columns). Free unknowns are set to zero; nullopt when
// some column of B is not in the column space of A.
template <class Field>
std::optional<DenseMatrix<Field>> solve_linear(const Field& F, const DenseMatrix<Field>& A, const DenseMatrix<Field>& B) {
  if (A.rows != B.rows) throw std::invalid_argument("solve_linear: row count mismatch");
  DenseMatrix<Field> M(A.rows, A.cols + B.cols, F.zero());
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    for (std::size_t j = 0; j < B.cols; ++j) M.at(i, A.cols + j) = B.at(i, j);
  }
  auto piv = echelonize(F, M, true, A.cols);
  for (std::size_t i = piv.size(); i < M.rows; ++i)
    for (std::size_t j = 0; j < B.cols; ++j)
      if (!F.is_zero(M.at(i, A.cols + j))) return std::nullopt;
  DenseMatrix<Field> X(A.cols, B.cols, F.zero());
  for (std::size_t r = 0; r < piv.size(); ++r)
    for (std::size_t j = 0; j < B.cols; ++j) X.at(piv[r], j) = M.at(r, A.cols + j);
  return X;
}

template <class Field>
std::optional<std::vector<typename Field::Element>> solve_vector(const Field& F, const DenseMatrix<Field>& A,
                                                                 const std::vector<typename Field::Element>& b) {
  DenseMatrix<Field> B(b.size(), 1, F.zero());
  for (std::size_t i = 0; i < b.size(); ++i) B.at(i, 0) = b[i];
  auto X = solve_linear(F, A, B);
  if (!X) return std::nullopt;
  return X->a;
}

// A X = B for square A; nullopt when A is singular
template <class Field>
std::optional<DenseMatrix<Field>> solve_nonsingular(const Field& F, const DenseMatrix<Field>& A, const DenseMatrix<Field>& B) {
  if (A.rows != A.cols || A.rows != B.rows) throw std::invalid_argument("solve_nonsingular: shape mismatch");
  DenseMatrix<Field> M(A.rows, A.cols + B.cols, F.zero());
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    for (std::size_t j = 0; j < B.cols; ++j) M.at(i, A.cols + j) = B.at(i, j);
  }
  auto piv = echelonize(F, M, true, A.cols);
  if (piv.size() < A.cols) return std::nullopt;
  DenseMatrix<Field> X(A.cols, B.cols, F.zero());
  for (std::size_t r = 0; r < piv.size(); ++r)
    for (std::size_t j = 0; j < B.cols; ++j) X.at(r, j) = M.at(r, A.cols + j);
  return X;
}

// Right kernel in reduced column-echelon shape: one vector per non-pivot column f, equal to 1 at
// f, 0 at the other non-pivot columns, and supported on f and the pivot columns left of f.
template <class Field>
struct KernelBasis {
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free_columns;
  std::vector<std::vector<typename Field::Element>> vectors;
};

template <class Field>
KernelBasis<Field> right_kernel(const Field& F, DenseMatrix<Field> A) {
  KernelBasis<Field> K;
  K.pivots = echelonize(F, A, true, A.cols);
  std::vector<bool> is_pivot(A.cols, false);
  for (auto p : K.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < A.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<typename Field::Element> v(A.cols, F.zero());
    v[f] = F.one();
    for (std::size_t r = 0; r < K.pivots.size(); ++r) v[K.pivots[r]] = F.neg(A.at(r, f));
    K.free_columns.push_back(f);
    K.vectors.push_back(std::move(v));
  }
  return K;
}

// LU of a square matrix grown by bordering: each step adds one row and one column. Every
// accepted step keeps the leading principal minors nonsingular, so no pivoting is needed.
template <class Field>
class IncrementalLU {
 public:
  using Element = typename Field::Element;

  struct Probe {
    std::vector<Element> y;  // L^{-1} c
    Element schur;           // h - (r U^{-1}) . y
    std::vector<Element> z;  // r U^{-1}
  };

  explicit IncrementalLU(const Field& F) : F_(&F) {}

  std::size_t size() const { return L_.size(); }

  // c = new column restricted to the current rows, r = new row restricted to current columns
  Probe probe(const std::vector<Element>& c, const std::vector<Element>& r, const Element& h) const {
    const Field& F = *F_;
    std::size_t k = size();
    Probe p;
    p.y.assign(k, F.zero());
    for (std::size_t i = 0; i < k; ++i) {
      Element acc = c[i];
      for (std::size_t j = 0; j < i; ++j) acc = F.sub(acc, F.mul(L_[i][j], p.y[j]));
      p.y[i] = acc;
    }
    p.z.assign(k, F.zero());
    for (std::size_t j = 0; j < k; ++j) {
      Element acc = r[j];
      for (std::size_t i = 0; i < j; ++i) acc = F.sub(acc, F.mul(p.z[i], U_[i][j]));
      p.z[j] = F.div(acc, U_[j][j]);
    }
    Element s = h;
    for (std::size_t i = 0; i < k; ++i) s = F.sub(s, F.mul(p.z[i], p.y[i]));
    p.schur = s;
    return p;
  }

  void accept(const Probe& p) {
    if (F_->is_zero(p.schur)) throw std::logic_error("bordered extension would be singular");
    std::size_t k = size();
    for (std::size_t i = 0; i < k; ++i) U_[i].push_back(p.y[i]);
    std::vector<Element> urow(k + 1, F_->zero());
    urow[k] = p.schur;
    U_.push_back(std::move(urow));
    std::vector<Element> lrow = p.z;
    lrow.push_back(F_->one());
    L_.push_back(std::move(lrow));
  }

  // gamma with H gamma = -c, from a probe of column c
  std::vector<Element> solve_negated(const Probe& p) const {
    const Field& F = *F_;
    std::size_t k = size();
    std::vector<Element> g(k, F.zero());
    for (std::size_t i = k; i-- > 0;) {
      Element acc = F.neg(p.y[i]);
      for (std::size_t j = i + 1; j < k; ++j) acc = F.sub(acc, F.mul(U_[i][j], g[j]));
      g[i] = F.div(acc, U_[i][i]);
    }
    return g;
  }

 private:
  const Field* F_;
  std::vector<std::vector<Element>> L_;  // row i has i+1 entries
  std::vector<std::vector<Element>> U_;  // row i has entries for columns 0..k-1
};

}  // namespace relguess
