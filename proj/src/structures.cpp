#include "relguess/structures.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>

namespace relguess {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

void row_axpy(IntVector& dst, std::int64_t q, const IntVector& src) {
  if (q == 0) return;
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = checked_sub(dst[j], checked_mul(q, src[j]));
}

}  // namespace

std::size_t hermite_rows(IntMatrix& A, std::size_t pivot_cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < A.size(); ++c) {
    while (true) {
      std::size_t best = A.size();
      for (std::size_t i = r; i < A.size(); ++i)
        if (A[i][c] != 0 && (best == A.size() || std::llabs(A[i][c]) < std::llabs(A[best][c]))) best = i;
      if (best == A.size()) break;
      std::swap(A[r], A[best]);
      bool clean = true;
      for (std::size_t i = r + 1; i < A.size(); ++i) {
        if (A[i][c] == 0) continue;
        row_axpy(A[i], floor_div(A[i][c], A[r][c]), A[r]);
        if (A[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (r >= A.size() || A[r][c] == 0) continue;
    if (A[r][c] < 0)
      for (auto& v : A[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) row_axpy(A[i], floor_div(A[i][c], A[r][c]), A[r]);
    ++r;
  }
  return r;
}

IntMatrix hermite_normal_form(IntMatrix rows) {
  if (rows.empty()) return rows;
  std::size_t r = hermite_rows(rows, rows.front().size());
  rows.resize(r);
  return rows;
}

IntMatrix integer_kernel(const IntMatrix& B) {
  if (B.empty()) return {};
  std::size_t m = B.size(), N = B.front().size();
  IntMatrix rows(N, IntVector(m + N, 0));
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < m; ++i) rows[j][i] = B[i][j];
    rows[j][m + j] = 1;
  }
  std::size_t r = hermite_rows(rows, m);
  IntMatrix ker;
  for (std::size_t j = r; j < N; ++j) ker.emplace_back(rows[j].begin() + m, rows[j].end());
  return ker;
}

// ---- Cone ----

Cone::Cone(std::vector<Exponents> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("cone needs at least one generator");
  for (const auto& g : gens_) {
    if (g.size() != gens_.front().size()) throw std::invalid_argument("cone generators differ in length");
    if (std::all_of(g.begin(), g.end(), [](auto e) { return e == 0; }))
      throw std::invalid_argument("zero cone generator");
  }
}

bool Cone::contains(const Exponents& v) const {
  if (v.size() != dimension()) throw std::invalid_argument("cone dimension mismatch");
  if (std::all_of(v.begin(), v.end(), [](auto e) { return e == 0; })) return true;
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
  }
  bool found = false;
  for (const auto& g : gens_) {
    if (!exponents_divide(g, v)) continue;
    Exponents w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] - g[i];
    if (contains(w)) {
      found = true;
      break;
    }
  }
  std::unique_lock lock(mu_);
  memo_.emplace(v, found);
  return found;
}

bool Cone::divides(const Monomial& a, const Monomial& b) const {
  if (!relguess::divides(a, b)) return false;
  Exponents d(a.x.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = b.x[i] - a.x[i];
  return contains(d);
}

// ---- Lattice ----

Lattice::Lattice(IntMatrix basis, std::optional<std::vector<Exponents>> domain) {
  if (basis.empty()) throw std::invalid_argument("empty lattice basis");
  std::size_t n = basis.front().size();
  for (const auto& row : basis)
    if (row.size() != n) throw std::invalid_argument("lattice basis rows differ in length");
  hnf_ = hermite_normal_form(std::move(basis));
  if (hnf_.size() != n) throw std::invalid_argument("lattice basis is rank-deficient");
  for (std::size_t k = 0; k < n; ++k)
    if (hnf_[k][k] <= 0) throw std::invalid_argument("lattice basis is rank-deficient");

  std::size_t det = 1;
  for (std::size_t k = 0; k < n; ++k) det = static_cast<std::size_t>(checked_mul(det, hnf_[k][k]));
  key_to_domain_.assign(det, det);

  if (!domain) {
    for (std::size_t key = 0; key < det; ++key) {
      Exponents a(n);
      std::size_t rest = key;
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = static_cast<std::uint32_t>(rest % hnf_[k][k]);
        rest /= hnf_[k][k];
      }
      key_to_domain_[key] = domain_.size();
      domain_.push_back(a);
    }
    return;
  }
  if (domain->size() != det)
    throw std::invalid_argument("fundamental domain has " + std::to_string(domain->size()) + " points, index is " +
                                std::to_string(det));
  bool has_zero = false;
  for (const auto& a : *domain) {
    if (a.size() != n) throw std::invalid_argument("domain point has wrong length");
    IntVector v(a.begin(), a.end());
    std::size_t key = key_index(reduce(v));
    if (key_to_domain_[key] != det) throw std::invalid_argument("two domain points share a coset");
    key_to_domain_[key] = domain_.size();
    domain_.push_back(a);
    has_zero |= std::all_of(a.begin(), a.end(), [](auto e) { return e == 0; });
  }
  if (!has_zero) throw std::invalid_argument("fundamental domain must contain 0");
}

Lattice Lattice::full(std::size_t n) {
  IntMatrix id(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return Lattice(id);
}

IntVector Lattice::reduce(IntVector v) const {
  for (std::size_t k = 0; k < hnf_.size(); ++k) row_axpy(v, floor_div(v[k], hnf_[k][k]), hnf_[k]);
  return v;
}

std::size_t Lattice::key_index(const IntVector& r) const {
  std::size_t key = 0, radix = 1;
  for (std::size_t k = 0; k < hnf_.size(); ++k) {
    key += static_cast<std::size_t>(r[k]) * radix;
    radix *= static_cast<std::size_t>(hnf_[k][k]);
  }
  return key;
}

bool Lattice::contains(const IntVector& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](auto e) { return e == 0; });
}

std::size_t Lattice::coset_index(const Exponents& i) const {
  if (i.size() != dimension()) throw std::invalid_argument("lattice dimension mismatch");
  return key_to_domain_[key_index(reduce(IntVector(i.begin(), i.end())))];
}

// ---- G-degrees ----

GDegreeMap::GDegreeMap(std::vector<std::int64_t> factors, std::vector<Degree> var_degrees)
    : factors_(std::move(factors)), degrees_(std::move(var_degrees)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 1) throw std::invalid_argument("invariant factors must be positive");
    if (i > 0 && factors_[i] % factors_[i - 1] != 0)
      throw std::invalid_argument("invariant factors must form a divisibility chain");
  }
  for (auto& d : degrees_) {
    if (d.size() != factors_.size()) throw std::invalid_argument("degree tuple length differs from factor count");
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = floor_mod(d[i], factors_[i]);
  }
}

GDegreeMap GDegreeMap::cyclic(std::int64_t q, std::vector<std::int64_t> degs) {
  std::vector<Degree> d;
  for (auto v : degs) d.push_back({v});
  return GDegreeMap({q}, d);
}

std::size_t GDegreeMap::group_order() const {
  std::size_t o = 1;
  for (auto q : factors_) o *= static_cast<std::size_t>(q);
  return o;
}

GDegreeMap::Degree GDegreeMap::gdegree(const Exponents& x) const {
  if (x.size() != degrees_.size()) throw std::invalid_argument("G-degree: variable count mismatch");
  Degree r = zero();
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = floor_mod(r[i] + floor_mod(static_cast<std::int64_t>(x[p]) % factors_[i] * degrees_[p][i], factors_[i]),
                       factors_[i]);
  return r;
}

GDegreeMap::Degree GDegreeMap::add(const Degree& a, const Degree& b) const {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = floor_mod(a[i] + b[i], factors_[i]);
  return r;
}

GDegreeMap::Degree GDegreeMap::scale(const Degree& a, std::int64_t k) const {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = floor_mod(floor_mod(k, factors_[i]) * a[i], factors_[i]);
  return r;
}

bool GDegreeMap::is_zero(const Degree& a) const {
  return std::all_of(a.begin(), a.end(), [](auto e) { return e == 0; });
}

std::size_t GDegreeMap::index_of(const Degree& a) const {
  std::size_t key = 0, radix = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    key += static_cast<std::size_t>(a[i]) * radix;
    radix *= static_cast<std::size_t>(factors_[i]);
  }
  return key;
}

Lattice gdegree_zero_lattice(const GDegreeMap& g) {
  std::size_t n = g.nvars(), l = g.factors().size();
  if (l == 0) return Lattice::full(n);
  IntMatrix B(l, IntVector(n + l, 0));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t p = 0; p < n; ++p) B[i][p] = g.var_degree(p)[i];
    B[i][n + i] = g.factors()[i];
  }
  IntMatrix gens;
  for (const auto& v : integer_kernel(B)) gens.emplace_back(v.begin(), v.begin() + n);
  return Lattice(gens);
}

}  // namespace relguess
