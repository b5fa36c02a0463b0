#pragma once

#include <cstdint>
#include <optional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "relguess/monomial.hpp"

namespace relguess {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;  // row-major, rows are generators

// In-place row Hermite reduction on the first `pivot_cols` columns. Returns the rank; rows past
// the rank are zero on those columns. Pivots are positive and entries above them reduced.
std::size_t hermite_rows(IntMatrix& rows, std::size_t pivot_cols);
IntMatrix hermite_normal_form(IntMatrix rows);  // zero rows dropped
IntMatrix integer_kernel(const IntMatrix& B);   // Z-basis of {v : B v = 0}

// Finitely generated cone C = sum N g_i inside N^n.
class Cone {
 public:
  explicit Cone(std::vector<Exponents> generators);
  Cone(const Cone& o) : gens_(o.gens_) {}
  Cone& operator=(const Cone& o) {
    gens_ = o.gens_;
    std::unique_lock lock(mu_);
    memo_.clear();
    return *this;
  }

  std::size_t dimension() const { return gens_.front().size(); }
  const std::vector<Exponents>& generators() const { return gens_; }

  // memoized; safe for concurrent callers
  bool contains(const Exponents& v) const;
  // cone-divisibility: b.x - a.x in C, t-parts componentwise
  bool divides(const Monomial& a, const Monomial& b) const;

 private:
  std::vector<Exponents> gens_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Exponents, bool, MonomialHash> memo_;
};

class Lattice {
 public:
  // basis rows must have full rank; domain, if given, must hold one representative in N^n per coset
  Lattice(IntMatrix basis, std::optional<std::vector<Exponents>> domain = std::nullopt);
  static Lattice full(std::size_t n);

  std::size_t dimension() const { return hnf_.size(); }
  std::size_t index() const { return domain_.size(); }
  const IntMatrix& hnf() const { return hnf_; }
  const std::vector<Exponents>& domain() const { return domain_; }

  bool contains(const IntVector& v) const;
  std::size_t coset_index(const Exponents& i) const;
  const Exponents& coset(const Exponents& i) const { return domain_[coset_index(i)]; }

 private:
  IntVector reduce(IntVector v) const;
  std::size_t key_index(const IntVector& reduced) const;

  IntMatrix hnf_;
  std::vector<Exponents> domain_;
  std::vector<std::size_t> key_to_domain_;  // mixed-radix residue key -> domain position
};

// Degrees in G = Z/q_1 x ... x Z/q_l (q_1 | q_2 | ...). An empty factor list is the trivial group.
class GDegreeMap {
 public:
  using Degree = std::vector<std::int64_t>;

  GDegreeMap(std::vector<std::int64_t> factors, std::vector<Degree> var_degrees);
  static GDegreeMap trivial(std::size_t n) { return GDegreeMap({}, std::vector<Degree>(n)); }
  static GDegreeMap cyclic(std::int64_t q, std::vector<std::int64_t> degs);

  std::size_t nvars() const { return degrees_.size(); }
  const std::vector<std::int64_t>& factors() const { return factors_; }
  const Degree& var_degree(std::size_t p) const { return degrees_[p]; }
  std::size_t group_order() const;

  Degree zero() const { return Degree(factors_.size(), 0); }
  Degree gdegree(const Exponents& x) const;
  Degree add(const Degree& a, const Degree& b) const;
  Degree scale(const Degree& a, std::int64_t k) const;
  bool is_zero(const Degree& a) const;
  std::size_t index_of(const Degree& a) const;  // mixed radix position in [0, |G|)

 private:
  std::vector<std::int64_t> factors_;
  std::vector<Degree> degrees_;
};

// {i in Z^n : gdegree(x^i) = 0} with its canonical fundamental domain
Lattice gdegree_zero_lattice(const GDegreeMap& g);

}  // namespace relguess
