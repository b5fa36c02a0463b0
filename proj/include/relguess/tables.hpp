#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <gmpxx.h>

#include "relguess/field.hpp"
#include "relguess/monomial.hpp"
#include "relguess/polynomial.hpp"

namespace relguess {

// Memoized oracle i -> u_i. query() is safe for concurrent callers; query_count() is the number
// of distinct indices ever asked for.
template <class Field>
class TableSource {
 public:
  using Element = typename Field::Element;

  TableSource(Field F, std::size_t dim) : F_(std::move(F)), dim_(dim) {}
  virtual ~TableSource() = default;

  const Field& field() const { return F_; }
  std::size_t dimension() const { return dim_; }

  Element query(const Exponents& i) {
    if (i.size() != dim_) throw std::invalid_argument("table index has wrong dimension");
    {
      std::lock_guard lock(mu_);
      auto it = memo_.find(i);
      if (it != memo_.end()) return it->second;
    }
    Element v = compute(i);
    std::lock_guard lock(mu_);
    return memo_.emplace(i, v).first->second;
  }

  std::size_t query_count() const {
    std::lock_guard lock(mu_);
    return memo_.size();
  }

 protected:
  virtual Element compute(const Exponents& i) = 0;
  Field F_;

 private:
  std::size_t dim_;
  mutable std::mutex mu_;
  std::unordered_map<Exponents, Element, MonomialHash> memo_;
};

// Records the distinct indices one guessing run reads from a shared source.
template <class Field>
class TableView {
 public:
  using Element = typename Field::Element;

  explicit TableView(TableSource<Field>& src) : src_(&src) {}

  const Field& field() const { return src_->field(); }
  std::size_t dimension() const { return src_->dimension(); }
  Element query(const Exponents& i) {
    {
      std::lock_guard lock(mu_);
      seen_.insert(i);
    }
    return src_->query(i);
  }
  std::size_t distinct() const {
    std::lock_guard lock(mu_);
    return seen_.size();
  }

 private:
  TableSource<Field>* src_;
  mutable std::mutex mu_;
  std::unordered_set<Exponents, MonomialHash> seen_;
};

template <class Field>
class FunctionTable : public TableSource<Field> {
 public:
  using Element = typename Field::Element;
  using Fn = std::function<Element(const Exponents&)>;
  FunctionTable(Field F, std::size_t dim, Fn fn) : TableSource<Field>(std::move(F), dim), fn_(std::move(fn)) {}

 protected:
  Element compute(const Exponents& i) override { return fn_(i); }

 private:
  Fn fn_;
};

// ---- explicit tables from files ----

struct FieldSpec {
  bool rational = false;
  std::uint64_t prime = 0;
  std::string to_string() const { return rational ? "Q" : std::to_string(prime); }
  static FieldSpec parse(const std::string& s);
};

struct TableFileData {
  std::size_t dim = 0;
  FieldSpec field;
  Exponents bounds;  // inclusive maxima
  std::map<Exponents, mpq_class> entries;
};

TableFileData read_table_file(const std::string& path);
TableFileData parse_table_text(const std::string& text);
std::string table_to_text(const TableFileData& data);

template <class Field>
class ExplicitTable : public TableSource<Field> {
 public:
  using Element = typename Field::Element;

  ExplicitTable(Field F, const TableFileData& data) : TableSource<Field>(F, data.dim), bounds_(data.bounds) {
    for (const auto& [i, v] : data.entries) values_.emplace(i, F.from_rational(v));
  }

 protected:
  Element compute(const Exponents& i) override {
    for (std::size_t p = 0; p < i.size(); ++p)
      if (i[p] > bounds_[p]) throw std::out_of_range("table query outside the stored bounds");
    auto it = values_.find(i);
    if (it == values_.end()) throw std::out_of_range("table has no value at the requested index");
    return it->second;
  }

 private:
  Exponents bounds_;
  std::unordered_map<Exponents, Element, MonomialHash> values_;
};

// ---- lattice walks in N^k ----

struct WalkSpec {
  std::size_t k = 0;
  std::vector<std::vector<std::int64_t>> steps;
  std::vector<bool> keep;  // coordinates kept as table indices; the others are fixed to 0

  std::size_t table_dimension() const;
  static WalkSpec parse(const std::string& text);
  static WalkSpec preset(const std::string& name);  // "king", "gessel"
  static WalkSpec from_argument(const std::string& arg);  // preset name, inline spec or file
  std::string to_string() const;
};

// Integer walk counts from the origin, extended lazily by a frontier DP. Table index is
// (n, kept coordinates).
class WalkCounter {
 public:
  explicit WalkCounter(WalkSpec spec);
  const WalkSpec& spec() const { return spec_; }
  mpz_class count(const Exponents& index);
  std::size_t steps_computed() const;

 private:
  void extend_to(std::size_t n);

  WalkSpec spec_;
  mutable std::mutex mu_;
  std::vector<std::size_t> kept_;
  std::vector<std::int64_t> fixed_;  // coordinates fixed to 0
  std::vector<std::size_t> extent_;  // current frontier box
  std::vector<mpz_class> frontier_;
  std::vector<std::unordered_map<Exponents, mpz_class, MonomialHash>> projected_;
};

template <class Field>
class WalkTable : public TableSource<Field> {
 public:
  using Element = typename Field::Element;
  WalkTable(Field F, std::shared_ptr<WalkCounter> counter)
      : TableSource<Field>(std::move(F), counter->spec().table_dimension()), counter_(std::move(counter)) {}

 protected:
  Element compute(const Exponents& i) override { return this->F_.from_integer(counter_->count(i)); }

 private:
  std::shared_ptr<WalkCounter> counter_;
};

// ---- brackets ----

// i^k with 0^0 = 1
template <class Field>
typename Field::Element monomial_weight(const Field& F, const Monomial& m) {
  auto w = F.one();
  for (std::size_t p = 0; p < m.t.size(); ++p)
    if (m.t[p] != 0) w = F.mul(w, F.pow(F.from_int(m.x[p]), m.t[p]));
  return w;
}

// [t^k x^i]_u = i^k u_i
template <class Field, class Source>
typename Field::Element bracket_monomial(Source& u, const Monomial& m) {
  const Field& F = u.field();
  auto w = monomial_weight(F, m);
  if (F.is_zero(w)) return F.zero();
  return F.mul(w, u.query(m.x));
}

template <class Field, class Source>
typename Field::Element bracket(Source& u, const SkewPolynomial<Field>& p) {
  const Field& F = u.field();
  auto acc = F.zero();
  for (const auto& [m, c] : p.terms) acc = F.add(acc, F.mul(c, bracket_monomial<Field>(u, m)));
  return acc;
}

// [p * x^s]_u; right multiplication by a pure x-monomial keeps normal form
template <class Field, class Source>
typename Field::Element shifted_bracket(Source& u, const SkewPolynomial<Field>& p, const Exponents& s) {
  const Field& F = u.field();
  auto acc = F.zero();
  for (const auto& [m, c] : p.terms) {
    Monomial shifted(add_exponents(m.x, s), m.t);
    acc = F.add(acc, F.mul(c, bracket_monomial<Field>(u, shifted)));
  }
  return acc;
}

}  // namespace relguess
