#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relguess/guess.hpp"
#include "relguess/structures.hpp"
#include "relguess/tables.hpp"

namespace relguess {

// Table-1 style run: P-relations of a projected walk table restricted to one region of indices.
enum class Region { Cone, HalfOrthant, FullOrthant };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Cone:
      return "cone";
    case Region::HalfOrthant:
      return "half-orthant";
    default:
      return "full-orthant";
  }
}

struct RegionShape {
  std::size_t rows = 0, cols = 0;
  std::uint32_t tdeg = 2;
  std::size_t verify = 400;  // region shifts beyond the rows used to classify relations
};

template <class Field>
struct RegionRun {
  Region region = Region::Cone;
  RegionShape shape;
  GuessReport<Field> report;
  double seconds = 0;
};

// Regions of the 2D table (n, j): nonzero cone (2,0)N + (2,1)N, even n, or all of N^2.
inline std::optional<Cone> region_cone(Region r) {
  switch (r) {
    case Region::Cone:
      return Cone({{2, 0}, {2, 1}});
    case Region::HalfOrthant:
      return Cone({{2, 0}, {0, 1}});
    default:
      return std::nullopt;
  }
}

template <class Field>
RegionRun<Field> run_region(TableSource<Field>& src, Region region, const RegionShape& shape, Exec exec = Exec::Parallel) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t n = src.dimension();
  MonomialOrder order = MonomialOrder::drl(n);
  auto cone = region_cone(region);
  GuessOptions opts;
  opts.cone = cone ? &*cone : nullptr;
  opts.exec = exec;
  ExponentFilter filter;
  if (cone) filter = [&](const Exponents& e) { return cone->contains(e); };

  EnumerationBound rb;
  rb.max_count = shape.rows + shape.verify;
  auto all_rows = enumerate_monomials(order, filter, rb);
  std::vector<Monomial> X(all_rows.begin(), all_rows.begin() + std::min(shape.rows, all_rows.size()));
  std::vector<Monomial> shifts(all_rows.begin() + X.size(), all_rows.end());
  EnumerationBound cb;
  cb.max_count = shape.cols;
  auto T = enumerate_mixed(order, filter, shape.tdeg, cb);

  RegionRun<Field> run;
  run.region = region;
  run.shape = shape;
  run.report = guess_prels(src, order, X, T, opts);
  classify_relations(src, run.report, shifts);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace relguess
