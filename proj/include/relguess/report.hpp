#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "relguess/experiments.hpp"
#include "relguess/fglm.hpp"
#include "relguess/guess.hpp"

namespace relguess {

using Json = nlohmann::ordered_json;

inline Json exponents_json(const Exponents& e) { return Json(std::vector<std::uint32_t>(e.begin(), e.end())); }

template <class Field>
Json matrix_json(const Field& F, const DenseMatrix<Field>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) r.push_back(F.to_string(m.at(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline Json monomials_json(const std::vector<Monomial>& v, const VariableNames& names) {
  Json a = Json::array();
  for (const auto& m : v) a.push_back(monomial_to_string(m, names));
  return a;
}

template <class Field>
Json guess_report_json(const Field& F, const GuessReport<Field>& r, const MonomialOrder& order, const VariableNames& names) {
  Json j;
  j["order"] = order.describe(names.x);
  j["field"] = F.name();
  j["matrix"] = {{"rows", r.matrix_rows}, {"cols", r.matrix_cols}};
  j["queries"] = r.query_count;
  j["staircase"] = monomials_json(r.staircase, names);
  Json rels = Json::array();
  for (const auto& rel : r.relations) {
    Json x;
    x["lm"] = monomial_to_string(rel.lm, names);
    x["poly"] = polynomial_to_string(F, rel.poly, order, names);
    x["status"] = status_name(rel.status);
    x["coset"] = rel.coset;
    rels.push_back(x);
  }
  j["relations"] = rels;
  j["fake"] = r.fake;
  j["correct"] = r.correct;
  if (!r.cosets.empty()) {
    Json cs = Json::array();
    for (const auto& c : r.cosets) {
      Json x;
      x["representative"] = exponents_json(c.representative);
      x["labels"] = monomials_json(c.labels, names);
      x["matrix"] = matrix_json(F, c.matrix);
      x["profile"] = monomials_json(c.profile, names);
      cs.push_back(x);
    }
    j["cosets"] = cs;
  }
  if (!r.trace.empty()) {
    Json ts = Json::array();
    for (const auto& s : r.trace) {
      Json x;
      x["coset"] = s.coset;
      x["candidate"] = monomial_to_string(s.candidate, names);
      x["labels"] = monomials_json(s.labels, names);
      x["matrix"] = matrix_json(F, s.matrix);
      x["full_rank"] = s.extended;
      if (s.relation) x["relation"] = polynomial_to_string(F, *s.relation, order, names);
      ts.push_back(x);
    }
    j["trace"] = ts;
  }
  return j;
}

template <class Field>
Json region_run_json(const Field& F, const RegionRun<Field>& run, const VariableNames& names, bool with_relations) {
  Json j;
  j["region"] = region_name(run.region);
  j["matrix"] = std::to_string(run.report.matrix_rows) + "x" + std::to_string(run.report.matrix_cols);
  j["queries"] = run.report.query_count;
  j["fake"] = run.report.fake;
  j["correct"] = run.report.correct;
  j["rank"] = run.report.staircase.size();
  j["tdeg"] = run.shape.tdeg;
  j["verify_shifts"] = run.shape.verify;
  if (with_relations) {
    Json rels = Json::array();
    MonomialOrder order = MonomialOrder::drl(names.x.size());
    for (const auto& rel : run.report.relations)
      rels.push_back({{"status", status_name(rel.status)}, {"poly", polynomial_to_string(F, rel.poly, order, names)}});
    j["relations"] = rels;
  }
  return j;
}

template <class Field>
Json shape_basis_json(const Field& F, const ShapeLexBasis<Field>& b, const VariableNames& names) {
  Json j;
  j["dimension"] = b.D;
  j["d"] = b.deltas.d;
  j["delta"] = b.deltas.delta;
  MonomialOrder lex = MonomialOrder::lex(b.nvars);
  Json polys = Json::array();
  for (const auto& p : b.polynomials(F)) polys.push_back(polynomial_to_string(F, p, lex, names));
  j["basis"] = polys;
  j["distinct_reads"] = b.distinct_reads;
  j["retries"] = b.retries;
  return j;
}

}  // namespace relguess
