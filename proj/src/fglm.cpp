#include "relguess/fglm.hpp"

#include "relguess/formats.hpp"

namespace relguess {

GBFileHeader parse_gb_text(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("GB file is empty");
  std::istringstream hs(lines[0]);
  std::string w1, kind, w2, vars;
  if (!(hs >> w1 >> kind >> w2 >> vars) || w1 != "order" || w2 != "vars")
    throw std::invalid_argument("GB file must start with 'order <lex|drl> vars a,b,...'");
  GBFileHeader h;
  auto names = split_names(vars);
  h.names = VariableNames::from_x(names);
  h.order = parse_order(kind, names.size());
  std::size_t first = 1;
  if (lines.size() > 1 && lines[1].rfind("field", 0) == 0) {
    h.field = lines[1].substr(5);
    auto a = h.field->find_first_not_of(' ');
    h.field = a == std::string::npos ? std::string() : h.field->substr(a);
    first = 2;
  }
  for (std::size_t i = first; i < lines.size(); ++i) h.polys.push_back(lines[i]);
  return h;
}

Deltas compute_deltas(const GDegreeMap& g, std::uint64_t D) {
  std::size_t n = g.nvars();
  if (n == 0) throw std::invalid_argument("no variables");
  const auto& dn = g.var_degree(n - 1);
  Deltas out;
  std::size_t order = g.group_order();
  // minimal d with d * deg(x_n) = 0
  out.d = 0;
  for (std::uint64_t e = 1; e <= order; ++e)
    if (g.is_zero(g.scale(dn, static_cast<std::int64_t>(e)))) {
      out.d = e;
      break;
    }
  if (out.d == 0) throw std::logic_error("degree of x_n has no finite order");
  auto match = [&](const GDegreeMap::Degree& want) -> std::optional<std::uint64_t> {
    for (std::uint64_t e = 0; e < out.d; ++e)
      if (g.scale(dn, static_cast<std::int64_t>(e)) == want) return e;
    return std::nullopt;
  };
  out.delta.assign(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto e = match(g.add(g.var_degree(i), g.zero()));
    if (!e) throw std::invalid_argument("no power of x_n has the G-degree of x" + std::to_string(i + 1));
    out.delta[i] = *e;
  }
  out.delta[n - 1] = D % out.d;
  return out;
}

}  // namespace relguess
