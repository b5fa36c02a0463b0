#include "relguess/formats.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relguess {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> content_lines(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    auto b = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(a, b - a + 1));
  }
  return out;
}

MonomialOrder parse_order(const std::string& kind, std::size_t nvars) {
  std::vector<std::size_t> perm(nvars);
  for (std::size_t i = 0; i < nvars; ++i) perm[i] = i;
  if (kind == "lex") return MonomialOrder(OrderKind::Lex, perm);
  if (kind == "drl" || kind == "grevlex") return MonomialOrder(OrderKind::DegRevLex, perm);
  throw std::invalid_argument("unknown order '" + kind + "' (expected lex or drl)");
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (cur.empty()) throw std::invalid_argument("empty variable name in '" + csv + "'");
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

static std::vector<std::int64_t> parse_ints(std::string line) {
  for (char& c : line)
    if (c == ',' || c == '(' || c == ')') c = ' ';
  std::istringstream in(line);
  std::vector<std::int64_t> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long x;
    try {
      x = std::stoll(tok, &used);
    } catch (...) {
      throw std::invalid_argument("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("expected an integer, got '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

Cone parse_cone_text(const std::string& text) {
  std::vector<Exponents> gens;
  for (const auto& l : content_lines(text)) {
    auto v = parse_ints(l);
    Exponents e;
    for (auto x : v) {
      if (x < 0) throw std::invalid_argument("cone generators must be nonnegative");
      e.push_back(static_cast<std::uint32_t>(x));
    }
    if (!gens.empty() && e.size() != gens[0].size()) throw std::invalid_argument("cone generators differ in length");
    gens.push_back(e);
  }
  if (gens.empty()) throw std::invalid_argument("cone file has no generators");
  return Cone(gens);
}

Lattice parse_lattice_text(const std::string& text) {
  IntMatrix basis;
  std::optional<std::vector<Exponents>> domain;
  for (const auto& l : content_lines(text)) {
    if (l == "domain") {
      domain.emplace();
      continue;
    }
    auto v = parse_ints(l);
    if (domain) {
      Exponents e;
      for (auto x : v) {
        if (x < 0) throw std::invalid_argument("domain representatives must be nonnegative");
        e.push_back(static_cast<std::uint32_t>(x));
      }
      domain->push_back(e);
    } else {
      basis.push_back(v);
    }
  }
  if (basis.empty()) throw std::invalid_argument("lattice file has no basis rows");
  return Lattice(basis, domain);
}

GDegreeMap parse_gdeg_text(const std::string& text, std::size_t nvars) {
  auto lines = content_lines(text);
  if (lines.empty() || lines[0].rfind("factors", 0) != 0) throw std::invalid_argument("gdeg file must start with 'factors'");
  auto factors = parse_ints(lines[0].substr(7));
  std::vector<GDegreeMap::Degree> degs;
  for (std::size_t i = 1; i < lines.size(); ++i) degs.push_back(parse_ints(lines[i]));
  if (degs.size() != nvars)
    throw std::invalid_argument("gdeg file gives " + std::to_string(degs.size()) + " variable degrees, expected " + std::to_string(nvars));
  return GDegreeMap(factors, degs);
}

static std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string cone_to_text(const Cone& c) {
  std::string s;
  for (const auto& g : c.generators()) s += join(std::vector<std::int64_t>(g.begin(), g.end())) + "\n";
  return s;
}

std::string lattice_to_text(const Lattice& l) {
  std::string s;
  for (const auto& r : l.hnf()) s += join(r) + "\n";
  s += "domain\n";
  for (const auto& d : l.domain()) s += join(std::vector<std::int64_t>(d.begin(), d.end())) + "\n";
  return s;
}

std::string gdeg_to_text(const GDegreeMap& g) {
  std::string s = "factors " + join(g.factors()) + "\n";
  for (std::size_t p = 0; p < g.nvars(); ++p) s += join(g.var_degree(p)) + "\n";
  return s;
}

}  // namespace relguess
