#include "relguess/tables.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace relguess {

FieldSpec FieldSpec::parse(const std::string& s) {
  FieldSpec f;
  if (s == "Q" || s == "q" || s == "QQ") {
    f.rational = true;
    return f;
  }
  try {
    std::size_t used = 0;
    f.prime = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("field must be a prime or Q, got '" + s + "'");
  }
  if (!is_prime_u64(f.prime) || f.prime >= (1ULL << 63))
    throw std::invalid_argument("field modulus " + s + " is not a prime below 2^63");
  return f;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_comment(std::string line) {
  auto h = line.find('#');
  if (h != std::string::npos) line.resize(h);
  return line;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

mpq_class parse_value(const std::string& tok) {
  mpq_class q;
  if (q.set_str(tok, 10) != 0) throw std::invalid_argument("bad table value '" + tok + "'");
  q.canonicalize();
  return q;
}

}  // namespace

TableFileData parse_table_text(const std::string& text) {
  TableFileData d;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    if (!header) {
      static const std::regex re(R"(^\s*dim\s+(\d+)\s*;\s*field\s+(\S+)\s*;\s*bounds\s+([\d\s]+)$)");
      std::smatch m;
      if (!std::regex_match(line, m, re)) throw std::invalid_argument("table header must read 'dim n; field p|Q; bounds b1 .. bn'");
      d.dim = std::stoul(m[1]);
      d.field = FieldSpec::parse(m[2]);
      std::istringstream bs(m[3].str());
      std::uint64_t b;
      while (bs >> b) d.bounds.push_back(static_cast<std::uint32_t>(b));
      if (d.dim == 0 || d.bounds.size() != d.dim) throw std::invalid_argument("table header: bounds do not match dim");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    Exponents idx(d.dim);
    for (std::size_t p = 0; p < d.dim; ++p) {
      long long v;
      if (!(ls >> v) || v < 0) throw std::invalid_argument("table line " + std::to_string(lineno) + ": bad index");
      if (static_cast<std::uint64_t>(v) > d.bounds[p])
        throw std::invalid_argument("table line " + std::to_string(lineno) + ": index beyond bounds");
      idx[p] = static_cast<std::uint32_t>(v);
    }
    std::string tok, extra;
    if (!(ls >> tok) || (ls >> extra)) throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected one value");
    d.entries[idx] = parse_value(tok);
  }
  if (!header) throw std::invalid_argument("table file is empty");
  return d;
}

TableFileData read_table_file(const std::string& path) { return parse_table_text(slurp(path)); }

std::string table_to_text(const TableFileData& d) {
  std::ostringstream out;
  out << "dim " << d.dim << "; field " << d.field.to_string() << "; bounds";
  for (auto b : d.bounds) out << ' ' << b;
  out << '\n';
  for (const auto& [i, v] : d.entries) {
    for (auto e : i) out << e << ' ';
    out << v.get_str() << '\n';
  }
  return out.str();
}

// ---- walks ----

std::size_t WalkSpec::table_dimension() const {
  return 1 + static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
}

WalkSpec WalkSpec::parse(const std::string& text) {
  static const std::regex dim_re(R"(dim\s+(\d+))");
  static const std::regex step_re(R"(\(([^)]*)\))");
  static const std::regex proj_re(R"(project\s*:\s*([01][01\s,]*))");
  WalkSpec w;
  std::smatch m;
  if (!std::regex_search(text, m, dim_re)) throw std::invalid_argument("walk spec needs 'dim k'");
  w.k = std::stoul(m[1]);
  if (w.k == 0) throw std::invalid_argument("walk dimension must be positive");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), step_re); it != std::sregex_iterator(); ++it) {
    std::string body = (*it)[1];
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream ss(body);
    std::vector<std::int64_t> s;
    std::int64_t v;
    while (ss >> v) s.push_back(v);
    if (s.size() != w.k) throw std::invalid_argument("walk step has wrong dimension");
    w.steps.push_back(s);
  }
  if (w.steps.empty()) throw std::invalid_argument("walk spec has no steps");
  if (std::regex_search(text, m, proj_re)) {
    for (char c : m[1].str())
      if (c == '0' || c == '1') w.keep.push_back(c == '1');
    if (w.keep.size() != w.k) throw std::invalid_argument("walk projection mask has wrong length");
  } else {
    w.keep.assign(w.k, true);
  }
  return w;
}

WalkSpec WalkSpec::preset(const std::string& name) {
  if (name == "king") return parse("dim 1; steps: (1); (-1); project: 1");
  if (name == "gessel") return parse("dim 2; steps: (1,0); (1,1); (-1,0); (-1,-1); project: 01");
  throw std::invalid_argument("unknown walk preset '" + name + "'");
}

WalkSpec WalkSpec::from_argument(const std::string& arg) {
  if (arg == "king" || arg == "gessel") return preset(arg);
  if (arg.find("steps") != std::string::npos) return parse(arg);
  return parse(slurp(arg));
}

std::string WalkSpec::to_string() const {
  std::ostringstream out;
  out << "dim " << k << "; steps:";
  for (std::size_t s = 0; s < steps.size(); ++s) {
    out << (s ? "; (" : " (");
    for (std::size_t c = 0; c < k; ++c) out << (c ? "," : "") << steps[s][c];
    out << ")";
  }
  out << "; project: ";
  for (bool b : keep) out << (b ? '1' : '0');
  return out.str();
}

WalkCounter::WalkCounter(WalkSpec spec) : spec_(std::move(spec)) {
  for (std::size_t c = 0; c < spec_.k; ++c)
    if (spec_.keep[c]) kept_.push_back(c);
  extent_.assign(spec_.k, 1);
  frontier_.assign(1, 1);
  projected_.emplace_back();
  projected_[0].emplace(Exponents(kept_.size(), 0), 1);
}

std::size_t WalkCounter::steps_computed() const {
  std::lock_guard lock(mu_);
  return projected_.size() - 1;
}

void WalkCounter::extend_to(std::size_t n) {
  const std::size_t k = spec_.k;
  std::vector<std::int64_t> up(k, 0);
  for (const auto& s : spec_.steps)
    for (std::size_t c = 0; c < k; ++c) up[c] = std::max(up[c], s[c]);

  while (projected_.size() <= n) {
    std::vector<std::size_t> next_extent(k);
    std::size_t total = 1;
    for (std::size_t c = 0; c < k; ++c) {
      next_extent[c] = extent_[c] + static_cast<std::size_t>(up[c]);
      total *= next_extent[c];
    }
    std::vector<mpz_class> next(total);
    std::vector<std::size_t> pos(k, 0);
    for (std::size_t flat = 0; flat < frontier_.size(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t c = 0; c < k; ++c) {
        pos[c] = rest % extent_[c];
        rest /= extent_[c];
      }
      const mpz_class& v = frontier_[flat];
      if (sgn(v) == 0) continue;
      for (const auto& s : spec_.steps) {
        std::size_t target = 0, radix = 1;
        bool ok = true;
        for (std::size_t c = 0; c < k; ++c) {
          std::int64_t q = static_cast<std::int64_t>(pos[c]) + s[c];
          if (q < 0) {
            ok = false;
            break;
          }
          target += static_cast<std::size_t>(q) * radix;
          radix *= next_extent[c];
        }
        if (ok) next[target] += v;
      }
    }
    frontier_ = std::move(next);
    extent_ = next_extent;

    std::unordered_map<Exponents, mpz_class, MonomialHash> proj;
    for (std::size_t flat = 0; flat < frontier_.size(); ++flat) {
      if (sgn(frontier_[flat]) == 0) continue;
      std::size_t rest = flat;
      bool on_face = true;
      Exponents key;
      for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = rest % extent_[c];
        rest /= extent_[c];
        if (spec_.keep[c])
          key.push_back(static_cast<std::uint32_t>(p));
        else if (p != 0)
          on_face = false;
      }
      if (on_face) proj.emplace(std::move(key), frontier_[flat]);
    }
    projected_.push_back(std::move(proj));
  }
}

mpz_class WalkCounter::count(const Exponents& index) {
  if (index.size() != spec_.table_dimension()) throw std::invalid_argument("walk table index has wrong dimension");
  std::lock_guard lock(mu_);
  extend_to(index[0]);
  Exponents key(index.begin() + 1, index.end());
  auto it = projected_[index[0]].find(key);
  return it == projected_[index[0]].end() ? mpz_class(0) : it->second;
}

}  // namespace relguess
