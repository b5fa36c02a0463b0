#include "relguess/skew.hpp"

#include <functional>

namespace relguess {

std::vector<Monomial> monomial_lcms(const Monomial& a, const Monomial& b, const Cone* cone, std::uint64_t max_degree) {
  std::size_t n = a.nvars();
  Monomial base(n);
  for (std::size_t p = 0; p < n; ++p) {
    base.x[p] = std::max(a.x[p], b.x[p]);
    base.t[p] = std::max(a.t[p], b.t[p]);
  }
  if (!cone) return {base};

  auto ok = [&](const Exponents& c) {
    Exponents da(n), db(n);
    for (std::size_t p = 0; p < n; ++p) {
      da[p] = c[p] - a.x[p];
      db[p] = c[p] - b.x[p];
    }
    return cone->contains(da) && cone->contains(db);
  };
  std::vector<Exponents> found;
  std::uint64_t start = base.degree();
  if (start > max_degree) return {};
  std::uint64_t budget = max_degree - start;
  // offsets by increasing total degree; anything dominating an earlier hit inside C is not minimal
  Exponents d(n, 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t p, std::uint64_t left) {
    if (p + 1 == n) {
      d[p] = static_cast<std::uint32_t>(left);
      Exponents c(n);
      for (std::size_t q = 0; q < n; ++q) c[q] = base.x[q] + d[q];
      if (!ok(c)) return;
      for (const auto& f : found) {
        Exponents diff(n);
        bool ge = true;
        for (std::size_t q = 0; q < n; ++q) {
          if (c[q] < f[q]) {
            ge = false;
            break;
          }
          diff[q] = c[q] - f[q];
        }
        if (ge && cone->contains(diff)) return;
      }
      found.push_back(c);
      return;
    }
    for (std::uint64_t e = 0; e <= left; ++e) {
      d[p] = static_cast<std::uint32_t>(e);
      rec(p + 1, left - e);
    }
  };
  for (std::uint64_t k = 0; k <= budget; ++k) rec(0, k);
  std::vector<Monomial> out;
  for (auto& c : found) out.emplace_back(std::move(c), base.t);
  return out;
}

}  // namespace relguess
