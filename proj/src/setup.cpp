#include "bgjt/setup.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

#include "bgjt/error.hpp"
#include "bgjt/parallel.hpp"

namespace bgjt {

Poly ring_polynomial(const FieldTower& F, const Poly& h0, const Poly& h1) {
  PolyRing R(F);
  std::vector<Fq2Elt> xq(F.q() + 1);
  xq.back() = FieldTower::one();
  return R.sub(R.mul(Poly(std::move(xq)), h1), h0);
}

namespace {

std::optional<SetupInstance> try_make_setup(const FieldTower& F, const Poly& h0, const Poly& h1) {
  PolyRing R(F);
  if (!h1.is_monic() || h1.degree() > 1 || h0.degree() > 2) return std::nullopt;
  if (h0.is_zero() || !R.gcd(h0, h1).is_one()) return std::nullopt;
  SetupInstance s;
  s.h0 = h0;
  s.h1 = h1;
  s.ring_poly = ring_polynomial(F, h0, h1);
  if (s.ring_poly.degree() < 1) return std::nullopt;
  const Factorization fac = factorize(F, s.ring_poly);
  s.unit = fac.unit;
  bool have_f = false;
  for (const auto& [g, e] : fac.factors) {
    if (!have_f && e == 1 && g.degree() == static_cast<int>(F.k())) {
      s.f = g;
      have_f = true;
      continue;
    }
    s.cofactors.push_back({g, e, static_cast<unsigned>(g.degree())});
  }
  if (!have_f) return std::nullopt;
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Cofactor degree r can be written as a sum of allowed irreducible degrees.
bool degree_class_feasible(unsigned r, unsigned k, const SetupConstraints& c) {
  std::vector<bool> reach(r + 1, false);
  reach[0] = true;
  for (unsigned d = 1; d <= r; ++d) {
    if (c.require_no_linear_cofactor && d == 1) continue;
    if (c.require_gcd_one && std::gcd(d, k) != 1) continue;
    for (unsigned s = d; s <= r; ++s) reach[s] = reach[s] || reach[s - d];
  }
  return reach[r];
}

struct Enumeration {
  const FieldTower& F;
  std::uint64_t rotation;

  std::uint64_t per_class() const {
    const std::uint64_t Q = F.field_size();
    return Q * Q * Q;
  }
  unsigned classes() const { return F.field_size() + 1; }

  Poly h1(unsigned cls) const {
    if (cls < F.field_size()) return Poly::linear(F.element(cls));
    return Poly::constant(FieldTower::one());
  }

  Poly h0(std::uint64_t i) const {
    const std::uint64_t Q = F.field_size();
    const std::uint64_t size_quad = Q * Q * (Q - 1);
    std::uint64_t c0, c1, c2;
    if (i < size_quad) {
      const std::uint64_t j = (i + rotation) % size_quad;
      c0 = j % Q;
      c1 = (j / Q) % Q;
      c2 = 1 + j / (Q * Q);
    } else {
      const std::uint64_t j = (i - size_quad + rotation) % (Q * Q);
      c0 = j % Q;
      c1 = j / Q;
      c2 = 0;
    }
    return Poly({F.element(static_cast<unsigned>(c0)), F.element(static_cast<unsigned>(c1)),
                 F.element(static_cast<unsigned>(c2))});
  }
};

unsigned violations(const FieldTower& F, const SetupInstance& s, const SetupConstraints& c) {
  unsigned v = 0;
  for (const auto& cf : s.cofactors) {
    if (c.require_no_linear_cofactor && cf.degree == 1) ++v;
    if (c.require_gcd_one && std::gcd(cf.degree, F.k()) != 1) ++v;
  }
  if (c.require_nonkummer && is_kummer(F, s)) ++v;
  return v;
}

std::string pattern(const SetupInstance& s) {
  std::ostringstream os;
  os << "[" << s.f.degree();
  for (const auto& cf : s.cofactors) {
    os << "," << cf.degree;
    if (cf.mult > 1) os << "^" << cf.mult;
  }
  os << "]";
  return os.str();
}

}  // namespace

SetupInstance make_setup(const FieldTower& F, const Poly& h0, const Poly& h1) {
  auto s = try_make_setup(F, h0, h1);
  if (!s) {
    throw Error(ErrorKind::InvalidArgument,
                "(h0, h1) does not give a degree-k factor of multiplicity one with gcd(h0,h1)=1");
  }
  return *s;
}

bool is_kummer(const FieldTower& F, const SetupInstance& setup) {
  PolyRing R(F);
  if (setup.h1.is_one() && setup.h0.degree() == 1 && setup.h0.coeff(0).index == 0) return true;
  if (setup.f.degree() < 2) return false;
  const Poly r = R.powmod(Poly::x(), F.q() - 1, setup.f);
  return r.degree() <= 0;
}

bool satisfies(const FieldTower& F, const SetupInstance& setup, const SetupConstraints& c) {
  return violations(F, setup, c) == 0;
}

std::uint64_t default_budget(const FieldTower& F) {
  const std::uint64_t Q = F.field_size();
  return (Q + 1) * Q * Q * Q;
}

SetupInstance search_setup(const FieldTower& F, const SetupConstraints& constraints,
                           std::uint64_t budget, unsigned jobs) {
  if (F.k() >= F.q() && !F.structural()) throw Error(ErrorKind::RegimeViolation, "need k < q");
  if (budget == 0) throw Error(ErrorKind::InvalidArgument, "budget must be at least 1");
  const Enumeration en{F, F.seed() == 0 ? 0 : splitmix64(F.seed())};
  std::uint64_t tried = 0;
  std::optional<SetupInstance> closest;
  unsigned closest_violations = ~0u;

  for (unsigned cls = 0; cls < en.classes() && tried < budget; ++cls) {
    const Poly h1 = en.h1(cls);
    const unsigned ring_degree = F.q() + static_cast<unsigned>(h1.degree());
    if (ring_degree < F.k() || !degree_class_feasible(ring_degree - F.k(), F.k(), constraints)) {
      continue;
    }
    const std::uint64_t chunk = 256ull * std::max(1u, jobs);
    for (std::uint64_t base = 0; base < en.per_class() && tried < budget; base += chunk) {
      const std::uint64_t count = std::min({chunk, en.per_class() - base, budget - tried});
      auto results = parallel_map<std::optional<SetupInstance>>(
          count, jobs, [&](std::size_t i) { return try_make_setup(F, en.h0(base + i), h1); });
      for (std::uint64_t i = 0; i < count; ++i) {
        ++tried;
        auto& cand = results[i];
        if (!cand) continue;
        const unsigned v = violations(F, *cand, constraints);
        if (v == 0) {
          cand->constraints = constraints;
          cand->tried = tried;
          return *cand;
        }
        if (v < closest_violations) {
          closest_violations = v;
          closest = cand;
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "no valid (h0, h1) within budget; tried " << tried;
  if (closest) msg << "; closest miss pattern " << pattern(*closest);
  throw Error(ErrorKind::SearchExhausted, msg.str());
}

std::optional<SetupInstance> find_setup(const FieldTower& F,
                                        const std::function<bool(const SetupInstance&)>& pred,
                                        std::uint64_t budget, unsigned jobs) {
  const Enumeration en{F, F.seed() == 0 ? 0 : splitmix64(F.seed())};
  std::uint64_t tried = 0;
  for (unsigned cls = 0; cls < en.classes() && tried < budget; ++cls) {
    const Poly h1 = en.h1(cls);
    const std::uint64_t chunk = 256ull * std::max(1u, jobs);
    for (std::uint64_t base = 0; base < en.per_class() && tried < budget; base += chunk) {
      const std::uint64_t count = std::min({chunk, en.per_class() - base, budget - tried});
      auto results = parallel_map<std::optional<SetupInstance>>(
          count, jobs, [&](std::size_t i) -> std::optional<SetupInstance> {
            auto cand = try_make_setup(F, en.h0(base + i), h1);
            if (cand && !pred(*cand)) return std::nullopt;
            return cand;
          });
      for (std::uint64_t i = 0; i < count; ++i) {
        ++tried;
        if (results[i]) {
          results[i]->tried = tried;
          return results[i];
        }
      }
    }
  }
  return std::nullopt;
}

std::uint64_t count_valid_setups(const FieldTower& F, const SetupConstraints& constraints,
                                 unsigned jobs) {
  const Enumeration en{F, 0};
  std::uint64_t total = 0;
  for (unsigned cls = 0; cls < en.classes(); ++cls) {
    const Poly h1 = en.h1(cls);
    auto ok = parallel_map<char>(en.per_class(), jobs, [&](std::size_t i) -> char {
      auto cand = try_make_setup(F, en.h0(i), h1);
      return cand && violations(F, *cand, constraints) == 0;
    });
    total += static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
  }
  return total;
}

SetupReport classify_setup(const FieldTower& F, const SetupInstance& setup) {
  PolyRing R(F);
  SetupReport report;
  report.kummer = is_kummer(F, setup);
  for (const auto& cf : setup.cofactors) {
    if (cf.degree == 1) report.linear_traps.push_back(cf.poly);
    report.cofactors.push_back({cf.degree, cf.mult, std::gcd(cf.degree, F.k())});
  }
  // Divisors built from the cofactors only: anything containing f has
  // degree >= k.
  std::vector<std::pair<Poly, unsigned>> acc{{Poly::constant(FieldTower::one()), 0}};
  for (const auto& cf : setup.cofactors) {
    std::vector<std::pair<Poly, unsigned>> next;
    for (const auto& [d, deg] : acc) {
      Poly cur = d;
      for (unsigned e = 0; e <= cf.mult; ++e) {
        const unsigned nd = deg + e * cf.degree;
        if (nd >= F.k()) break;
        next.emplace_back(cur, nd);
        cur = R.mul(cur, cf.poly);
      }
    }
    acc = std::move(next);
  }
  for (auto& [d, deg] : acc) {
    if (deg >= 1) report.trap_divisors.push_back(std::move(d));
  }
  std::sort(report.trap_divisors.begin(), report.trap_divisors.end());
  return report;
}

}  // namespace bgjt
