#include "bgjt/factor.hpp"

#include <algorithm>
#include <random>

#include "bgjt/error.hpp"

namespace bgjt {
namespace {

using Part = std::pair<Poly, unsigned>;

// f has only exponents divisible by p; returns g with g(x)^p = f(x).
Poly poly_pth_root(const FieldTower& F, const Poly& f) {
  const std::size_t p = F.p();
  std::vector<Fq2Elt> out(f.coeffs().size() / p + 1);
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) out[i / p] = F.pth_root(f.coeff(i));
  return Poly(std::move(out));
}

// Squarefree decomposition of a monic polynomial: pairs (g, m) with g
// squarefree, pairwise coprime, f = prod g^m.
void squarefree(const PolyRing& R, const Poly& f, unsigned mult, std::vector<Part>& out) {
  if (f.degree() < 1) return;
  const FieldTower& F = R.field();
  const Poly df = R.derivative(f);
  if (df.is_zero()) {
    squarefree(R, poly_pth_root(F, f), mult * static_cast<unsigned>(F.p()), out);
    return;
  }
  Poly c = R.gcd(f, df);
  Poly w = R.quo(f, c);
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = R.gcd(w, c);
    Poly z = R.quo(w, y);
    if (z.degree() > 0) out.emplace_back(R.monic(z), i * mult);
    ++i;
    w = std::move(y);
    c = R.quo(c, w);
  }
  if (c.degree() > 0) {
    squarefree(R, poly_pth_root(F, R.monic(c)), mult * static_cast<unsigned>(F.p()), out);
  }
}

// Distinct-degree factorization of a monic squarefree f, considering only
// degrees <= max_deg. Returns products of all irreducible factors of each
// degree, and whatever remains (factors of degree > max_deg).
std::pair<std::vector<Part>, Poly> distinct_degree(const PolyRing& R, Poly f, unsigned max_deg) {
  std::vector<Part> out;
  const Poly x = Poly::x();
  const std::uint64_t Q = R.field().field_size();
  Poly h = R.rem(x, f);
  for (unsigned d = 1; d <= max_deg && f.degree() > 0; ++d) {
    if (static_cast<unsigned>(f.degree()) < 2 * d) {
      // Remaining factor is irreducible.
      if (static_cast<unsigned>(f.degree()) <= max_deg) {
        out.emplace_back(f, static_cast<unsigned>(f.degree()));
        f = Poly::constant(FieldTower::one());
      }
      break;
    }
    h = R.powmod(h, Q, f);
    Poly g = R.gcd(R.sub(h, x), f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = R.quo(f, g);
      h = R.rem(h, f);
    }
  }
  return {std::move(out), std::move(f)};
}

void equal_degree(const PolyRing& R, const Poly& g, unsigned d, std::mt19937_64& rng,
                  std::vector<Poly>& out) {
  if (static_cast<unsigned>(g.degree()) == d) {
    out.push_back(g);
    return;
  }
  const FieldTower& F = R.field();
  const std::uint64_t Q = F.field_size();
  std::uniform_int_distribution<unsigned> coeff(0, static_cast<unsigned>(Q - 1));
  for (;;) {
    std::vector<Fq2Elt> rc(static_cast<std::size_t>(g.degree()));
    for (auto& c : rc) c = F.element(coeff(rng));
    Poly a(std::move(rc));
    if (a.degree() < 1) continue;
    Poly b;
    if (F.p() == 2) {
      // Absolute trace to F_2 of the degree-d residue ring.
      const unsigned bits = static_cast<unsigned>(d) * 2 * F.n();
      Poly t = a, acc = a;
      for (unsigned i = 1; i < bits; ++i) {
        t = R.mulmod(t, t, g);
        acc = R.add(acc, t);
      }
      b = acc;
    } else {
      // a^((Q^d - 1)/2) = (prod_{i<d} a^(Q^i))^((Q - 1)/2)
      Poly t = a, acc = a;
      for (unsigned i = 1; i < d; ++i) {
        t = R.powmod(t, Q, g);
        acc = R.mulmod(acc, t, g);
      }
      b = R.sub(R.powmod(acc, (Q - 1) / 2, g), Poly::constant(FieldTower::one()));
    }
    if (b.is_zero()) continue;
    Poly h = R.gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(R, h, d, rng, out);
      equal_degree(R, R.quo(g, h), d, rng, out);
      return;
    }
  }
}

std::optional<Factorization> factor_impl(const FieldTower& F, const Poly& poly,
                                         unsigned bound) {
  if (poly.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "factorization of zero");
  PolyRing R(F);
  Factorization result;
  result.unit = poly.leading();
  const Poly f = R.monic(poly);
  std::vector<Part> sqf;
  squarefree(R, f, 1, sqf);
  std::mt19937_64 rng(F.seed() * 0x9E3779B97F4A7C15ULL ^ poly.hash());
  for (const auto& [part, mult] : sqf) {
    auto [ddf, rest] = distinct_degree(R, part, bound);
    if (rest.degree() > 0) return std::nullopt;
    for (const auto& [g, d] : ddf) {
      std::vector<Poly> irr;
      equal_degree(R, g, d, rng, irr);
      for (auto& h : irr) result.factors.emplace_back(std::move(h), mult);
    }
  }
  std::sort(result.factors.begin(), result.factors.end());
  return result;
}

}  // namespace

int Factorization::max_degree() const {
  int m = 0;
  for (const auto& [g, e] : factors) m = std::max(m, g.degree());
  return m;
}

Factorization factorize(const FieldTower& F, const Poly& poly) {
  const unsigned bound = poly.degree() < 0 ? 0 : static_cast<unsigned>(poly.degree());
  return *factor_impl(F, poly, bound);
}

std::optional<Factorization> is_smooth(const FieldTower& F, const Poly& poly, unsigned bound) {
  return factor_impl(F, poly, bound);
}

bool is_irreducible(const FieldTower& F, const Poly& poly) {
  if (poly.degree() < 1) return false;
  const Factorization fac = factorize(F, poly);
  return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

Poly expand(const FieldTower& F, const Factorization& fac) {
  PolyRing R(F);
  Poly acc = Poly::constant(fac.unit);
  for (const auto& [g, e] : fac.factors) acc = R.mul(acc, R.pow(g, e));
  return acc;
}

}  // namespace bgjt
