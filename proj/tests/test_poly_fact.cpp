#include <random>

#include "bgjt/error.hpp"
#include "bgjt/factor.hpp"
#include "doctest.h"

using namespace bgjt;

namespace {

Poly random_poly(const FieldTower& F, std::mt19937_64& rng, int degree, bool monic) {
  std::vector<Fq2Elt> c(degree + 1);
  for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
  if (monic) c.back() = FieldTower::one();
  if (c.back().index == 0) c.back() = FieldTower::one();
  return Poly(std::move(c));
}

// All monic polynomials of a given degree, in index order.
std::vector<Poly> all_monic(const FieldTower& F, int degree) {
  const unsigned Q = F.field_size();
  std::uint64_t total = 1;
  for (int i = 0; i < degree; ++i) total *= Q;
  std::vector<Poly> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Fq2Elt> c(degree + 1);
    std::uint64_t x = idx;
    for (int i = 0; i < degree; ++i) {
      c[i] = F.element(static_cast<unsigned>(x % Q));
      x /= Q;
    }
    c[degree] = FieldTower::one();
    out.emplace_back(std::move(c));
  }
  return out;
}

// Irreducible by trial division with every monic polynomial of degree
// <= deg/2.
bool trial_irreducible(const FieldTower& F, const Poly& a) {
  PolyRing R(F);
  for (int d = 1; 2 * d <= a.degree(); ++d) {
    for (const auto& g : all_monic(F, d)) {
      if (R.rem(a, g).is_zero()) return false;
    }
  }
  return a.degree() >= 1;
}

}  // namespace

TEST_CASE("division, gcd and evaluation identities") {
  const FieldTower F = FieldTower::build(3, 2, 5, 1);
  PolyRing R(F);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const Poly a = random_poly(F, rng, static_cast<int>(rng() % 9), false);
    const Poly b = random_poly(F, rng, 1 + static_cast<int>(rng() % 5), false);
    const auto [q, r] = R.divmod(a, b);
    CHECK(R.add(R.mul(q, b), r) == a);
    CHECK(r.degree() < b.degree());
    const Poly g = R.gcd(a, b);
    CHECK(g.is_monic());
    CHECK(R.rem(a, g).is_zero());
    CHECK(R.rem(b, g).is_zero());
    const Fq2Elt x = F.element(static_cast<unsigned>(rng() % F.field_size()));
    CHECK(R.eval(R.mul(a, b), x) == F.mul(R.eval(a, x), R.eval(b, x)));
  }
  CHECK_THROWS_AS(R.divmod(Poly::x(), Poly()), Error);
  CHECK_THROWS_AS(R.gcd(Poly(), Poly()), Error);
}

TEST_CASE("factorization reassembles into irreducibles") {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const FieldTower F = FieldTower::build(p, n, 1, 3);
    PolyRing R(F);
    std::mt19937_64 rng(11 + p);
    for (int t = 0; t < 150; ++t) {
      Poly a = random_poly(F, rng, 1 + static_cast<int>(rng() % 6), false);
      if (t % 5 == 0) a = R.mul(a, R.pow(random_poly(F, rng, 1 + static_cast<int>(rng() % 2), true), p));
      const Factorization fac = factorize(F, a);
      CHECK(expand(F, fac) == a);
      for (const auto& [g, m] : fac.factors) {
        CHECK(g.is_monic());
        CHECK(m >= 1);
        if (g.degree() <= 5) CHECK(trial_irreducible(F, g));
      }
      for (std::size_t i = 1; i < fac.factors.size(); ++i) {
        CHECK(fac.factors[i - 1].first < fac.factors[i].first);
      }
      CHECK(factorize(F, a) == fac);
    }
  }
}

TEST_CASE("irreducibility matches trial division exhaustively in low degree") {
  const FieldTower F = FieldTower::build(2, 1, 1, 0);  // F_4 coefficients
  for (int d = 1; d <= 4; ++d) {
    for (const auto& a : all_monic(F, d)) CHECK(is_irreducible(F, a) == trial_irreducible(F, a));
  }
}

TEST_CASE("1-smooth monic cubics: exhaustive count against multiset count") {
  for (unsigned p : {3u, 2u}) {
    const unsigned n = p == 2 ? 2 : 1;
    const FieldTower F = FieldTower::build(p, n, 1, 0);
    const std::uint64_t Q = F.field_size();
    std::uint64_t smooth = 0;
    for (const auto& a : all_monic(F, 3)) {
      const auto s = is_smooth(F, a, 1);
      const Factorization fac = factorize(F, a);
      CHECK(s.has_value() == (fac.max_degree() <= 1));
      smooth += s.has_value();
    }
    // Multisets of three roots from Q elements.
    CHECK(smooth == (Q + 2) * (Q + 1) * Q / 6);
  }
}

TEST_CASE("smoothness early abort agrees with full factorization") {
  const FieldTower F = FieldTower::build(7, 1, 3, 5);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const Poly a = random_poly(F, rng, 2 + static_cast<int>(rng() % 8), false);
    const int maxd = factorize(F, a).max_degree();
    for (unsigned b = 1; b <= 4; ++b) {
      const auto s = is_smooth(F, a, b);
      CHECK(s.has_value() == (maxd <= static_cast<int>(b)));
      if (s) CHECK(expand(F, *s) == a);
    }
  }
}

TEST_CASE("human-readable printing") {
  const FieldTower F = FieldTower::build(3, 1, 1, 0);
  PolyRing R(F);
  const Poly a({F.make(1, 2), F.element(0), FieldTower::one()});
  CHECK(R.to_string(a) == "x^2 + 1+2*g");
  CHECK(R.to_string(Poly()) == "0");
}
