#include <random>
#include <unordered_map>

#include "bgjt/descent.hpp"
#include "bgjt/error.hpp"
#include "doctest.h"

using namespace bgjt;

namespace {

struct Pipeline {
  FieldTower F;
  SetupInstance setup;
  CosetSet cosets;
  DlogTable table;
};

Pipeline pipeline(unsigned p, unsigned n, unsigned k, std::uint64_t seed) {
  FieldTower F = FieldTower::build(p, n, k, seed);
  SetupInstance s = search_setup(F, SetupConstraints{}, default_budget(F));
  CosetSet cs = enumerate_cosets(F);
  RelgenOptions opt;
  opt.frobenius_topup = true;
  const RelationSet rs = collect_relations(F, s, cs, opt);
  DlogTable t = solve_factor_base(F, s, rs);
  return {std::move(F), std::move(s), std::move(cs), std::move(t)};
}

Poly random_poly(const FieldTower& F, std::mt19937_64& rng, int degree) {
  std::vector<Fq2Elt> c(degree + 1);
  for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
  if (c.back().index == 0) c.back() = FieldTower::one();
  return Poly(std::move(c));
}

Poly random_monic(const FieldTower& F, std::mt19937_64& rng, int degree) {
  Poly p = random_poly(F, rng, degree);
  return PolyRing(F).monic(p);
}

std::optional<SetupInstance> linear_trap_setup(const FieldTower& F) {
  return find_setup(
      F,
      [](const SetupInstance& c) {
        for (const auto& cf : c.cofactors)
          if (cf.degree == 1) return true;
        return false;
      },
      default_budget(F));
}

// Exhaustive log table for small groups.
std::unordered_map<std::uint64_t, std::uint64_t> all_logs(const ExtField& ext, const Poly& base) {
  std::unordered_map<std::uint64_t, std::uint64_t> table;
  Poly cur = Poly::constant(FieldTower::one());
  for (std::uint64_t e = 0; e < ext.group_order(); ++e) {
    table.emplace(ext.pack(cur), e);
    cur = ext.mul(cur, base);
  }
  return table;
}

}  // namespace

TEST_CASE("trap classification and randomization") {
  const FieldTower F = FieldTower::build(7, 1, 3, 0);
  const auto s = linear_trap_setup(F);
  REQUIRE(s.has_value());
  PolyRing R(F);
  Poly z;
  for (const auto& cf : s->cofactors)
    if (cf.degree == 1) z = cf.poly;
  CHECK(trap_check(F, z, *s) == TrapStatus::TrapDivisor);
  CHECK(trap_check(F, s->f, *s) == TrapStatus::IsModulus);
  CHECK_THROWS_AS(trap_check(F, R.mul(s->f, Poly::x()), *s), Error);
  CHECK_THROWS_AS(trap_check(F, Poly::constant(FieldTower::one()), *s), Error);
  std::size_t clean = 0, shares = 0;
  for (unsigned i = 0; i < F.field_size(); ++i) {
    const Poly l = Poly::linear(F.element(i));
    const Poly W = R.mul(z, l);
    const bool l_divides = R.rem(s->ring_poly, l).is_zero() && l != z;
    const TrapStatus st = trap_check(F, W, *s);
    if (l_divides) {
      CHECK(st == TrapStatus::TrapDivisor);
    } else {
      CHECK(st == TrapStatus::SharesFactor);
      ++shares;
    }
    if (!R.rem(s->ring_poly, l).is_zero()) {
      CHECK(trap_check(F, l, *s) == TrapStatus::Clean);
      CHECK_THROWS_AS(randomize_trap(F, l, *s), Error);
      ++clean;
    }
  }
  CHECK(shares > 0);
  CHECK(clean > 0);

  const ExtField ext(F, s->f);
  const Randomized r = randomize_trap(F, z, *s);
  CHECK(r.exponent >= 2);
  CHECK(std::gcd(r.exponent, ext.group_order()) == 1);
  CHECK(r.V == ext.pow(z, r.exponent));
  CHECK(R.gcd(r.V, s->ring_poly).is_one());
  for (std::uint64_t i = 2; i < r.exponent; ++i) {
    if (std::gcd(i, ext.group_order()) != 1) continue;
    CHECK(!R.gcd(ext.pow(z, i), s->ring_poly).is_one());
  }
}

TEST_CASE("descent vector and numerator identities") {
  const Pipeline P = pipeline(7, 1, 3, 1);
  const FieldTower& F = P.F;
  PolyRing R(F);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    const Poly W = random_monic(F, rng, 2);
    const unsigned w = 2;
    for (std::size_t ci = 0; ci < P.cosets.reps.size(); ci += 7) {
      const CosetRep& m = P.cosets.reps[ci];
      Poly prod = R.add(R.scale(W, m.c), Poly::constant(m.d));
      for (unsigned t = 0; t < F.q(); ++t) {
        const Fq2Elt te = F.element(t);
        prod = R.mul(prod, R.add(R.scale(W, F.sub(m.a, F.mul(te, m.c))),
                                 Poly::constant(F.sub(m.b, F.mul(te, m.d)))));
      }
      // The same vector describes the product for every W.
      const DescentVector dv = descent_vector(F, m);
      Poly expect = Poly::constant(dv.unit);
      for (unsigned i = 0; i < F.field_size(); ++i) {
        if (dv.v[i]) {
          expect = R.mul(expect, R.pow(R.add(W, Poly::constant(F.element(i))),
                                       static_cast<unsigned>(dv.v[i])));
        }
      }
      CHECK(prod == expect);
      int total = 0;
      for (int v : dv.v) total += v;
      // q + 1 linear forms, one of them constant when m^{-1} sends infinity into P^1(F_q).
      const bool absorbed = m.c.index == 0 || F.in_fq(F.div(m.a, m.c));
      CHECK(total == static_cast<int>(F.q()) + 1 - (absorbed ? 1 : 0));
      const Poly lhs = R.mul(R.pow(P.setup.h1, w), prod);
      CHECK(R.rem(lhs, P.setup.ring_poly) ==
            R.rem(descent_numerator(F, m, W, P.setup), P.setup.ring_poly));
    }
  }
}

TEST_CASE("descent step outcomes are consistent") {
  const Pipeline P = pipeline(7, 1, 3, 1);
  const FieldTower& F = P.F;
  const ExtField ext(F, P.setup.f);
  PolyRing R(F);
  std::mt19937_64 rng(12);
  std::size_t present = 0, absent = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Poly W;
    do {
      W = random_monic(F, rng, 2);
    } while (!is_irreducible(F, W) || trap_check(F, W, P.setup) != TrapStatus::Clean);
    const DescentStep st = try_descend_step(F, P.setup, P.cosets, W);
    CHECK(st.bound == 1);
    CHECK(st.accepted.size() + st.trap_rejected == st.smooth);
    for (const auto& rel : st.accepted) {
      CHECK(R.gcd(descent_numerator(F, P.cosets.reps[rel.coset], W, P.setup), P.setup.ring_poly)
                .is_one());
      CHECK(rel.rhs.max_degree() <= 1);
    }
    if (st.expression) {
      ++present;
      Poly v = Poly::constant(F.lambda_pow(st.expression->lambda_exp));
      v = ext.mul(v, ext.pow(P.setup.h1, st.expression->h1_exp));
      for (const auto& [g, x] : st.expression->factors) {
        CHECK(g.degree() <= 1);
        v = ext.mul(v, ext.pow(g, x));
      }
      CHECK(v == ext.reduce(W));
      CHECK_NOTHROW(descend_step(F, P.setup, P.cosets, W));
    } else {
      ++absent;
      try {
        descend_step(F, P.setup, P.cosets, W);
        FAIL("expected DescentStuck");
      } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::DescentStuck));
      }
    }
  }
  CHECK(present + absent == 10);
  CHECK_THROWS_AS(descend_step(F, P.setup, P.cosets, Poly::linear(F.element(3))), Error);
}

TEST_CASE("full logs agree with exhaustive tables") {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {5, 1}}) {
    const Pipeline P = pipeline(p, n, 3, 1);
    const FieldTower& F = P.F;
    const ExtField ext(F, P.setup.f);
    const Poly base = Poly::linear(F.element(P.table.base_slot));
    const auto logs = all_logs(ext, base);
    Descender d(F, P.setup, P.table, P.cosets);
    CHECK(d.full_dlog(base).log == 1);
    CHECK(d.full_dlog(Poly::constant(F.lambda())).log == P.table.log_lambda);
    std::mt19937_64 rng(p * 31 + n);
    for (int t = 0; t < 25; ++t) {
      const Poly target = random_poly(F, rng, 1 + static_cast<int>(rng() % 6));
      if (ext.reduce(target).is_zero()) continue;
      const DlogResult r = d.full_dlog(target);
      CHECK(r.verified);
      CHECK(r.log == logs.at(ext.pack(ext.reduce(target))));
      CHECK(r.trace.size() >= 1);
      CHECK(r.rescued_nodes <= r.stuck_nodes);
    }
    CHECK_THROWS_AS(d.full_dlog(P.setup.f), Error);
  }
}

TEST_CASE("rescue disabled surfaces stuck nodes") {
  const Pipeline P = pipeline(2, 2, 3, 1);
  const FieldTower& F = P.F;
  std::mt19937_64 rng(3);
  DescentOptions opt;
  opt.rescue = false;
  Descender d(F, P.setup, P.table, P.cosets, opt);
  bool thrown = false;
  for (int t = 0; t < 50 && !thrown; ++t) {
    Poly W;
    do {
      W = random_monic(F, rng, 2);
    } while (!is_irreducible(F, W) || trap_check(F, W, P.setup) != TrapStatus::Clean);
    if (try_descend_step(F, P.setup, P.cosets, W).expression) continue;
    try {
      d.full_dlog(W);
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::DescentStuck));
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("irreducible trap divisors never appear on the left") {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{7, 1}, {2, 3}}) {
    const FieldTower F = FieldTower::build(p, n, 3, 0);
    const CosetSet cs = enumerate_cosets(F);
    // Degree >= 2: the smoothness bound is below deg W, so W cannot cancel.
    const auto quad = find_setup(
        F,
        [](const SetupInstance& c) {
          for (const auto& cf : c.cofactors)
            if (cf.degree == 2) return true;
          return false;
        },
        default_budget(F));
    REQUIRE(quad.has_value());
    std::size_t swept = 0;
    for (const auto& cf : quad->cofactors) {
      if (cf.degree != 2) continue;
      const TrapSweep sw = trap_sweep(F, *quad, cs, cf.poly);
      CHECK(sw.irreducible);
      CHECK(sw.smooth > 0);
      CHECK(sw.smooth_e1 == 0);
      CHECK(sw.coprime_e1 == 0);
      ++swept;
    }
    CHECK(swept > 0);
    // Linear traps: bound 1 equals deg W, so only the coprime filter keeps
    // them off the left.
    const auto lin = linear_trap_setup(F);
    REQUIRE(lin.has_value());
    for (const auto& cf : lin->cofactors) {
      if (cf.degree != 1) continue;
      const TrapSweep sw = trap_sweep(F, *lin, cs, cf.poly);
      CHECK(sw.coprime_e1 == 0);
      CHECK(sw.coprime <= sw.smooth);
    }
  }
}
