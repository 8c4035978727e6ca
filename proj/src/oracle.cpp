#include "bgjt/oracle.hpp"

#include <numeric>

#include "bgjt/numtheory.hpp"

namespace bgjt {

std::uint64_t bsgs_dlog(std::uint64_t base, std::uint64_t target, std::uint64_t modulus,
                        std::uint64_t order) {
  return bsgs<std::uint64_t>(
      1 % modulus, base % modulus, target % modulus, order,
      [&](std::uint64_t a, std::uint64_t b) { return mulmod(a, b, modulus); },
      [](std::uint64_t a) { return a; });
}

std::uint64_t bsgs_dlog(const ExtField& ext, const Poly& base, const Poly& target,
                        std::uint64_t order) {
  if (order == 0) order = ext.group_order();
  const Poly t = ext.reduce(target);
  if (t.is_zero()) throw Error(ErrorKind::ZeroElement, "bsgs target is zero");
  return bsgs<Poly>(
      Poly::constant(FieldTower::one()), ext.reduce(base), t, order,
      [&](const Poly& a, const Poly& b) { return ext.mul(a, b); },
      [&](const Poly& a) { return ext.pack(a); });
}

BsgsTable::BsgsTable(const ExtField& ext, const Poly& base, std::uint64_t order)
    : ext_(ext), order_(order == 0 ? ext.group_order() : order) {
  m_ = 1;
  while (m_ * m_ < order_) ++m_;
  baby_.reserve(m_ * 2);
  const Poly b = ext.reduce(base);
  Poly cur = Poly::constant(FieldTower::one());
  for (std::uint64_t j = 0; j < m_; ++j) {
    baby_.emplace(ext.pack(cur), j);
    cur = ext.mul(cur, b);
  }
  giant_ = ext.pow(b, (order_ - (m_ % order_)) % order_);
}

std::uint64_t BsgsTable::log(const Poly& target) const {
  Poly gamma = ext_.reduce(target);
  if (gamma.is_zero()) throw Error(ErrorKind::ZeroElement, "bsgs target is zero");
  for (std::uint64_t i = 0; i <= m_; ++i) {
    if (auto it = baby_.find(ext_.pack(gamma)); it != baby_.end()) {
      const std::uint64_t x = i * m_ + it->second;
      if (x < order_) return x;
    }
    gamma = ext_.mul(gamma, giant_);
  }
  throw Error(ErrorKind::NotFound, "target is not in the subgroup generated by base");
}

namespace {

// Elements of F_{q^2}[x]/(ring_poly) packed as base-q^2 digits.
struct SmallRing {
  const FieldTower& F;
  PolyRing R;
  Poly modulus;
  unsigned D = 0;
  std::uint64_t size = 0;

  SmallRing(const FieldTower& F_, const Poly& m, std::uint64_t max_size)
      : F(F_), R(F_), modulus(R.monic(m)), D(static_cast<unsigned>(m.degree())) {
    size = 1;
    for (unsigned i = 0; i < D; ++i) {
      if (size > max_size / F.field_size()) {
        throw Error(ErrorKind::ScaleTooLarge,
                    "ring has more than " + std::to_string(max_size) + " elements");
      }
      size *= F.field_size();
    }
  }

  std::uint64_t pack(const Poly& a) const {
    std::uint64_t key = 0;
    for (int i = static_cast<int>(D) - 1; i >= 0; --i) {
      key = key * F.field_size() + a.coeff(static_cast<unsigned>(i)).index;
    }
    return key;
  }
  Poly unpack(std::uint64_t key) const {
    std::vector<Fq2Elt> c(D);
    for (unsigned i = 0; i < D; ++i) {
      c[i] = F.element(static_cast<unsigned>(key % F.field_size()));
      key /= F.field_size();
    }
    return Poly(std::move(c));
  }
  Poly mul(const Poly& a, const Poly& b) const { return R.mulmod(a, b, modulus); }
};

std::vector<Poly> psi2_generators(const FieldTower& F) {
  std::vector<Poly> gens;
  gens.push_back(Poly::constant(F.lambda()));
  for (unsigned i = 0; i < F.field_size(); ++i) gens.push_back(Poly::linear(F.element(i)));
  return gens;
}

std::uint64_t unit_formula(const FieldTower& F, const Poly& m) {
  const Factorization fac = factorize(F, m);
  std::uint64_t total = 1;
  for (const auto& [g, e] : fac.factors) {
    const std::uint64_t qd = ipow(F.field_size(), static_cast<unsigned>(g.degree()));
    total *= (qd - 1) * ipow(qd, e - 1);
  }
  return total;
}

// BFS over the subgroup generated by gens; word[i] holds exponent vectors of a
// spanning tree path to element i.
struct Closure {
  std::vector<std::uint64_t> elements;
  std::vector<std::vector<int>> words;
  std::unordered_map<std::uint64_t, std::size_t> index;
};

Closure close_group(const SmallRing& ring, const std::vector<Poly>& gens) {
  Closure c;
  const Poly one = Poly::constant(FieldTower::one());
  const std::uint64_t k1 = ring.pack(one);
  c.elements.push_back(k1);
  c.words.emplace_back(gens.size(), 0);
  c.index.emplace(k1, 0);
  for (std::size_t head = 0; head < c.elements.size(); ++head) {
    const Poly g = ring.unpack(c.elements[head]);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Poly h = ring.mul(g, gens[j]);
      const std::uint64_t key = ring.pack(h);
      if (c.index.count(key)) continue;
      c.index.emplace(key, c.elements.size());
      c.elements.push_back(key);
      auto w = c.words[head];
      ++w[j];
      c.words.push_back(std::move(w));
    }
  }
  return c;
}

}  // namespace

Psi2Report verify_psi2_surjective(const FieldTower& F, const SetupInstance& setup,
                                  std::uint64_t max_ring_size) {
  const SmallRing ring(F, setup.ring_poly, max_ring_size);
  Psi2Report rep;
  rep.ring_size = ring.size;
  for (std::uint64_t key = 1; key < ring.size; ++key) {
    if (ring.R.gcd(ring.unpack(key), ring.modulus).is_one()) ++rep.unit_count;
  }
  rep.unit_formula = unit_formula(F, ring.modulus);
  const auto gens = psi2_generators(F);
  for (const auto& g : gens) {
    if (!ring.R.gcd(g, ring.modulus).is_one()) {
      throw Error(ErrorKind::LinearTrapPresent, "a generator is a zero divisor of the ring");
    }
  }
  const Closure c = close_group(ring, gens);
  rep.image_size = c.elements.size();
  rep.contains_fq2 = true;
  for (std::uint64_t e = 0; e + 1 < F.field_size(); ++e) {
    if (!c.index.count(ring.pack(Poly::constant(F.lambda_pow(e))))) rep.contains_fq2 = false;
  }
  rep.surjective = rep.image_size == rep.unit_count && rep.unit_count == rep.unit_formula;
  return rep;
}

QuotientReport quotient_structure_check(const FieldTower& F, const SetupInstance& setup,
                                        std::uint64_t max_ring_size) {
  const SmallRing ring(F, setup.ring_poly, max_ring_size);
  const auto gens = psi2_generators(F);
  for (const auto& g : gens) {
    if (!ring.R.gcd(g, ring.modulus).is_one()) {
      throw Error(ErrorKind::LinearTrapPresent, "a generator is a zero divisor of the ring");
    }
  }
  const Closure c = close_group(ring, gens);
  QuotientReport rep;
  rep.image_size = c.elements.size();

  // Schreier generators w_g + e_j - w_{g s_j} span the kernel lattice L2.
  const std::size_t n = gens.size();
  IntMat rows(c.elements.size() * n, n);
  std::size_t r = 0;
  for (std::size_t gi = 0; gi < c.elements.size(); ++gi) {
    const Poly g = ring.unpack(c.elements[gi]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t hi = c.index.at(ring.pack(ring.mul(g, gens[j])));
      bool trivial = true;
      for (std::size_t t = 0; t < n; ++t) {
        const int v = c.words[gi][t] + (t == j) - c.words[hi][t];
        rows(r, t) = v;
        trivial = trivial && v == 0;
      }
      if (!trivial) ++r;
    }
  }
  IntMat L(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < n; ++t) L(i, t) = rows(i, t);
  rep.schreier_relations = r;

  const std::uint64_t N = ipow(F.field_size(), F.k()) - 1;
  Int Nz;
  mpz_import(Nz.get_mpz_t(), 1, 1, sizeof(N), 0, 0, &N);
  rep.observed = quotient_invariants_mod(L, Nz);

  IntVec orders{Nz};
  for (const auto& cf : setup.cofactors) {
    rep.cofactor_degrees.push_back(cf.degree);
    const unsigned g = std::gcd(cf.degree, F.k());
    if (g != 1) rep.gcd_condition = false;
    const std::uint64_t o = ipow(F.field_size(), g) - 1;
    Int oz;
    mpz_import(oz.get_mpz_t(), 1, 1, sizeof(o), 0, 0, &o);
    orders.push_back(oz);
  }
  rep.expected = canonical_invariants(orders);
  rep.matches = rep.observed == rep.expected;
  return rep;
}

LinearTrapReport demonstrate_linear_trap(const FieldTower& F, const CosetSet& cosets,
                                         unsigned jobs) {
  auto has_linear = [](const SetupInstance& s) {
    for (const auto& cf : s.cofactors) {
      if (cf.degree == 1) return true;
    }
    return false;
  };
  SetupConstraints loose;
  loose.require_no_linear_cofactor = false;
  auto found = find_setup(
      F, [&](const SetupInstance& s) { return has_linear(s) && satisfies(F, s, loose); },
      default_budget(F), jobs);
  if (!found) throw Error(ErrorKind::NoLinearTrapFound, "no setup with a linear cofactor");
  LinearTrapReport rep;
  rep.setup = *found;
  rep.setup.constraints = loose;
  for (const auto& cf : rep.setup.cofactors) {
    if (cf.degree == 1) rep.trap_slots.push_back(cf.poly.coeff(0).index);
  }
  rep.cosets = cosets.reps.size();
  std::vector<RelationRow> rows;
  for (std::size_t i = 0; i < cosets.reps.size(); ++i) {
    if (auto row = factor_base_relation(F, cosets.reps[i], rep.setup, RelgenMode::AllowTraps)) {
      if (!verify_relation(F, rep.setup, *row, RelgenMode::AllowTraps)) {
        throw Error(ErrorKind::VerificationFailed, "trap relation failed reassembly");
      }
      rows.push_back(std::move(*row));
    }
  }
  rep.relations = rows.size();
  for (const auto& row : rows) {
    bool nonzero = false;
    for (unsigned z : rep.trap_slots) {
      if (row.e[z] != 0) nonzero = true;
      if (row.rhs[z] > row.lhs[z]) ++rep.rhs_exceeds;
      if (row.lhs[z] > row.rhs[z]) ++rep.lhs_exceeds;
    }
    rep.nonzero_net += nonzero;
  }
  rep.trap_column_zero = rep.nonzero_net == 0;

  // x^q - c x, c in index order.
  std::optional<SetupInstance> kummer;
  for (unsigned c = 1; c < F.field_size() && !kummer; ++c) {
    try {
      kummer = make_setup(F, Poly({FieldTower::zero(), F.element(c)}),
                          Poly::constant(FieldTower::one()));
    } catch (const Error&) {
    }
  }
  if (kummer) {
    rep.kummer = kummer;
    const ExtField ext(F, kummer->f);
    std::vector<PrimePower> fac = factor_integer(ext.group_order());
    rep.kummer_x_order = multiplicative_order(ext, Poly::x(), fac);
    const std::uint64_t small = (F.q() - 1) * (F.field_size() - 1);
    rep.kummer_order_small = small % rep.kummer_x_order == 0;
  }
  return rep;
}

}  // namespace bgjt
