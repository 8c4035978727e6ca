#pragma once

#include <cstdint>
#include <vector>

#include "bgjt/numtheory.hpp"
#include "bgjt/poly.hpp"

namespace bgjt {

// F_{q^{2k}} = F_{q^2}[x]/(f) for a monic irreducible f of degree k.
class ExtField {
 public:
  ExtField(const FieldTower& field, Poly modulus);

  const FieldTower& field() const { return ring_.field(); }
  const PolyRing& ring() const { return ring_; }
  const Poly& modulus() const { return f_; }
  unsigned degree() const { return static_cast<unsigned>(f_.degree()); }
  // q^{2k} - 1
  std::uint64_t group_order() const { return order_; }
  const std::vector<PrimePower>& group_factors() const { return factors_; }

  Poly reduce(const Poly& a) const { return ring_.rem(a, f_); }
  Poly mul(const Poly& a, const Poly& b) const { return ring_.mulmod(a, b, f_); }
  Poly pow(const Poly& a, std::uint64_t e) const { return ring_.powmod(a, e, f_); }
  // Throws ZeroElement.
  Poly inv(const Poly& a) const;
  // a^e for a signed exponent, reduced modulo the group order.
  Poly pow_signed(const Poly& a, long long e) const;

  // Integer key for a reduced element; injective while
  // k * bit_width(q^2 - 1) <= 64.
  std::uint64_t pack(const Poly& reduced) const;

 private:
  PolyRing ring_;
  Poly f_;
  std::uint64_t order_ = 0;
  std::vector<PrimePower> factors_;
};

// Exact multiplicative order of elt mod f, given a factorization of the group
// order. Throws BadFactorization if the prime powers do not multiply to
// q^{2k} - 1, ZeroElement if elt is zero mod f.
std::uint64_t multiplicative_order(const ExtField& ext, const Poly& elt,
                                   const std::vector<PrimePower>& group_order_factorization);

}  // namespace bgjt
