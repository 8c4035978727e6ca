#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "bgjt/numtheory.hpp"

namespace bgjt {

// Element of F_{q^2}. The index packs the tower coordinates: index = u + v*q
// where u, v are F_q indices and the element is u + v*gamma. An F_q index is
// the base-p integer whose digits are the coefficients over F_p. Index 0 is
// zero, index 1 is one, and an element lies in F_q iff index < q.
struct Fq2Elt {
  std::uint16_t index = 0;

  constexpr auto operator<=>(const Fq2Elt&) const = default;
};

// F_p ⊂ F_q ⊂ F_{q^2}, plus the target degree k of F_{q^{2k}}. The top layer
// F_{q^2}[x]/(f) depends on the setup polynomial f and lives in ExtField.
// Immutable after construction; all arithmetic is table driven.
class FieldTower {
 public:
  // Throws NotPrime / RegimeViolation.
  static FieldTower build(std::uint64_t p, unsigned n, unsigned k, std::uint64_t seed);
  // Same tables without the k < q check, for the tiny-scale structure
  // oracles where ring_poly may be f itself (k = q or q + 1).
  static FieldTower build_structural(std::uint64_t p, unsigned n, unsigned k, std::uint64_t seed);

  std::uint64_t p() const { return p_; }
  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  bool structural() const { return structural_; }
  unsigned q() const { return q_; }
  // q^2, the size of the coefficient field.
  unsigned field_size() const { return qq_; }

  // Monic degree-n modulus of F_q over F_p, little-endian F_p coefficients.
  const std::vector<unsigned>& fq_modulus() const { return fq_modulus_; }
  // Monic quadratic modulus of F_{q^2} over F_q: {t, s, 1} for y^2 + s*y + t.
  std::vector<unsigned> qm2_modulus() const { return {qm2_t_, qm2_s_, 1}; }

  // F_q arithmetic on indices.
  unsigned fq_add(unsigned a, unsigned b) const { return fq_add_[a * q_ + b]; }
  unsigned fq_mul(unsigned a, unsigned b) const { return fq_mul_[a * q_ + b]; }
  unsigned fq_neg(unsigned a) const { return fq_neg_[a]; }

  static constexpr Fq2Elt zero() { return Fq2Elt{0}; }
  static constexpr Fq2Elt one() { return Fq2Elt{1}; }
  Fq2Elt gamma() const { return make(0, 1); }
  Fq2Elt lambda() const { return lambda_; }
  Fq2Elt element(unsigned index) const { return Fq2Elt{static_cast<std::uint16_t>(index)}; }
  Fq2Elt make(unsigned u, unsigned v) const {
    return Fq2Elt{static_cast<std::uint16_t>(u + v * q_)};
  }
  unsigned coord_u(Fq2Elt a) const { return a.index % q_; }
  unsigned coord_v(Fq2Elt a) const { return a.index / q_; }
  bool in_fq(Fq2Elt a) const { return a.index < q_; }
  // Image of an integer under Z -> F_p -> F_{q^2}.
  Fq2Elt from_int(long long value) const;

  Fq2Elt add(Fq2Elt a, Fq2Elt b) const { return Fq2Elt{add_[a.index * qq_ + b.index]}; }
  Fq2Elt mul(Fq2Elt a, Fq2Elt b) const { return Fq2Elt{mul_[a.index * qq_ + b.index]}; }
  Fq2Elt neg(Fq2Elt a) const { return Fq2Elt{neg_[a.index]}; }
  Fq2Elt sub(Fq2Elt a, Fq2Elt b) const { return add(a, neg(b)); }
  // Throws ZeroElement.
  Fq2Elt inv(Fq2Elt a) const;
  Fq2Elt div(Fq2Elt a, Fq2Elt b) const { return mul(a, inv(b)); }
  Fq2Elt pow(Fq2Elt a, std::uint64_t e) const;
  // a^q, the generator of Gal(F_{q^2}/F_q).
  Fq2Elt frobenius(Fq2Elt a) const { return Fq2Elt{frob_[a.index]}; }
  // The unique b with b^p = a.
  Fq2Elt pth_root(Fq2Elt a) const { return Fq2Elt{pth_root_[a.index]}; }

  // Discrete log to base lambda, in [0, q^2 - 1). Throws ZeroElement.
  std::uint64_t dlog(Fq2Elt a) const;
  Fq2Elt lambda_pow(std::uint64_t e) const { return Fq2Elt{exp_[e % (qq_ - 1)]}; }

  // Multiplicative order of a nonzero element of F_{q^2}.
  std::uint64_t order(Fq2Elt a) const;
  const std::vector<PrimePower>& unit_group_factors() const { return unit_factors_; }

 private:
  static FieldTower build_tables(std::uint64_t p, unsigned n, unsigned k, std::uint64_t seed);
  FieldTower() = default;

  std::uint64_t p_ = 0;
  unsigned n_ = 0, k_ = 0, q_ = 0, qq_ = 0;
  std::uint64_t seed_ = 0;
  bool structural_ = false;
  std::vector<unsigned> fq_modulus_;
  unsigned qm2_s_ = 0, qm2_t_ = 0;
  std::vector<unsigned> fq_add_, fq_mul_, fq_neg_;
  std::vector<std::uint16_t> add_, mul_, neg_, inv_, frob_, pth_root_, exp_;
  std::vector<std::uint32_t> log_;
  std::vector<PrimePower> unit_factors_;
  Fq2Elt lambda_{};
};

}  // namespace bgjt
