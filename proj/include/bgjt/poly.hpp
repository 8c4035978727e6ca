#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bgjt/tower.hpp"

namespace bgjt {

// Dense univariate polynomial over F_{q^2}, little-endian by degree. The
// coefficient vector is kept trimmed, so the zero polynomial is empty.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Fq2Elt> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(Fq2Elt c) { return Poly({c}); }
  static Poly x() { return Poly({FieldTower::zero(), FieldTower::one()}); }
  // x + alpha, the factor base element indexed by alpha.
  static Poly linear(Fq2Elt alpha) { return Poly({alpha, FieldTower::one()}); }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == FieldTower::one(); }
  bool is_monic() const { return !c_.empty() && c_.back() == FieldTower::one(); }
  Fq2Elt leading() const { return c_.empty() ? FieldTower::zero() : c_.back(); }
  Fq2Elt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FieldTower::zero(); }
  const std::vector<Fq2Elt>& coeffs() const { return c_; }

  auto operator<=>(const Poly& other) const {
    if (auto cmp = degree() <=> other.degree(); cmp != 0) return cmp;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (auto cmp = c_[i] <=> other.c_[i]; cmp != 0) return cmp;
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const Poly&) const = default;

  std::uint64_t hash() const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().index == 0) c_.pop_back();
  }

  std::vector<Fq2Elt> c_;
};

// Arithmetic in F_{q^2}[x]. Holds a reference to the tower, which must
// outlive it.
class PolyRing {
 public:
  explicit PolyRing(const FieldTower& field) : F_(&field) {}

  const FieldTower& field() const { return *F_; }

  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly neg(const Poly& a) const;
  Poly mul(const Poly& a, const Poly& b) const;
  Poly scale(const Poly& a, Fq2Elt s) const;
  // Throws ZeroPolynomial on division by zero.
  std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const;
  Poly rem(const Poly& a, const Poly& b) const { return divmod(a, b).second; }
  Poly quo(const Poly& a, const Poly& b) const { return divmod(a, b).first; }
  bool divides(const Poly& d, const Poly& a) const { return rem(a, d).is_zero(); }
  Poly monic(const Poly& a) const;
  // Monic gcd. Throws BothZero.
  Poly gcd(const Poly& a, const Poly& b) const;
  Poly derivative(const Poly& a) const;
  Poly pow(const Poly& a, std::uint64_t e) const;
  Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const { return rem(mul(a, b), m); }
  Poly powmod(Poly a, std::uint64_t e, const Poly& m) const;
  // Coefficientwise q-th power (the polynomial W~ with W(x)^q = W~(x^q)).
  Poly frobenius_coeffs(const Poly& a) const;
  Fq2Elt eval(const Poly& a, Fq2Elt x) const;
  // x^(q^2) - x
  Poly field_poly() const;

  std::string to_string(const Poly& a) const;

 private:
  const FieldTower* F_;
};

}  // namespace bgjt
