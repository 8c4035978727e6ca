#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bgjt/error.hpp"
#include "bgjt/extfield.hpp"
#include "bgjt/relgen.hpp"

namespace bgjt {

// Baby-step giant-step over any group given by mul and an injective key.
// Throws NotFound when target is not a power of base within order steps.
template <class T, class Mul, class Key>
std::uint64_t bsgs(const T& one, const T& base, const T& target, std::uint64_t order, Mul mul,
                   Key key) {
  std::uint64_t m = 1;
  while (m * m < order) ++m;
  std::unordered_map<std::uint64_t, std::uint64_t> baby;
  baby.reserve(m * 2);
  T cur = one;
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(key(cur), j);
    cur = mul(cur, base);
  }
  // cur = base^m; find the inverse by stepping up to base^{order - m}.
  T giant = one;
  {
    const std::uint64_t e = (order - (m % order)) % order;
    T acc = one, b = base;
    for (std::uint64_t x = e; x; x >>= 1) {
      if (x & 1) acc = mul(acc, b);
      b = mul(b, b);
    }
    giant = acc;
  }
  T gamma = target;
  for (std::uint64_t i = 0; i <= m; ++i) {
    if (auto it = baby.find(key(gamma)); it != baby.end()) {
      const std::uint64_t x = i * m + it->second;
      if (x < order) return x;
    }
    gamma = mul(gamma, giant);
  }
  throw Error(ErrorKind::NotFound, "target is not in the subgroup generated by base");
}

// Discrete log in F_p^* style integer groups (modulus prime, order p - 1 or a divisor).
std::uint64_t bsgs_dlog(std::uint64_t base, std::uint64_t target, std::uint64_t modulus,
                        std::uint64_t order);

// Discrete log in F_{q^{2k}}^*; order defaults to q^{2k} - 1.
std::uint64_t bsgs_dlog(const ExtField& ext, const Poly& base, const Poly& target,
                        std::uint64_t order = 0);

// Baby steps built once for many targets with the same base.
class BsgsTable {
 public:
  BsgsTable(const ExtField& ext, const Poly& base, std::uint64_t order = 0);
  std::uint64_t log(const Poly& target) const;

 private:
  const ExtField& ext_;
  std::uint64_t order_ = 0, m_ = 0;
  Poly giant_;
  std::unordered_map<std::uint64_t, std::uint64_t> baby_;
};

struct Psi2Report {
  std::uint64_t ring_size = 0;
  std::uint64_t unit_count = 0;   // by enumeration
  std::uint64_t unit_formula = 0; // from the factorization of ring_poly
  std::uint64_t image_size = 0;   // subgroup generated by lambda and x + alpha
  bool contains_fq2 = false;      // lambda's powers all reached
  bool surjective = false;
};

// Throws ScaleTooLarge above max_ring_size elements.
Psi2Report verify_psi2_surjective(const FieldTower& F, const SetupInstance& setup,
                                  std::uint64_t max_ring_size = 10'000'000);

struct QuotientReport {
  std::uint64_t image_size = 0;
  std::size_t schreier_relations = 0;
  IntVec observed;  // invariants of Z^{q^2+1} / (L2 + (q^{2k}-1) Z^{q^2+1})
  IntVec expected;  // q^{2k}-1 and q^{2 gcd(k, k_i)} - 1 per distinct cofactor, regrouped
  std::vector<unsigned> cofactor_degrees;
  bool gcd_condition = true;  // gcd(k, k_i) = 1 for all i
  bool matches = false;
};

QuotientReport quotient_structure_check(const FieldTower& F, const SetupInstance& setup,
                                        std::uint64_t max_ring_size = 10'000'000);

struct LinearTrapReport {
  SetupInstance setup;
  std::vector<unsigned> trap_slots;  // x + alpha_slot divides ring_poly
  std::size_t cosets = 0;
  std::size_t relations = 0;
  std::size_t nonzero_net = 0;    // relations whose net trap exponent is nonzero
  std::size_t rhs_exceeds = 0;    // e'_z > e_z
  std::size_t lhs_exceeds = 0;    // e_z > e'_z
  bool trap_column_zero = false;
  // Kummer instance x^q - a x at the same q, when one exists.
  std::optional<SetupInstance> kummer;
  std::uint64_t kummer_x_order = 0;
  bool kummer_order_small = false;  // divides (q - 1)(q^2 - 1)
};

// Throws NoLinearTrapFound when no setup with a linear cofactor exists.
LinearTrapReport demonstrate_linear_trap(const FieldTower& F, const CosetSet& cosets,
                                         unsigned jobs = 1);

}  // namespace bgjt
