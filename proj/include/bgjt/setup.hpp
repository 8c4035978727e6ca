#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bgjt/factor.hpp"
#include "bgjt/poly.hpp"

namespace bgjt {

struct SetupConstraints {
  bool require_no_linear_cofactor = true;
  // Every cofactor degree coprime to k.
  bool require_gcd_one = true;
  bool require_nonkummer = true;

  bool operator==(const SetupConstraints&) const = default;
};

struct Cofactor {
  Poly poly;  // monic irreducible
  unsigned mult = 1;
  unsigned degree = 0;

  bool operator==(const Cofactor&) const = default;
};

// x^q h1(x) - h0(x) = unit * f * prod cofactor^mult.
struct SetupInstance {
  Poly h0;
  Poly h1;  // monic, degree <= 1
  Poly f;   // monic irreducible of degree k, multiplicity one
  std::vector<Cofactor> cofactors;
  Fq2Elt unit{};
  Poly ring_poly;
  SetupConstraints constraints;
  std::uint64_t tried = 0;

  bool operator==(const SetupInstance&) const = default;
};

// x^q h1 - h0
Poly ring_polynomial(const FieldTower& F, const Poly& h0, const Poly& h1);

// Builds and validates a setup from explicit (h0, h1). When several degree-k
// factors of multiplicity one exist the least one becomes f. Constraints are
// recorded but not enforced. Throws InvalidArgument.
SetupInstance make_setup(const FieldTower& F, const Poly& h0, const Poly& h1);

// x^{q-1} is constant modulo f (k >= 2), or the setup is literally x^q - a*x.
bool is_kummer(const FieldTower& F, const SetupInstance& setup);

bool satisfies(const FieldTower& F, const SetupInstance& setup, const SetupConstraints& c);

// Total number of candidate pairs in the enumeration: h1 over the q^2 monic
// linears then h1 = 1, h0 over degree exactly 2 then degree <= 1.
std::uint64_t default_budget(const FieldTower& F);

// First candidate in the seeded enumeration satisfying all enabled
// constraints. The seed rotates the h0 order inside each block. Throws
// SearchExhausted with the number tried and the closest-miss pattern.
SetupInstance search_setup(const FieldTower& F, const SetupConstraints& constraints,
                           std::uint64_t budget, unsigned jobs = 1);

// First candidate in the seeded enumeration accepted by pred, or nullopt.
std::optional<SetupInstance> find_setup(const FieldTower& F,
                                        const std::function<bool(const SetupInstance&)>& pred,
                                        std::uint64_t budget, unsigned jobs = 1);

// Exhaustive count of valid candidate pairs (no early exit).
std::uint64_t count_valid_setups(const FieldTower& F, const SetupConstraints& constraints,
                                 unsigned jobs = 1);

struct SetupReport {
  struct CofactorInfo {
    unsigned degree = 0;
    unsigned mult = 0;
    unsigned gcd_with_k = 0;
  };
  std::vector<Poly> linear_traps;
  std::vector<CofactorInfo> cofactors;
  bool kummer = false;
  // Monic divisors of ring_poly with 1 <= degree < k.
  std::vector<Poly> trap_divisors;
};

SetupReport classify_setup(const FieldTower& F, const SetupInstance& setup);

}  // namespace bgjt
