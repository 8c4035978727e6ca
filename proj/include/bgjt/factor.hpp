#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bgjt/poly.hpp"

namespace bgjt {

struct Factorization {
  Fq2Elt unit{};
  // Monic irreducible factors with multiplicity, sorted by (degree, coeffs).
  std::vector<std::pair<Poly, unsigned>> factors;

  int max_degree() const;
  bool operator==(const Factorization&) const = default;
};

// Complete factorization over F_{q^2}: squarefree decomposition, then
// distinct-degree, then equal-degree splitting. Splitting randomness is
// seeded from (tower seed, polynomial hash). Throws ZeroPolynomial.
Factorization factorize(const FieldTower& F, const Poly& poly);

// The factorization iff every irreducible factor has degree <= bound.
// Distinct-degree sieving aborts as soon as a factor above the bound is
// certain. Throws ZeroPolynomial.
std::optional<Factorization> is_smooth(const FieldTower& F, const Poly& poly, unsigned bound);

bool is_irreducible(const FieldTower& F, const Poly& poly);

// unit * prod factor^mult.
Poly expand(const FieldTower& F, const Factorization& fac);

}  // namespace bgjt
