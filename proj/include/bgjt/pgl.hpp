#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bgjt/tower.hpp"
#include "bgjt/zlattice.hpp"

namespace bgjt {

// Point of P^1(F_{q^2}): id < q^2 is the finite point (alpha_id : 1), id == q^2
// is infinity. Ordering by id is the fixed total order on the line.
using PointId = std::uint16_t;

// Representative m = (a b; c d) of a coset of PGL2(F_q) in PGL2(F_{q^2}).
// support = m^{-1}(P^1(F_q)), sorted; it identifies the coset.
struct CosetRep {
  Fq2Elt a{}, b{}, c{}, d{};
  std::vector<PointId> support;

  bool operator==(const CosetRep&) const = default;
};

struct CosetSet {
  unsigned q = 0;
  std::vector<CosetRep> reps;  // sorted by support
  std::map<std::vector<PointId>, std::size_t> by_support;

  std::optional<std::size_t> find(const std::vector<PointId>& support) const;
};

// Sorted m^{-1}(P^1(F_q)) for a nonsingular matrix.
std::vector<PointId> coset_support(const FieldTower& F, Fq2Elt a, Fq2Elt b, Fq2Elt c, Fq2Elt d);

// All q^3 + q cosets, one per subline of P^1(F_{q^2}). Each subline is
// generated once, from its three smallest points.
CosetSet enumerate_cosets(const FieldTower& F, unsigned jobs = 1);

// v_m^+: component i (0-based, i < q^2) is 1 iff (alpha_i : 1) is in the
// support; the last component is 1 iff infinity is.
std::vector<std::uint8_t> row_vector(const FieldTower& F, const CosetRep& rep);

struct RowVectors {
  std::vector<std::vector<std::uint8_t>> Hplus;  // (q^3+q) x (q^2+1)
  std::vector<std::vector<std::uint8_t>> H;      // Hplus without its last column
};

RowVectors build_row_vectors(const FieldTower& F, const CosetSet& cosets);

struct Theorem4Certificate {
  std::vector<long long> v1, v2, v3, v4, v5, v6, v7;
  std::size_t first_last_rows = 0;  // rows of H+ with first and last coordinate 1
  // Integer combination of the rows of H reproducing (1, 0, ..., 0), from the
  // constructive chain.
  std::vector<long long> constructive_coefficients;
  bool constructive_ok = false;
  // Same target solved by Hermite normal form membership.
  IntVec hnf_coefficients;
  bool hnf_ok = false;
};

// Throws CertificateMismatch if either route fails.
Theorem4Certificate verify_theorem4(const FieldTower& F, const CosetSet& cosets);

}  // namespace bgjt
