#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bgjt/pgl.hpp"
#include "bgjt/setup.hpp"
#include "bgjt/zlattice.hpp"

namespace bgjt {

// alpha_1 = 0, alpha_2, ... in F_{q^2} index order: factor base slot i holds
// x + element(i). Relation vectors put lambda in column 0 and slot i in
// column i + 1.
struct FactorBase {
  unsigned size = 0;

  static FactorBase of(const FieldTower& F) { return {F.field_size()}; }
  Fq2Elt alpha(const FieldTower& F, unsigned slot) const { return F.element(slot); }
  unsigned slot(Fq2Elt alpha) const { return alpha.index; }
};

// lambda^{e0} * prod (x + alpha_i)^{e_i} = 1 mod ring_poly, with the gross
// exponents of both sides kept for trap diagnostics (net e = lhs - rhs).
enum class RowSource {
  Coset,
  // h1 (x + alpha)^q = h0 + alpha^q h1, only used to top up a short coset set.
  Frobenius,
};

struct RelationRow {
  RowSource source = RowSource::Coset;
  std::size_t index = 0;  // coset id, or factor base slot for Frobenius rows
  long long e0 = 0;  // in [0, q^2 - 1)
  std::vector<int> e;
  std::vector<int> lhs;
  std::vector<int> rhs;

  bool operator==(const RelationRow&) const = default;
};

struct RelationSet {
  std::vector<RelationRow> rows;
  bool augmented = false;
  std::size_t width = 0;  // q^2 + 1
  std::uint64_t group_order = 0;  // q^{2k} - 1
  std::size_t coset_rows = 0;
  std::size_t frobenius_rows = 0;

  // Relation rows followed, when augmented, by (q^2-1, 0, ..., 0) and
  // (q^{2k}-1) * e_i for each factor base column.
  IntMat lattice() const;
  std::size_t augmentation_rows() const { return augmented ? width : 0; }
};

enum class RelgenMode {
  Strict,
  // Test-only: lets setups with linear cofactors through so the zero-divisor
  // behaviour can be observed.
  AllowTraps,
};

// The Mobius-transformed x^q - x identity for one coset, kept iff the
// right-hand side splits into linear factors. Throws LinearTrapPresent in
// strict mode when the setup has a linear cofactor.
std::optional<RelationRow> factor_base_relation(const FieldTower& F, const CosetRep& rep,
                                                const SetupInstance& setup,
                                                RelgenMode mode = RelgenMode::Strict);

// Frobenius row for slot alpha, kept iff h0 + alpha^q h1 splits into linears.
std::optional<RelationRow> frobenius_relation(const FieldTower& F, const SetupInstance& setup,
                                              unsigned slot, RelgenMode mode = RelgenMode::Strict);

// Exact reassembly check of a row modulo ring_poly. In strict mode the net
// form is checked as well.
bool verify_relation(const FieldTower& F, const SetupInstance& setup, const RelationRow& row,
                     RelgenMode mode = RelgenMode::Strict);

struct RelgenOptions {
  unsigned jobs = 1;
  RelgenMode mode = RelgenMode::Strict;
  // Append Frobenius rows when the cosets alone give fewer than q^2 + 1.
  bool frobenius_topup = false;
};

// All accepted rows in coset order (then Frobenius rows in slot order if
// topped up), each re-verified, then augmented. Throws InsufficientRelations
// if fewer than q^2 + 1 rows were accepted.
RelationSet collect_relations(const FieldTower& F, const SetupInstance& setup,
                              const CosetSet& cosets, const RelgenOptions& options = {});

}  // namespace bgjt
