#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgjt/extfield.hpp"
#include "bgjt/relgen.hpp"

namespace bgjt {

struct SmithShapeReport {
  IntVec diagonal;
  std::size_t unit_count = 0;
  IntVec s_values;
  Int final_invariant;
  bool conforms = false;
};

// Shape of the Smith diagonal of the augmented lattice: ones, then small
// factors dividing q^2 - 1, then q^{2k} - 1 exactly once.
SmithShapeReport check_heuristic1(const FieldTower& F, const RelationSet& relset);

struct CorrectionRow {
  std::size_t round = 0;
  Int invariant;         // order of the component the generator belongs to
  Int multiplier;        // 1 for s_i components, N / (q^2 - 1) for the full one
  Fq2Elt value{};        // the generator evaluated mod f
  std::vector<Int> row;  // lambda exponent first, then factor base
};

struct DlogTable {
  unsigned base_slot = 0;  // base = x + alpha_{base_slot}
  std::uint64_t group_order = 0;
  std::vector<std::uint64_t> logs;  // per factor base slot
  std::uint64_t log_lambda = 0;
  std::vector<CorrectionRow> corrections;
  std::size_t rounds = 0;
  std::string setup_hash;

  std::uint64_t log_of(Fq2Elt alpha) const { return logs[alpha.index]; }
};

struct LinlogOptions {
  // Correction rounds before giving up on cyclicity.
  std::size_t max_rounds = 4;
};

// Factor base logs to the least full-order x + alpha. Requires a conforming
// shape; throws GeneratorNotInSubfield or NotCyclicAfterCorrection, and
// VerificationFailed if any entry fails its exponentiation check.
DlogTable solve_factor_base(const FieldTower& F, const SetupInstance& setup,
                            const RelationSet& relset, const LinlogOptions& options = {});

// Log of an element of F_{q^2}* (a constant mod f) in the table's base.
std::uint64_t constant_log(const FieldTower& F, const DlogTable& table, Fq2Elt c);

// base^log == x + alpha mod f for every slot, and lambda likewise.
bool verify_table(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
                  unsigned jobs = 1);

}  // namespace bgjt
