#include "bgjt/linlog.hpp"

#include <atomic>

#include "bgjt/error.hpp"
#include "bgjt/numtheory.hpp"
#include "bgjt/parallel.hpp"

namespace bgjt {

namespace {

Int to_int(std::uint64_t v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

std::uint64_t to_u64(const Int& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    throw std::logic_error("linlog: value out of uint64 range");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

SmithShapeReport shape_of(const IntVec& diagonal, std::uint64_t small, std::uint64_t order) {
  SmithShapeReport rep;
  rep.diagonal = diagonal;
  const Int N = to_int(order), s = to_int(small);
  std::size_t i = 0;
  while (i < diagonal.size() && diagonal[i] == 1) ++i;
  rep.unit_count = i;
  bool ok = true;
  for (; i + 1 < diagonal.size(); ++i) {
    rep.s_values.push_back(diagonal[i]);
    if (!(diagonal[i] > 1 && mpz_divisible_p(s.get_mpz_t(), diagonal[i].get_mpz_t()))) ok = false;
  }
  if (i < diagonal.size()) rep.final_invariant = diagonal[i];
  rep.conforms = ok && !diagonal.empty() && rep.final_invariant == N;
  return rep;
}

// lambda^{row[0]} prod (x + alpha_i)^{row[i + 1]} mod f, exponents taken mod N.
Poly evaluate_monomial(const FieldTower& F, const ExtField& ext, const std::vector<Int>& row) {
  const Int N = to_int(ext.group_order());
  Poly acc = Poly::constant(F.lambda_pow(to_u64(row[0] % to_int(F.field_size() - 1))));
  for (std::size_t i = 1; i < row.size(); ++i) {
    Int e = row[i] % N;
    if (e < 0) e += N;
    if (e == 0) continue;
    acc = ext.mul(acc, ext.pow(Poly::linear(F.element(static_cast<unsigned>(i - 1))), to_u64(e)));
  }
  return acc;
}

}  // namespace

SmithShapeReport check_heuristic1(const FieldTower& F, const RelationSet& relset) {
  const ModSnfResult s = snf_mod(relset.lattice(), to_int(relset.group_order));
  return shape_of(s.diagonal, F.field_size() - 1, relset.group_order);
}

DlogTable solve_factor_base(const FieldTower& F, const SetupInstance& setup,
                            const RelationSet& relset, const LinlogOptions& options) {
  const ExtField ext(F, setup.f);
  const std::uint64_t order = ext.group_order();
  const Int N = to_int(order);
  const std::size_t n = relset.width;
  IntMat M = relset.lattice();

  DlogTable table;
  table.group_order = order;
  ModSnfResult s = snf_mod(M, N);
  if (!shape_of(s.diagonal, F.field_size() - 1, order).conforms) {
    throw Error(ErrorKind::NotCyclicAfterCorrection,
                "smith shape does not conform: " + to_string(s.diagonal));
  }
  for (;;) {
    std::size_t small = 0;
    for (const auto& d : s.diagonal) small += (d != 1 && d != N);
    if (small == 0) break;
    if (table.rounds == options.max_rounds) {
      throw Error(ErrorKind::NotCyclicAfterCorrection,
                  "quotient still " + to_string(s.diagonal) + " after " +
                      std::to_string(table.rounds) + " correction rounds");
    }
    ++table.rounds;
    // Each s_i generator has order dividing q^2 - 1 and so evaluates into
    // F_{q^2}*. The same holds for the (q^2 - 1)-torsion of the full
    // component; without that row lambda's class can stay entangled with an
    // s_i part and the corrections land back in the lattice.
    const Int small_order = to_int(F.field_size() - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const Int& d = s.diagonal[j];
      if (d == 1) continue;
      if (d == N && N == small_order) continue;
      CorrectionRow corr;
      corr.round = table.rounds;
      corr.invariant = d;
      corr.multiplier = d == N ? N / small_order : Int(1);
      corr.row = s.Vinv.row(j);
      for (auto& x : corr.row) x = x * corr.multiplier % N;
      const Poly value = evaluate_monomial(F, ext, corr.row);
      if (value.degree() != 0) {
        throw Error(ErrorKind::GeneratorNotInSubfield,
                    "generator of the order-" + d.get_str() + " component has degree " +
                        std::to_string(value.degree()) + " mod f");
      }
      corr.value = value.coeff(0);
      corr.row[0] -= to_int(F.dlog(corr.value));
      M.append_row(corr.row);
      table.corrections.push_back(std::move(corr));
    }
    s = snf_mod(M, N);
  }

  std::size_t cyclic = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (s.diagonal[j] == N) cyclic = j;
  }
  if (cyclic == n) {
    throw Error(ErrorKind::NotCyclicAfterCorrection, "no component of full order");
  }
  auto raw = [&](std::size_t col) {
    Int v = s.V(col, cyclic) % N;
    if (v < 0) v += N;
    return v;
  };

  const auto& factors = ext.group_factors();
  unsigned base = F.field_size();
  for (unsigned slot = 0; slot < F.field_size(); ++slot) {
    if (multiplicative_order(ext, Poly::linear(F.element(slot)), factors) == order) {
      base = slot;
      break;
    }
  }
  if (base == F.field_size()) {
    throw Error(ErrorKind::VerificationFailed, "no factor base element generates the group");
  }
  Int scale;
  const Int base_raw = raw(base + 1);
  if (mpz_invert(scale.get_mpz_t(), base_raw.get_mpz_t(), N.get_mpz_t()) == 0) {
    throw Error(ErrorKind::VerificationFailed, "base coordinate is not a unit");
  }
  table.base_slot = base;
  table.log_lambda = to_u64(raw(0) * scale % N);
  table.logs.resize(F.field_size());
  for (unsigned slot = 0; slot < F.field_size(); ++slot) {
    table.logs[slot] = to_u64(raw(slot + 1) * scale % N);
  }
  if (!verify_table(F, setup, table)) {
    throw Error(ErrorKind::VerificationFailed, "factor base log failed exponentiation check");
  }
  return table;
}

std::uint64_t constant_log(const FieldTower& F, const DlogTable& table, Fq2Elt c) {
  // lambda = base^{log_lambda}, and lambda^{dlog(c)} = c.
  return mulmod(table.log_lambda, F.dlog(c), table.group_order);
}

bool verify_table(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
                  unsigned jobs) {
  const ExtField ext(F, setup.f);
  const Poly base = Poly::linear(F.element(table.base_slot));
  if (ext.pow(base, table.log_lambda) != Poly::constant(F.lambda())) return false;
  std::atomic<bool> ok{true};
  parallel_for(F.field_size(), jobs, [&](std::size_t slot) {
    const Poly target = Poly::linear(F.element(static_cast<unsigned>(slot)));
    if (ext.pow(base, table.logs[slot]) != target) ok = false;
  });
  return ok;
}

}  // namespace bgjt
