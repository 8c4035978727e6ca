#include "bgjt/relgen.hpp"

#include <string>

#include "bgjt/error.hpp"
#include "bgjt/numtheory.hpp"
#include "bgjt/parallel.hpp"

namespace bgjt {

IntMat RelationSet::lattice() const {
  IntMat M(rows.size() + augmentation_rows(), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    M(r, 0) = static_cast<long>(rows[r].e0);
    for (std::size_t i = 0; i + 1 < width; ++i) M(r, i + 1) = rows[r].e[i];
  }
  if (augmented) {
    const std::size_t base = rows.size();
    M(base, 0) = static_cast<unsigned long>((width - 1) - 1);  // q^2 - 1
    Int order;
    mpz_import(order.get_mpz_t(), 1, 1, sizeof(group_order), 0, 0, &group_order);
    for (std::size_t i = 1; i < width; ++i) M(base + i, i) = order;
  }
  return M;
}

namespace {

bool has_linear_cofactor(const SetupInstance& setup) {
  for (const auto& cf : setup.cofactors) {
    if (cf.degree == 1) return true;
  }
  return false;
}

Poly product_of_linears(const FieldTower& F, const std::vector<int>& exps, bool positive) {
  PolyRing R(F);
  Poly acc = Poly::constant(FieldTower::one());
  for (unsigned slot = 0; slot < exps.size(); ++slot) {
    const int e = positive ? exps[slot] : -exps[slot];
    if (e > 0) acc = R.mul(acc, R.pow(Poly::linear(F.element(slot)), static_cast<unsigned>(e)));
  }
  return acc;
}

}  // namespace

std::optional<RelationRow> factor_base_relation(const FieldTower& F, const CosetRep& rep,
                                                const SetupInstance& setup, RelgenMode mode) {
  if (mode == RelgenMode::Strict && has_linear_cofactor(setup)) {
    throw Error(ErrorKind::LinearTrapPresent, "setup has a linear cofactor");
  }
  PolyRing R(F);
  const unsigned Q = F.field_size();
  const auto [a, b, c, d] = std::tuple{rep.a, rep.b, rep.c, rep.d};
  RelationRow row;
  row.lhs.assign(Q, 0);
  row.rhs.assign(Q, 0);

  // h1 (cx + d) prod_{alpha in F_q} ((a - alpha c) x + (b - alpha d))
  Fq2Elt unit_lhs = FieldTower::one();
  auto take_linear = [&](Fq2Elt lead, Fq2Elt constant) {
    if (lead.index == 0) {
      unit_lhs = F.mul(unit_lhs, constant);
    } else {
      unit_lhs = F.mul(unit_lhs, lead);
      ++row.lhs[F.div(constant, lead).index];
    }
  };
  for (unsigned alpha = 0; alpha < F.q(); ++alpha) {
    const Fq2Elt al = F.element(alpha);
    take_linear(F.sub(a, F.mul(al, c)), F.sub(b, F.mul(al, d)));
  }
  take_linear(c, d);
  if (setup.h1.degree() == 1) ++row.lhs[setup.h1.coeff(0).index];

  // (a^q h0 + b^q h1)(cx + d) - (ax + b)(c^q h0 + d^q h1)
  const Poly cx_d({d, c});
  const Poly ax_b({b, a});
  const Poly left = R.add(R.scale(setup.h0, F.frobenius(a)), R.scale(setup.h1, F.frobenius(b)));
  const Poly right = R.add(R.scale(setup.h0, F.frobenius(c)), R.scale(setup.h1, F.frobenius(d)));
  const Poly rhs = R.sub(R.mul(left, cx_d), R.mul(ax_b, right));
  if (rhs.is_zero()) return std::nullopt;
  const auto fac = is_smooth(F, rhs, 1);
  if (!fac) return std::nullopt;
  for (const auto& [g, mult] : fac->factors) row.rhs[g.coeff(0).index] += static_cast<int>(mult);

  const std::uint64_t unit_log = F.dlog(F.div(unit_lhs, fac->unit));
  row.e0 = static_cast<long long>(unit_log);
  row.e.resize(Q);
  for (unsigned i = 0; i < Q; ++i) row.e[i] = row.lhs[i] - row.rhs[i];
  return row;
}

bool verify_relation(const FieldTower& F, const SetupInstance& setup, const RelationRow& row,
                     RelgenMode mode) {
  PolyRing R(F);
  const Poly& m = setup.ring_poly;
  const Fq2Elt lam = F.lambda_pow(static_cast<std::uint64_t>(row.e0));
  // Gross form: lambda^{e0} prod lhs = prod rhs.
  const Poly gross_l = R.rem(R.scale(product_of_linears(F, row.lhs, true), lam), m);
  const Poly gross_r = R.rem(product_of_linears(F, row.rhs, true), m);
  if (gross_l != gross_r) return false;
  if (mode == RelgenMode::AllowTraps) return true;
  const Poly net_l = R.rem(R.scale(product_of_linears(F, row.e, true), lam), m);
  const Poly net_r = R.rem(product_of_linears(F, row.e, false), m);
  return net_l == net_r;
}

std::optional<RelationRow> frobenius_relation(const FieldTower& F, const SetupInstance& setup,
                                              unsigned slot, RelgenMode mode) {
  if (mode == RelgenMode::Strict && has_linear_cofactor(setup)) {
    throw Error(ErrorKind::LinearTrapPresent, "setup has a linear cofactor");
  }
  PolyRing R(F);
  const unsigned Q = F.field_size();
  const Fq2Elt alpha = F.element(slot);
  const Poly rhs = R.add(setup.h0, R.scale(setup.h1, F.frobenius(alpha)));
  if (rhs.is_zero()) return std::nullopt;
  const auto fac = is_smooth(F, rhs, 1);
  if (!fac) return std::nullopt;
  RelationRow row;
  row.source = RowSource::Frobenius;
  row.index = slot;
  row.lhs.assign(Q, 0);
  row.rhs.assign(Q, 0);
  row.lhs[slot] += static_cast<int>(F.q());
  if (setup.h1.degree() == 1) ++row.lhs[setup.h1.coeff(0).index];
  for (const auto& [g, mult] : fac->factors) row.rhs[g.coeff(0).index] += static_cast<int>(mult);
  row.e0 = static_cast<long long>(F.dlog(F.inv(fac->unit)));
  row.e.resize(Q);
  for (unsigned i = 0; i < Q; ++i) row.e[i] = row.lhs[i] - row.rhs[i];
  return row;
}

RelationSet collect_relations(const FieldTower& F, const SetupInstance& setup,
                              const CosetSet& cosets, const RelgenOptions& options) {
  const RelgenMode mode = options.mode;
  if (mode == RelgenMode::Strict && has_linear_cofactor(setup)) {
    throw Error(ErrorKind::LinearTrapPresent, "setup has a linear cofactor");
  }
  auto checked = [&](std::optional<RelationRow> row, const char* what, std::size_t i) {
    if (row && !verify_relation(F, setup, *row, mode)) {
      throw Error(ErrorKind::VerificationFailed,
                  std::string(what) + " relation " + std::to_string(i) + " failed reassembly");
    }
    return row;
  };
  auto trials = parallel_map<std::optional<RelationRow>>(
      cosets.reps.size(), options.jobs, [&](std::size_t i) {
        auto row = factor_base_relation(F, cosets.reps[i], setup, mode);
        if (row) row->index = i;
        return checked(std::move(row), "coset", i);
      });
  RelationSet set;
  set.width = F.field_size() + 1;
  set.group_order = ipow(F.field_size(), F.k()) - 1;
  for (auto& t : trials) {
    if (t) set.rows.push_back(std::move(*t));
  }
  set.coset_rows = set.rows.size();
  if (options.frobenius_topup && set.rows.size() < set.width) {
    auto extra = parallel_map<std::optional<RelationRow>>(
        F.field_size(), options.jobs, [&](std::size_t i) {
          return checked(frobenius_relation(F, setup, static_cast<unsigned>(i), mode), "frobenius",
                         i);
        });
    for (auto& t : extra) {
      if (t) set.rows.push_back(std::move(*t));
    }
    set.frobenius_rows = set.rows.size() - set.coset_rows;
  }
  if (set.rows.size() < set.width) {
    throw Error(ErrorKind::InsufficientRelations,
                "accepted " + std::to_string(set.rows.size()) + " relations, need at least " +
                    std::to_string(set.width));
  }
  set.augmented = true;
  return set;
}

}  // namespace bgjt
