#include "bgjt/pgl.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "bgjt/error.hpp"
#include "bgjt/parallel.hpp"
#include "bgjt/zlattice.hpp"

namespace bgjt {
namespace {

// Homogeneous coordinates (x0 : x1).
struct Hom {
  Fq2Elt x0, x1;
};

Hom point_hom(const FieldTower& F, PointId id) {
  if (id == F.field_size()) return {FieldTower::one(), FieldTower::zero()};
  return {F.element(id), FieldTower::one()};
}

PointId hom_point(const FieldTower& F, Hom h) {
  if (h.x1.index == 0) return static_cast<PointId>(F.field_size());
  return F.div(h.x0, h.x1).index;
}

// Image of (x0 : x1) under (a b; c d).
Hom apply(const FieldTower& F, Fq2Elt a, Fq2Elt b, Fq2Elt c, Fq2Elt d, Hom h) {
  return {F.add(F.mul(a, h.x0), F.mul(b, h.x1)), F.add(F.mul(c, h.x0), F.mul(d, h.x1))};
}

// Sorted image of P^1(F_q) under the matrix n = (a b; c d).
std::vector<PointId> subline(const FieldTower& F, Fq2Elt a, Fq2Elt b, Fq2Elt c, Fq2Elt d) {
  std::vector<PointId> pts;
  pts.reserve(F.q() + 1);
  for (unsigned beta = 0; beta < F.q(); ++beta) {
    pts.push_back(hom_point(F, apply(F, a, b, c, d, {F.element(beta), FieldTower::one()})));
  }
  pts.push_back(hom_point(F, apply(F, a, b, c, d, {FieldTower::one(), FieldTower::zero()})));
  std::sort(pts.begin(), pts.end());
  return pts;
}

// The map sending infinity -> A, 0 -> B, 1 -> C, as columns (lA | mB) with
// lA + mB proportional to C.
std::array<Fq2Elt, 4> three_point_map(const FieldTower& F, PointId A, PointId B, PointId C) {
  const Hom ha = point_hom(F, A), hb = point_hom(F, B), hc = point_hom(F, C);
  // Solve l*ha + m*hb = hc by Cramer's rule.
  const Fq2Elt det = F.sub(F.mul(ha.x0, hb.x1), F.mul(hb.x0, ha.x1));
  const Fq2Elt l = F.div(F.sub(F.mul(hc.x0, hb.x1), F.mul(hb.x0, hc.x1)), det);
  const Fq2Elt m = F.div(F.sub(F.mul(ha.x0, hc.x1), F.mul(hc.x0, ha.x1)), det);
  return {F.mul(l, ha.x0), F.mul(m, hb.x0), F.mul(l, ha.x1), F.mul(m, hb.x1)};
}

std::vector<long long> sum_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                const std::vector<std::size_t>& which, std::size_t width) {
  std::vector<long long> acc(width, 0);
  for (std::size_t r : which)
    for (std::size_t c = 0; c < width; ++c) acc[c] += rows[r][c];
  return acc;
}

}  // namespace

std::optional<std::size_t> CosetSet::find(const std::vector<PointId>& support) const {
  auto it = by_support.find(support);
  if (it == by_support.end()) return std::nullopt;
  return it->second;
}

std::vector<PointId> coset_support(const FieldTower& F, Fq2Elt a, Fq2Elt b, Fq2Elt c, Fq2Elt d) {
  // m^{-1} is proportional to the adjugate (d -b; -c a).
  return subline(F, d, F.neg(b), F.neg(c), a);
}

CosetSet enumerate_cosets(const FieldTower& F, unsigned jobs) {
  const unsigned points = F.field_size() + 1;
  CosetSet set;
  set.q = F.q();
  // Each subline is emitted only from its three smallest points.
  auto per_first = parallel_map<std::vector<CosetRep>>(points, jobs, [&](std::size_t A) {
    std::vector<CosetRep> out;
    for (unsigned B = static_cast<unsigned>(A) + 1; B < points; ++B) {
      for (unsigned C = B + 1; C < points; ++C) {
        const auto n = three_point_map(F, static_cast<PointId>(A), static_cast<PointId>(B),
                                       static_cast<PointId>(C));
        auto pts = subline(F, n[0], n[1], n[2], n[3]);
        if (pts[0] != A || pts[1] != B || pts[2] != C) continue;
        // m = n^{-1} ~ adj(n).
        out.push_back({n[3], F.neg(n[1]), F.neg(n[2]), n[0], std::move(pts)});
      }
    }
    return out;
  });
  for (auto& chunk : per_first)
    for (auto& rep : chunk) set.reps.push_back(std::move(rep));
  std::sort(set.reps.begin(), set.reps.end(),
            [](const CosetRep& x, const CosetRep& y) { return x.support < y.support; });
  for (std::size_t i = 0; i < set.reps.size(); ++i) set.by_support.emplace(set.reps[i].support, i);
  return set;
}

std::vector<std::uint8_t> row_vector(const FieldTower& F, const CosetRep& rep) {
  std::vector<std::uint8_t> v(F.field_size() + 1, 0);
  for (PointId p : rep.support) v[p] = 1;
  return v;
}

RowVectors build_row_vectors(const FieldTower& F, const CosetSet& cosets) {
  RowVectors rv;
  for (const auto& rep : cosets.reps) {
    auto v = row_vector(F, rep);
    rv.H.emplace_back(v.begin(), v.end() - 1);
    rv.Hplus.push_back(std::move(v));
  }
  return rv;
}

Theorem4Certificate verify_theorem4(const FieldTower& F, const CosetSet& cosets) {
  const long long q = F.q();
  const std::size_t width = F.field_size() + 1;
  const std::size_t last = width - 1;
  const RowVectors rv = build_row_vectors(F, cosets);
  const std::size_t rows = rv.Hplus.size();
  Theorem4Certificate cert;

  std::vector<std::size_t> all(rows), first, first_last;
  for (std::size_t r = 0; r < rows; ++r) {
    all[r] = r;
    if (rv.Hplus[r][0]) first.push_back(r);
    if (rv.Hplus[r][0] && rv.Hplus[r][last]) first_last.push_back(r);
  }
  std::vector<std::size_t> translations;
  for (unsigned beta = 0; beta < F.q(); ++beta) {
    // m_beta = (1, beta*gamma; 0, 1)
    const Fq2Elt bg = F.mul(F.element(beta), F.gamma());
    auto idx = cosets.find(coset_support(F, FieldTower::one(), bg, FieldTower::zero(), FieldTower::one()));
    if (!idx) throw Error(ErrorKind::CertificateMismatch, "translation coset missing");
    translations.push_back(*idx);
  }
  cert.first_last_rows = first_last.size();
  cert.v1 = sum_rows(rv.Hplus, all, width);
  cert.v2 = sum_rows(rv.Hplus, first, width);
  cert.v3 = sum_rows(rv.Hplus, translations, width);
  cert.v4 = sum_rows(rv.Hplus, first_last, width);
  cert.v5.resize(width);
  cert.v6.resize(width);
  cert.v7.resize(width);
  for (std::size_t c = 0; c < width; ++c) {
    cert.v5[c] = cert.v2[c] - (q + 1) * cert.v3[c];
    cert.v6[c] = cert.v4[c] - cert.v3[c];
    cert.v7[c] = q * cert.v6[c] - cert.v5[c];
  }

  // Row coefficients of v7 = q(v4 - v3) - (v2 - (q+1) v3) = q v4 + v3 - v2.
  std::vector<long long> coeff(rows, 0);
  for (std::size_t r : first_last) coeff[r] += q;
  for (std::size_t r : translations) coeff[r] += 1;
  for (std::size_t r : first) coeff[r] -= 1;
  cert.constructive_coefficients = coeff;
  std::vector<long long> check(width, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c) check[c] += coeff[r] * rv.Hplus[r][c];
  bool ok = check == cert.v7 && cert.v7[0] == 1;
  for (std::size_t c = 1; c < last; ++c) ok = ok && cert.v7[c] == 0;
  cert.constructive_ok = ok;

  IntMat H(rows, width - 1);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c + 1 < width; ++c) H(r, c) = rv.H[r][c];
  IntVec target(width - 1, 0);
  target[0] = 1;
  if (auto sol = solve_membership(H, target)) {
    cert.hnf_ok = true;
    cert.hnf_coefficients = std::move(*sol);
  }
  if (!cert.constructive_ok || !cert.hnf_ok) {
    std::ostringstream os;
    os << "theorem 4 certificate failed: constructive=" << cert.constructive_ok
       << " hnf=" << cert.hnf_ok;
    throw Error(ErrorKind::CertificateMismatch, os.str());
  }
  return cert;
}

}  // namespace bgjt
