#include "bgjt/descent.hpp"

#include "bgjt/error.hpp"
#include "bgjt/numtheory.hpp"
#include "bgjt/parallel.hpp"

namespace bgjt {

std::string to_string(TrapStatus s) {
  switch (s) {
    case TrapStatus::Clean: return "clean";
    case TrapStatus::TrapDivisor: return "trap_divisor";
    case TrapStatus::SharesFactor: return "shares_factor";
    case TrapStatus::IsModulus: return "is_modulus";
  }
  return "unknown";
}

TrapStatus trap_check(const FieldTower& F, const Poly& W, const SetupInstance& setup) {
  if (W == setup.f) return TrapStatus::IsModulus;
  if (W.degree() < 1 || W.degree() >= setup.f.degree() || !W.is_monic()) {
    throw Error(ErrorKind::DegreeOutOfRange,
                "trap_check needs a monic W with 1 <= deg < " + std::to_string(setup.f.degree()));
  }
  PolyRing R(F);
  const Poly g = R.gcd(W, setup.ring_poly);
  if (g.is_one()) return TrapStatus::Clean;
  if (g == W) return TrapStatus::TrapDivisor;
  return TrapStatus::SharesFactor;
}

Randomized randomize_trap(const FieldTower& F, const Poly& W, const SetupInstance& setup,
                          std::uint64_t bound) {
  if (trap_check(F, W, setup) == TrapStatus::Clean) {
    throw Error(ErrorKind::InvalidArgument, "randomize_trap called on a clean polynomial");
  }
  const ExtField ext(F, setup.f);
  const std::uint64_t N = ext.group_order();
  Poly V = ext.reduce(W);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    V = ext.mul(V, W);
    if (gcd_u64(i, N) != 1 || V.is_zero()) continue;
    if (ext.ring().gcd(V, setup.ring_poly).is_one()) return {V, i};
  }
  throw Error(ErrorKind::RandomizationExhausted,
              "no exponent up to " + std::to_string(bound) + " escapes ring_poly");
}

DescentVector descent_vector(const FieldTower& F, const CosetRep& rep) {
  DescentVector out;
  out.v.assign(F.field_size(), 0);
  out.unit = FieldTower::one();
  auto take = [&](Fq2Elt lead, Fq2Elt constant) {
    if (lead.index == 0) {
      out.unit = F.mul(out.unit, constant);
    } else {
      out.unit = F.mul(out.unit, lead);
      ++out.v[F.div(constant, lead).index];
    }
  };
  for (unsigned t = 0; t < F.q(); ++t) {
    const Fq2Elt te = F.element(t);
    take(F.sub(rep.a, F.mul(te, rep.c)), F.sub(rep.b, F.mul(te, rep.d)));
  }
  take(rep.c, rep.d);
  return out;
}

Poly descent_numerator(const FieldTower& F, const CosetRep& rep, const Poly& W,
                       const SetupInstance& setup) {
  PolyRing R(F);
  const unsigned w = static_cast<unsigned>(W.degree());
  // sum_j conj(c_j) h0^j h1^{w-j}
  std::vector<Poly> h1_pow(w + 1, Poly::constant(FieldTower::one()));
  for (unsigned j = 1; j <= w; ++j) h1_pow[j] = R.mul(h1_pow[j - 1], setup.h1);
  Poly Wh;
  Poly h0_pow = Poly::constant(FieldTower::one());
  for (unsigned j = 0; j <= w; ++j) {
    Wh = R.add(Wh, R.scale(R.mul(h0_pow, h1_pow[w - j]), F.frobenius(W.coeff(j))));
    h0_pow = R.mul(h0_pow, setup.h0);
  }
  const auto [a, b, c, d] = std::tuple{rep.a, rep.b, rep.c, rep.d};
  auto fr = [&](Fq2Elt e) { return F.frobenius(e); };
  const Fq2Elt A = F.sub(F.mul(fr(a), c), F.mul(a, fr(c)));
  const Fq2Elt B = F.sub(F.mul(fr(a), d), F.mul(b, fr(c)));
  const Fq2Elt C = F.sub(F.mul(fr(b), c), F.mul(a, fr(d)));
  const Fq2Elt D = F.sub(F.mul(fr(b), d), F.mul(b, fr(d)));
  const Poly& hw = h1_pow[w];
  Poly out = R.scale(R.mul(W, Wh), A);
  out = R.add(out, R.scale(Wh, B));
  out = R.add(out, R.scale(R.mul(W, hw), C));
  out = R.add(out, R.scale(hw, D));
  return out;
}

namespace {

struct CosetTrial {
  bool smooth = false;
  bool coprime = false;
  DescentRelation rel;
};

std::vector<CosetTrial> run_trials(const FieldTower& F, const SetupInstance& setup,
                                   const CosetSet& cosets, const Poly& W, unsigned bound,
                                   unsigned jobs) {
  return parallel_map<CosetTrial>(cosets.reps.size(), jobs, [&](std::size_t i) {
    CosetTrial t;
    const Poly Nm = descent_numerator(F, cosets.reps[i], W, setup);
    if (Nm.is_zero()) return t;
    auto fac = is_smooth(F, Nm, bound);
    if (!fac) return t;
    t.smooth = true;
    t.coprime = PolyRing(F).gcd(Nm, setup.ring_poly).is_one();
    t.rel.coset = i;
    t.rel.lhs = descent_vector(F, cosets.reps[i]);
    t.rel.rhs = std::move(*fac);
    return t;
  });
}

Int to_int(std::uint64_t v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

std::uint64_t mod_u64(const Int& v, std::uint64_t N) {
  Int r;
  const Int n = to_int(N);
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

}  // namespace

DescentStep try_descend_step(const FieldTower& F, const SetupInstance& setup,
                             const CosetSet& cosets, const Poly& W, unsigned jobs) {
  DescentStep step;
  step.W = W;
  const unsigned w = static_cast<unsigned>(W.degree());
  step.bound = (w + 1) / 2;
  for (auto& t : run_trials(F, setup, cosets, W, step.bound, jobs)) {
    if (!t.smooth) continue;
    ++step.smooth;
    if (!t.coprime) {
      ++step.trap_rejected;
      continue;
    }
    step.accepted.push_back(std::move(t.rel));
  }
  if (step.accepted.empty()) return step;

  const ExtField ext(F, setup.f);
  const std::uint64_t N = ext.group_order();
  const unsigned Q = F.field_size();
  IntMat L(step.accepted.size() + Q, Q);
  for (std::size_t r = 0; r < step.accepted.size(); ++r) {
    for (unsigned i = 0; i < Q; ++i) L(r, i) = step.accepted[r].lhs.v[i];
  }
  for (unsigned i = 0; i < Q; ++i) L(step.accepted.size() + i, i) = to_int(N);
  IntVec target(Q);
  target[0] = 1;
  const auto sol = solve_membership(L, target);
  if (!sol) return step;

  // W = prod_m (N_m / (unit_m h1^w))^{c_m}
  DescentExpression e;
  std::map<Poly, std::uint64_t> exps;
  std::uint64_t lam = 0, csum = 0;
  const std::uint64_t small = Q - 1;
  for (std::size_t r = 0; r < step.accepted.size(); ++r) {
    const std::uint64_t c = mod_u64((*sol)[r], N);
    if (c == 0) continue;
    const auto& rel = step.accepted[r];
    const std::uint64_t unit_log = (F.dlog(rel.rhs.unit) + small - F.dlog(rel.lhs.unit)) % small;
    lam = (lam + mulmod(c % small, unit_log, small)) % small;
    csum = (csum + c) % N;
    for (const auto& [g, m] : rel.rhs.factors) {
      auto& slot = exps[g];
      slot = (slot + mulmod(c, m, N)) % N;
    }
  }
  e.lambda_exp = lam;
  e.h1_exp = setup.h1.degree() == 0 ? 0 : (N - mulmod(w, csum, N)) % N;
  for (auto& [g, x] : exps) {
    if (x != 0) e.factors.emplace_back(g, x);
  }
  Poly check = Poly::constant(F.lambda_pow(e.lambda_exp));
  if (e.h1_exp != 0) check = ext.mul(check, ext.pow(setup.h1, e.h1_exp));
  for (const auto& [g, x] : e.factors) check = ext.mul(check, ext.pow(g, x));
  if (check != ext.reduce(W)) {
    throw Error(ErrorKind::VerificationFailed, "descent expression does not evaluate to W");
  }
  step.expression = std::move(e);
  return step;
}

DescentExpression descend_step(const FieldTower& F, const SetupInstance& setup,
                               const CosetSet& cosets, const Poly& W, unsigned jobs) {
  if (W.degree() < 2) {
    throw Error(ErrorKind::DegreeOutOfRange, "descend_step needs deg W >= 2");
  }
  if (trap_check(F, W, setup) != TrapStatus::Clean) {
    throw Error(ErrorKind::InvalidArgument, "descend_step needs a clean W");
  }
  DescentStep step = try_descend_step(F, setup, cosets, W, jobs);
  if (!step.expression) {
    throw Error(ErrorKind::DescentStuck,
                PolyRing(F).to_string(W) + ": " + std::to_string(step.accepted.size()) +
                    " accepted relations do not reach (1,0,...,0)");
  }
  return *step.expression;
}

TrapSweep trap_sweep(const FieldTower& F, const SetupInstance& setup, const CosetSet& cosets,
                     const Poly& W, unsigned jobs) {
  TrapSweep out;
  out.W = W;
  out.irreducible = is_irreducible(F, W);
  const unsigned w = static_cast<unsigned>(W.degree());
  for (const auto& t : run_trials(F, setup, cosets, W, (w + 1) / 2, jobs)) {
    if (!t.smooth) continue;
    const bool e1 = t.rel.lhs.v[0] != 0;
    ++out.smooth;
    out.smooth_e1 += e1;
    if (t.coprime) {
      ++out.coprime;
      out.coprime_e1 += e1;
    }
  }
  return out;
}

Descender::Descender(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
                     const CosetSet& cosets, DescentOptions options)
    : F_(F), setup_(setup), table_(table), cosets_(cosets), options_(options), ext_(F, setup.f) {}

DlogResult Descender::full_dlog(const Poly& target) {
  const Poly T = ext_.reduce(target);
  if (T.is_zero()) throw Error(ErrorKind::InvalidArgument, "target is zero mod f");
  DlogResult out;
  out.trace.push_back(TraceNode{T, "target", TrapStatus::Clean, 0, 0, 0, {}});
  out.log = log_of_poly(T, out, 0);
  out.trace[0].log = out.log;
  const Poly base = Poly::linear(F_.element(table_.base_slot));
  out.verified = ext_.pow(base, out.log) == T;
  if (!out.verified) {
    throw Error(ErrorKind::VerificationFailed, "base^log does not reproduce the target");
  }
  return out;
}

std::uint64_t Descender::log_of_poly(const Poly& P, DlogResult& out, std::size_t node) {
  const std::uint64_t N = ext_.group_order();
  const Factorization fac = factorize(F_, P);
  std::uint64_t log = constant_log(F_, table_, fac.unit);
  for (const auto& [g, m] : fac.factors) {
    log = (log + mulmod(m, log_irreducible(g, out, node), N)) % N;
  }
  return log;
}

std::uint64_t Descender::log_expression(const DescentExpression& e, DlogResult& out,
                                        std::size_t node) {
  const std::uint64_t N = ext_.group_order();
  std::uint64_t log = mulmod(e.lambda_exp, table_.log_lambda, N);
  if (e.h1_exp != 0) {
    log = (log + mulmod(e.h1_exp, table_.log_of(setup_.h1.coeff(0)), N)) % N;
  }
  for (const auto& [g, x] : e.factors) {
    log = (log + mulmod(x, log_irreducible(g, out, node), N)) % N;
  }
  return log;
}

std::uint64_t Descender::log_irreducible(const Poly& P, DlogResult& out, std::size_t parent) {
  const std::size_t node = out.trace.size();
  out.trace[parent].children.push_back(node);
  out.trace.push_back(TraceNode{P, "", TrapStatus::Clean, 0, 0, 0, {}});
  const std::uint64_t N = ext_.group_order();
  auto finish = [&](std::uint64_t log, const char* method) {
    out.trace[node].method = method;
    out.trace[node].log = log;
    return log;
  };
  if (P.degree() == 1) return finish(table_.log_of(P.coeff(0)), "table");
  if (auto it = memo_.find(P); it != memo_.end()) return finish(it->second, "memo");

  // log W = i^{-1} log V for V = W^i mod f.
  auto via_power = [&](const Poly& V, std::uint64_t i) {
    out.trace[node].exponent = i;
    const std::uint64_t lv = log_of_poly(V, out, node);
    return mulmod(invmod(i % N, N), lv, N);
  };

  const TrapStatus status = trap_check(F_, P, setup_);
  out.trace[node].status = status;
  std::uint64_t log = 0;
  const char* method = "";
  if (status != TrapStatus::Clean) {
    const Randomized r = randomize_trap(F_, P, setup_, options_.randomize_bound);
    ++out.trap_nodes;
    log = via_power(r.V, r.exponent);
    method = "trap";
  } else {
    DescentStep step = try_descend_step(F_, setup_, cosets_, P, options_.jobs);
    out.trace[node].accepted = step.accepted.size();
    if (step.expression) {
      ++out.qpa_nodes;
      log = log_expression(*step.expression, out, node);
      method = "qpa";
    } else {
      ++out.stuck_nodes;
      out.stuck.push_back(P);
      if (!options_.rescue) {
        throw Error(ErrorKind::DescentStuck,
                    PolyRing(F_).to_string(P) + ": (1,0,...,0) not in L(W) from " +
                        std::to_string(step.accepted.size()) + " relations");
      }
      const PolyRing& R = ext_.ring();
      Poly V = ext_.reduce(P);
      std::uint64_t i = 1;
      bool found = false;
      while (!found) {
        if (++i > options_.randomize_bound) {
          throw Error(ErrorKind::RandomizationExhausted,
                      "no power of " + R.to_string(P) + " splits below its degree");
        }
        V = ext_.mul(V, P);
        if (gcd_u64(i, N) != 1 || V.degree() < 0) continue;
        if (!R.gcd(V, setup_.ring_poly).is_one()) continue;
        if (V.degree() == 0) {
          found = true;
        } else {
          const unsigned bound = static_cast<unsigned>(P.degree() - 1);
          found = is_smooth(F_, V, bound).has_value();
        }
      }
      ++out.rescued_nodes;
      log = via_power(V, i);
      method = "rescue";
    }
  }
  const Poly base = Poly::linear(F_.element(table_.base_slot));
  if (ext_.pow(base, log) != ext_.reduce(P)) {
    throw Error(ErrorKind::VerificationFailed, "node log failed: " + ext_.ring().to_string(P));
  }
  memo_.emplace(P, log);
  return finish(log, method);
}

DlogResult full_dlog(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
                     const CosetSet& cosets, const Poly& target, const DescentOptions& options) {
  Descender d(F, setup, table, cosets, options);
  return d.full_dlog(target);
}

}  // namespace bgjt
