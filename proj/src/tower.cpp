#include "bgjt/tower.hpp"

#include <string>

#include "bgjt/error.hpp"

namespace bgjt {
namespace {

using FpPoly = std::vector<unsigned>;  // little-endian, coefficients mod p

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b over F_p.
FpPoly fp_mod(FpPoly a, const FpPoly& b, unsigned p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
    }
    trim(a);
  }
  return a;
}

FpPoly digits(unsigned index, unsigned p, unsigned len) {
  FpPoly d(len);
  for (unsigned i = 0; i < len; ++i) {
    d[i] = index % p;
    index /= p;
  }
  return d;
}

bool fp_irreducible(const FpPoly& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned idx = 0; idx < count; ++idx) {
      FpPoly g = digits(idx, p, d);
      g.push_back(1);
      if (fp_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

FieldTower FieldTower::build_structural(std::uint64_t p, unsigned n, unsigned k,
                                        std::uint64_t seed) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (n == 0 || k == 0) throw Error(ErrorKind::InvalidArgument, "n and k must be positive");
  const std::uint64_t q = ipow(p, n);
  if (k > q + 1) {
    throw Error(ErrorKind::RegimeViolation, "ring_poly has degree at most q + 1, got k=" +
                                                std::to_string(k));
  }
  FieldTower t = build_tables(p, n, k, seed);
  t.structural_ = true;
  return t;
}

FieldTower FieldTower::build(std::uint64_t p, unsigned n, unsigned k, std::uint64_t seed) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (n == 0 || k == 0) throw Error(ErrorKind::InvalidArgument, "n and k must be positive");
  const std::uint64_t q = ipow(p, n);
  if (q <= k) {
    throw Error(ErrorKind::RegimeViolation,
                "need k < q, got q=" + std::to_string(q) + " k=" + std::to_string(k));
  }
  return build_tables(p, n, k, seed);
}

FieldTower FieldTower::build_tables(std::uint64_t p, unsigned n, unsigned k, std::uint64_t seed) {
  const std::uint64_t q = ipow(p, n);
  if (q * q > 4096) throw Error(ErrorKind::ScaleTooLarge, "q^2 must be at most 4096");

  FieldTower t;
  t.p_ = p;
  t.n_ = n;
  t.k_ = k;
  t.seed_ = seed;
  t.q_ = static_cast<unsigned>(q);
  t.qq_ = static_cast<unsigned>(q * q);
  const unsigned P = static_cast<unsigned>(p);

  // F_q = F_p[t]/(g), g the least monic irreducible of degree n.
  if (n == 1) {
    t.fq_modulus_ = {0, 1};
  } else {
    for (unsigned idx = 0;; ++idx) {
      FpPoly g = digits(idx, P, n);
      g.push_back(1);
      if (fp_irreducible(g, P)) {
        t.fq_modulus_ = g;
        break;
      }
    }
  }
  const unsigned Q = t.q_;
  t.fq_add_.resize(Q * Q);
  t.fq_mul_.resize(Q * Q);
  t.fq_neg_.resize(Q);
  auto pack = [&](const FpPoly& d) {
    unsigned v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * P + d[i];
    return v;
  };
  for (unsigned a = 0; a < Q; ++a) {
    const FpPoly da = digits(a, P, n);
    FpPoly neg(n);
    for (unsigned i = 0; i < n; ++i) neg[i] = (P - da[i]) % P;
    t.fq_neg_[a] = pack(neg);
    for (unsigned b = 0; b < Q; ++b) {
      const FpPoly db = digits(b, P, n);
      FpPoly sum(n);
      for (unsigned i = 0; i < n; ++i) sum[i] = (da[i] + db[i]) % P;
      t.fq_add_[a * Q + b] = pack(sum);
      FpPoly prod(2 * n - 1, 0);
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % P;
      FpPoly r = n == 1 ? prod : fp_mod(prod, t.fq_modulus_, P);
      r.resize(n, 0);
      t.fq_mul_[a * Q + b] = pack(r);
    }
  }

  // F_{q^2} = F_q[y]/(y^2 + s*y + t): least (t, s) without a root in F_q.
  bool found = false;
  for (unsigned s = 0; s < Q && !found; ++s) {
    for (unsigned c = 0; c < Q && !found; ++c) {
      bool has_root = false;
      for (unsigned y = 0; y < Q && !has_root; ++y) {
        const unsigned val = t.fq_add(t.fq_add(t.fq_mul(y, y), t.fq_mul(s, y)), c);
        has_root = (val == 0);
      }
      if (!has_root) {
        t.qm2_s_ = s;
        t.qm2_t_ = c;
        found = true;
      }
    }
  }

  const unsigned QQ = t.qq_;
  t.add_.resize(QQ * QQ);
  t.mul_.resize(QQ * QQ);
  t.neg_.resize(QQ);
  for (unsigned a = 0; a < QQ; ++a) {
    const unsigned au = a % Q, av = a / Q;
    t.neg_[a] = static_cast<std::uint16_t>(t.fq_neg(au) + t.fq_neg(av) * Q);
    for (unsigned b = 0; b < QQ; ++b) {
      const unsigned bu = b % Q, bv = b / Q;
      t.add_[a * QQ + b] = static_cast<std::uint16_t>(t.fq_add(au, bu) + t.fq_add(av, bv) * Q);
      // (au + av y)(bu + bv y) with y^2 = -s y - t.
      const unsigned c0 = t.fq_mul(au, bu);
      const unsigned c1 = t.fq_add(t.fq_mul(au, bv), t.fq_mul(av, bu));
      const unsigned c2 = t.fq_mul(av, bv);
      const unsigned u = t.fq_add(c0, t.fq_neg(t.fq_mul(c2, t.qm2_t_)));
      const unsigned v = t.fq_add(c1, t.fq_neg(t.fq_mul(c2, t.qm2_s_)));
      t.mul_[a * QQ + b] = static_cast<std::uint16_t>(u + v * Q);
    }
  }
  t.inv_.assign(QQ, 0);
  for (unsigned a = 1; a < QQ; ++a)
    for (unsigned b = 1; b < QQ; ++b)
      if (t.mul_[a * QQ + b] == 1) {
        t.inv_[a] = static_cast<std::uint16_t>(b);
        break;
      }

  t.frob_.resize(QQ);
  t.pth_root_.resize(QQ);
  for (unsigned a = 0; a < QQ; ++a) {
    t.frob_[a] = t.pow(Fq2Elt{static_cast<std::uint16_t>(a)}, q).index;
    // a^(q^2/p) is the inverse of the p-th power map.
    t.pth_root_[a] = t.pow(Fq2Elt{static_cast<std::uint16_t>(a)}, QQ / P).index;
  }

  t.unit_factors_ = factor_integer(QQ - 1);
  for (unsigned a = 1; a < QQ; ++a) {
    const Fq2Elt cand{static_cast<std::uint16_t>(a)};
    if (t.order(cand) == QQ - 1) {
      t.lambda_ = cand;
      break;
    }
  }
  t.exp_.resize(QQ - 1);
  t.log_.assign(QQ, 0);
  Fq2Elt acc = one();
  for (unsigned i = 0; i + 1 < QQ; ++i) {
    t.exp_[i] = acc.index;
    t.log_[acc.index] = i;
    acc = t.mul(acc, t.lambda_);
  }
  return t;
}

Fq2Elt FieldTower::from_int(long long value) const {
  long long r = value % static_cast<long long>(p_);
  if (r < 0) r += static_cast<long long>(p_);
  // F_p sits in F_q as the constant digit.
  return Fq2Elt{static_cast<std::uint16_t>(r)};
}

Fq2Elt FieldTower::inv(Fq2Elt a) const {
  if (a.index == 0) throw Error(ErrorKind::ZeroElement, "inverse of zero in F_{q^2}");
  return Fq2Elt{inv_[a.index]};
}

Fq2Elt FieldTower::pow(Fq2Elt a, std::uint64_t e) const {
  Fq2Elt result = one();
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint64_t FieldTower::dlog(Fq2Elt a) const {
  if (a.index == 0) throw Error(ErrorKind::ZeroElement, "discrete log of zero");
  return log_[a.index];
}

std::uint64_t FieldTower::order(Fq2Elt a) const {
  if (a.index == 0) throw Error(ErrorKind::ZeroElement, "order of zero");
  std::uint64_t ord = qq_ - 1;
  for (const auto& [r, e] : unit_factors_) {
    for (unsigned i = 0; i < e; ++i) {
      if (pow(a, ord / r) == one()) {
        ord /= r;
      } else {
        break;
      }
    }
  }
  return ord;
}

}  // namespace bgjt
