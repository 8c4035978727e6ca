#include "bgjt/poly.hpp"

#include <algorithm>
#include <sstream>

#include "bgjt/error.hpp"

namespace bgjt {

std::uint64_t Poly::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& c : c_) {
    h ^= c.index;
    h *= 1099511628211ULL;
  }
  return h;
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
  std::vector<Fq2Elt> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F_->add(a.coeff(i), b.coeff(i));
  return Poly(std::move(out));
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const {
  std::vector<Fq2Elt> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F_->sub(a.coeff(i), b.coeff(i));
  return Poly(std::move(out));
}

Poly PolyRing::neg(const Poly& a) const {
  std::vector<Fq2Elt> out(a.coeffs());
  for (auto& c : out) c = F_->neg(c);
  return Poly(std::move(out));
}

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<Fq2Elt> out(ac.size() + bc.size() - 1);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].index == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      out[i + j] = F_->add(out[i + j], F_->mul(ac[i], bc[j]));
    }
  }
  return Poly(std::move(out));
}

Poly PolyRing::scale(const Poly& a, Fq2Elt s) const {
  std::vector<Fq2Elt> out(a.coeffs());
  for (auto& c : out) c = F_->mul(c, s);
  return Poly(std::move(out));
}

std::pair<Poly, Poly> PolyRing::divmod(const Poly& a, const Poly& b) const {
  if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<Fq2Elt> r(a.coeffs());
  const std::size_t db = static_cast<std::size_t>(b.degree());
  const Fq2Elt inv_lead = F_->inv(b.leading());
  std::vector<Fq2Elt> quot(r.size() - db);
  const auto& bc = b.coeffs();
  for (std::size_t i = r.size(); i-- > db;) {
    const Fq2Elt factor = F_->mul(r[i], inv_lead);
    quot[i - db] = factor;
    if (factor.index == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) {
      r[i - db + j] = F_->sub(r[i - db + j], F_->mul(factor, bc[j]));
    }
  }
  r.resize(db);
  return {Poly(std::move(quot)), Poly(std::move(r))};
}

Poly PolyRing::monic(const Poly& a) const {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a, F_->inv(a.leading()));
}

Poly PolyRing::gcd(const Poly& a, const Poly& b) const {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::BothZero, "gcd(0, 0)");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

Poly PolyRing::derivative(const Poly& a) const {
  if (a.degree() < 1) return {};
  std::vector<Fq2Elt> out(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
    out[i - 1] = F_->mul(F_->from_int(static_cast<long long>(i)), a.coeff(i));
  }
  return Poly(std::move(out));
}

Poly PolyRing::pow(const Poly& a, std::uint64_t e) const {
  Poly result = Poly::constant(FieldTower::one());
  Poly base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

Poly PolyRing::powmod(Poly a, std::uint64_t e, const Poly& m) const {
  Poly result = rem(Poly::constant(FieldTower::one()), m);
  a = rem(a, m);
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    e >>= 1;
    if (e) a = mulmod(a, a, m);
  }
  return result;
}

Poly PolyRing::frobenius_coeffs(const Poly& a) const {
  std::vector<Fq2Elt> out(a.coeffs());
  for (auto& c : out) c = F_->frobenius(c);
  return Poly(std::move(out));
}

Fq2Elt PolyRing::eval(const Poly& a, Fq2Elt x) const {
  Fq2Elt acc = FieldTower::zero();
  for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), a.coeff(i));
  return acc;
}

Poly PolyRing::field_poly() const {
  std::vector<Fq2Elt> c(F_->field_size() + 1);
  c.back() = FieldTower::one();
  c[1] = F_->neg(FieldTower::one());
  return Poly(std::move(c));
}

namespace {

std::string elt_string(const FieldTower& F, Fq2Elt e) {
  const unsigned u = F.coord_u(e), v = F.coord_v(e);
  std::ostringstream os;
  if (v == 0) {
    os << u;
  } else if (u == 0) {
    os << (v == 1 ? "" : std::to_string(v) + "*") << "g";
  } else {
    os << u << "+" << (v == 1 ? "" : std::to_string(v) + "*") << "g";
  }
  return os.str();
}

}  // namespace

std::string PolyRing::to_string(const Poly& a) const {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    const Fq2Elt c = a.coeff(i);
    if (c.index == 0) continue;
    if (!first) os << " + ";
    first = false;
    const std::string cs = elt_string(*F_, c);
    const bool compound = F_->coord_v(c) != 0;
    if (i == 0) {
      os << cs;
      continue;
    }
    if (c != FieldTower::one()) os << (compound ? "(" + cs + ")" : cs);
    os << "x";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

}  // namespace bgjt
