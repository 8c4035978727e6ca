#include "bgjt/extfield.hpp"

#include <bit>
#include <utility>

#include "bgjt/error.hpp"

namespace bgjt {

ExtField::ExtField(const FieldTower& field, Poly modulus)
    : ring_(field), f_(ring_.monic(modulus)) {
  if (f_.degree() < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be nonconstant");
  order_ = ipow(field.field_size(), static_cast<unsigned>(f_.degree())) - 1;
  factors_ = factor_integer(order_);
}

Poly ExtField::inv(const Poly& a) const {
  const Poly r = reduce(a);
  if (r.is_zero()) throw Error(ErrorKind::ZeroElement, "inverse of zero in extension field");
  // Extended Euclid tracking the cofactor of a.
  Poly old_r = r, cur_r = f_;
  Poly old_s = Poly::constant(FieldTower::one()), cur_s;
  while (!cur_r.is_zero()) {
    auto [quot, rem] = ring_.divmod(old_r, cur_r);
    old_r = std::exchange(cur_r, std::move(rem));
    Poly next_s = ring_.sub(old_s, ring_.mul(quot, cur_s));
    old_s = std::exchange(cur_s, std::move(next_s));
  }
  if (old_r.degree() != 0) throw Error(ErrorKind::ZeroElement, "element not invertible");
  return reduce(ring_.scale(old_s, field().inv(old_r.leading())));
}

Poly ExtField::pow_signed(const Poly& a, long long e) const {
  long long m = e % static_cast<long long>(order_);
  if (m < 0) m += static_cast<long long>(order_);
  return pow(a, static_cast<std::uint64_t>(m));
}

std::uint64_t ExtField::pack(const Poly& reduced) const {
  const unsigned bits = std::bit_width(field().field_size() - 1);
  std::uint64_t key = 0;
  for (std::size_t i = reduced.coeffs().size(); i-- > 0;) {
    key = (key << bits) | reduced.coeff(i).index;
  }
  return key;
}

std::uint64_t multiplicative_order(const ExtField& ext, const Poly& elt,
                                   const std::vector<PrimePower>& group_order_factorization) {
  std::uint64_t product = 1;
  for (const auto& [r, e] : group_order_factorization) {
    if (!is_prime(r)) throw Error(ErrorKind::BadFactorization, "non-prime in factorization");
    product *= ipow(r, e);
  }
  if (product != ext.group_order()) {
    throw Error(ErrorKind::BadFactorization, "prime powers do not multiply to the group order");
  }
  const Poly a = ext.reduce(elt);
  if (a.is_zero()) throw Error(ErrorKind::ZeroElement, "order of zero");
  std::uint64_t ord = ext.group_order();
  for (const auto& [r, e] : group_order_factorization) {
    for (unsigned i = 0; i < e; ++i) {
      if (ext.pow(a, ord / r).is_one()) {
        ord /= r;
      } else {
        break;
      }
    }
  }
  return ord;
}

}  // namespace bgjt
