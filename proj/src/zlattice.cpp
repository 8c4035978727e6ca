#include "bgjt/zlattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bgjt {

IntMat IntMat::identity(std::size_t n) {
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
  IntMat m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("IntMat: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntVec IntMat::row(std::size_t r) const {
  return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void IntMat::append_row(const IntVec& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw std::invalid_argument("IntMat: row width mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

IntMat IntMat::operator*(const IntMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("IntMat: shape mismatch");
  IntMat out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        mpz_addmul(out(i, j).get_mpz_t(), a.get_mpz_t(), o(k, j).get_mpz_t());
      }
    }
  }
  return out;
}

void IntMat::add_row_multiple(std::size_t i, std::size_t j, const Int& factor) {
  if (factor == 0) return;
  Int* ri = &data_[i * cols_];
  const Int* rj = &data_[j * cols_];
  for (std::size_t c = 0; c < cols_; ++c) {
    if (rj[c] != 0) mpz_addmul(ri[c].get_mpz_t(), factor.get_mpz_t(), rj[c].get_mpz_t());
  }
}

void IntMat::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMat::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) {
    Int& x = (*this)(i, c);
    x = -x;
  }
}

void IntMat::add_col_multiple(std::size_t i, std::size_t j, const Int& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const Int& src = (*this)(r, j);
    if (src != 0) mpz_addmul((*this)(r, i).get_mpz_t(), factor.get_mpz_t(), src.get_mpz_t());
  }
}

void IntMat::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMat::negate_col(std::size_t i) {
  for (std::size_t r = 0; r < rows_; ++r) {
    Int& x = (*this)(r, i);
    x = -x;
  }
}

bool IntMat::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

IntVec row_times(const IntVec& x, const IntMat& M) {
  if (x.size() != M.rows()) throw std::invalid_argument("row_times: shape mismatch");
  IntVec out(M.cols());
  for (std::size_t r = 0; r < M.rows(); ++r) {
    if (x[r] == 0) continue;
    for (std::size_t c = 0; c < M.cols(); ++c) {
      mpz_addmul(out[c].get_mpz_t(), x[r].get_mpz_t(), M(r, c).get_mpz_t());
    }
  }
  return out;
}

Int determinant(const IntMat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("determinant: not square");
  const std::size_t n = M.rows();
  if (n == 0) return 1;
  IntMat A = M;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && A(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      A.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = A(k, k) * A(i, j) - A(i, k) * A(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = v;
      }
    }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

namespace {

// Quotient rounded to nearest, so the remainder has |r| <= |b|/2.
Int round_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  // Floor division leaves r with the sign of b, so r - b is the other
  // candidate remainder.
  Int twice = 2 * r;
  if (abs(twice) > abs(b)) q += 1;
  return q;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HnfResult hnf(const IntMat& M) {
  HnfResult res{M, IntMat::identity(M.rows()), 0};
  IntMat& A = res.H;
  IntMat& T = res.T;
  const std::size_t R = A.rows(), C = A.cols();
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    for (;;) {
      std::size_t best = R;
      for (std::size_t i = r; i < R; ++i) {
        if (A(i, col) != 0 && (best == R || abs(A(i, col)) < abs(A(best, col)))) best = i;
      }
      if (best == R) break;
      A.swap_rows(r, best);
      T.swap_rows(r, best);
      bool remaining = false;
      for (std::size_t i = r + 1; i < R; ++i) {
        if (A(i, col) == 0) continue;
        const Int q = -round_div(A(i, col), A(r, col));
        A.add_row_multiple(i, r, q);
        T.add_row_multiple(i, r, q);
        if (A(i, col) != 0) remaining = true;
      }
      if (!remaining) break;
    }
    if (A(r, col) == 0) continue;
    if (A(r, col) < 0) {
      A.negate_row(r);
      T.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Int q = -floor_div(A(i, col), A(r, col));
      A.add_row_multiple(i, r, q);
      T.add_row_multiple(i, r, q);
    }
    ++r;
  }
  res.rank = r;
  if (T * M != A) throw std::logic_error("hnf: transform check failed");
  return res;
}

SnfResult snf(const IntMat& M) {
  SnfResult res;
  IntMat A = M;
  const std::size_t R = A.rows(), C = A.cols();
  IntMat U = IntMat::identity(R), V = IntMat::identity(C), Vinv = IntMat::identity(C);
  // Column op "col i += f * col j" on A and V is matched by
  // "row j -= f * row i" on Vinv.
  auto col_add = [&](std::size_t i, std::size_t j, const Int& f) {
    A.add_col_multiple(i, j, f);
    V.add_col_multiple(i, j, f);
    Vinv.add_row_multiple(j, i, -f);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    A.swap_cols(i, j);
    V.swap_cols(i, j);
    Vinv.swap_rows(i, j);
  };
  auto row_add = [&](std::size_t i, std::size_t j, const Int& f) {
    A.add_row_multiple(i, j, f);
    U.add_row_multiple(i, j, f);
  };

  const std::size_t n = std::min(R, C);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t bi = R, bj = C;
      for (std::size_t i = t; i < R; ++i) {
        for (std::size_t j = t; j < C; ++j) {
          if (A(i, j) != 0 && (bi == R || abs(A(i, j)) < abs(A(bi, bj)))) {
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == R) break;
      A.swap_rows(t, bi);
      U.swap_rows(t, bi);
      col_swap(t, bj);
      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (A(i, t) == 0) continue;
        row_add(i, t, -round_div(A(i, t), A(t, t)));
        dirty = dirty || A(i, t) != 0;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (A(t, j) == 0) continue;
        col_add(j, t, -round_div(A(t, j), A(t, t)));
        dirty = dirty || A(t, j) != 0;
      }
      if (dirty) continue;
      // Pivot isolated; enforce divisibility of the rest.
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i) {
        for (std::size_t j = t + 1; j < C; ++j) {
          if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
        }
      }
      if (bad == R) break;
      row_add(t, bad, 1);
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      U.negate_row(t);
    }
  }
  // Zeros to the end while keeping the divisibility chain.
  std::size_t write = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (A(t, t) == 0) continue;
    if (write != t) {
      A.swap_rows(write, t);
      U.swap_rows(write, t);
      col_swap(write, t);
    }
    ++write;
  }
  for (std::size_t t = 0; t < n; ++t) res.diagonal.push_back(A(t, t));
  if (U * M * V != A) throw std::logic_error("snf: transform check failed");
  if (V * Vinv != IntMat::identity(C)) throw std::logic_error("snf: inverse check failed");
  res.D = std::move(A);
  res.U = std::move(U);
  res.V = std::move(V);
  res.Vinv = std::move(Vinv);
  return res;
}

IntMat hnf_basis_mod(const IntMat& M, const Int& modulus) {
  // Every pivot divides the modulus, so working modulo it reproduces the
  // pivots of the exact computation; two triangular bases with equal
  // diagonals that agree modulo the modulus span the same lattice once that
  // lattice contains modulus * Z^n.
  const std::size_t n = M.cols();
  if (modulus <= 0) throw std::invalid_argument("hnf_basis_mod: modulus must be positive");
  IntMat B(n, n);
  for (std::size_t i = 0; i < n; ++i) B(i, i) = modulus;
  auto mod = [&](Int& x) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t()); };

  IntVec v(n);
  Int g, s, t, bj, vc;
  for (std::size_t r = 0; r < M.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      v[c] = M(r, c);
      mod(v[c]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), B(j, j).get_mpz_t(), v[j].get_mpz_t());
      const Int a = B(j, j) / g;
      const Int b = v[j] / g;
      B(j, j) = g;
      v[j] = 0;
      for (std::size_t c = j + 1; c < n; ++c) {
        bj = B(j, c);
        vc = v[c];
        B(j, c) = s * bj + t * vc;
        mod(B(j, c));
        v[c] = a * vc - b * bj;
        mod(v[c]);
      }
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (B(i, j) < 0 || B(i, j) >= B(j, j)) B.add_row_multiple(i, j, -floor_div(B(i, j), B(j, j)));
    }
  }
  return B;
}

ModSnfResult snf_mod(const IntMat& M, const Int& modulus) {
  const Int& N = modulus;
  IntMat A = hnf_basis_mod(M, N);
  const std::size_t n = A.cols();
  IntMat V = IntMat::identity(n), Vinv = IntMat::identity(n);
  auto mod = [&](Int& x) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), N.get_mpz_t()); };
  auto gcd_n = [&](const Int& x) {
    Int g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), N.get_mpz_t());
    return g;
  };

  Int g, s, r, tmp1, tmp2;
  // rows (t, i) <- [[s, r], [-e/g, p/g]] (rows t, i)
  auto row_combine = [&](std::size_t t, std::size_t i) {
    const Int p = A(t, t), e = A(i, t);
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), e.get_mpz_t());
    const Int pg = p / g, eg = e / g;
    for (std::size_t c = t; c < n; ++c) {
      tmp1 = s * A(t, c) + r * A(i, c);
      tmp2 = pg * A(i, c) - eg * A(t, c);
      mod(tmp1);
      mod(tmp2);
      A(t, c) = tmp1;
      A(i, c) = tmp2;
    }
  };
  // cols (t, j) <- (cols t, j) [[s, -e/g], [r, p/g]]; Vinv rows get the inverse.
  auto col_combine = [&](std::size_t t, std::size_t j) {
    const Int p = A(t, t), e = A(t, j);
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), e.get_mpz_t());
    const Int pg = p / g, eg = e / g;
    auto apply = [&](IntMat& X, std::size_t from) {
      for (std::size_t i = from; i < X.rows(); ++i) {
        tmp1 = s * X(i, t) + r * X(i, j);
        tmp2 = pg * X(i, j) - eg * X(i, t);
        mod(tmp1);
        mod(tmp2);
        X(i, t) = tmp1;
        X(i, j) = tmp2;
      }
    };
    apply(A, t);
    apply(V, 0);
    for (std::size_t c = 0; c < n; ++c) {
      tmp1 = pg * Vinv(t, c) + eg * Vinv(j, c);
      tmp2 = s * Vinv(j, c) - r * Vinv(t, c);
      mod(tmp1);
      mod(tmp2);
      Vinv(t, c) = tmp1;
      Vinv(j, c) = tmp2;
    }
  };
  // Scale row t by a unit so that the pivot becomes gcd(pivot, N).
  auto normalize_pivot = [&](std::size_t t) {
    const Int p = A(t, t);
    const Int d = gcd_n(p);
    if (p == d) return;
    const Int Nd = N / d;
    Int u;
    const Int pd = p / d;
    if (Nd == 1) {
      u = 1;
    } else {
      mpz_invert(u.get_mpz_t(), pd.get_mpz_t(), Nd.get_mpz_t());
    }
    while (gcd_n(u) != 1) u += Nd;
    for (std::size_t c = t; c < n; ++c) {
      A(t, c) *= u;
      mod(A(t, c));
    }
  };

  ModSnfResult res;
  std::size_t t = 0;
  for (; t < n; ++t) {
    std::size_t bi = n, bj = n;
    Int best;
    for (std::size_t i = t; i < n; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (A(i, j) == 0) continue;
        const Int gi = gcd_n(A(i, j));
        if (bi == n || gi < best) {
          best = gi;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n) break;
    A.swap_rows(t, bi);
    if (bj != t) {
      A.swap_cols(t, bj);
      V.swap_cols(t, bj);
      Vinv.swap_rows(t, bj);
    }
    for (;;) {
      normalize_pivot(t);
      bool changed = false;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (A(i, t) == 0) continue;
        if (mpz_divisible_p(A(i, t).get_mpz_t(), A(t, t).get_mpz_t())) {
          A.add_row_multiple(i, t, -(A(i, t) / A(t, t)));
          for (std::size_t c = t; c < n; ++c) mod(A(i, c));
        } else {
          row_combine(t, i);
          changed = true;
        }
      }
      if (changed) continue;
      const Int before = A(t, t);
      for (std::size_t j = t + 1; j < n; ++j) {
        if (A(t, j) != 0) col_combine(t, j);
      }
      changed = A(t, t) != before;
      // A column reduction that shrank the pivot can refill column t.
      bool dirty = false;
      for (std::size_t i = t + 1; i < n && !dirty; ++i) dirty = A(i, t) != 0;
      if (changed || dirty) continue;
      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
        }
      }
      if (bad == n) break;
      for (std::size_t c = t; c < n; ++c) {
        A(t, c) += A(bad, c);
        mod(A(t, c));
      }
    }
    res.diagonal.push_back(A(t, t));
  }
  for (; t < n; ++t) res.diagonal.push_back(N);

  // Checks.
  IntMat VV = V * Vinv;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mod(VV(i, j));
      if (VV(i, j) != (i == j ? 1 : 0)) throw std::logic_error("snf_mod: inverse check failed");
    }
  }
  const IntMat MV = M * V;
  for (std::size_t i = 0; i < MV.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Int x = MV(i, j);
      mod(x);
      if (!mpz_divisible_p(x.get_mpz_t(), res.diagonal[j].get_mpz_t())) {
        throw std::logic_error("snf_mod: relation not killed by diagonal");
      }
    }
  }
  const IntMat B = hnf_basis_mod(M, N);
  Int order_b = 1, order_d = 1;
  for (std::size_t i = 0; i < n; ++i) {
    order_b *= B(i, i);
    order_d *= res.diagonal[i];
  }
  if (order_b != order_d) throw std::logic_error("snf_mod: group order mismatch");
  res.V = std::move(V);
  res.Vinv = std::move(Vinv);
  return res;
}

std::optional<IntVec> solve_membership(const IntMat& L, const IntVec& target) {
  if (target.size() != L.cols()) throw std::invalid_argument("solve_membership: width mismatch");
  const HnfResult h = hnf(L);
  IntVec rest = target;
  IntVec y(L.rows());
  std::size_t col = 0;
  for (std::size_t r = 0; r < h.rank; ++r) {
    while (h.H(r, col) == 0) {
      if (rest[col] != 0) return std::nullopt;
      ++col;
    }
    if (!mpz_divisible_p(rest[col].get_mpz_t(), h.H(r, col).get_mpz_t())) return std::nullopt;
    y[r] = rest[col] / h.H(r, col);
    for (std::size_t c = col; c < L.cols(); ++c) rest[c] -= y[r] * h.H(r, c);
    ++col;
  }
  for (const auto& x : rest) {
    if (x != 0) return std::nullopt;
  }
  IntVec coeffs = row_times(y, h.T);
  if (row_times(coeffs, L) != target) throw std::logic_error("solve_membership: verification failed");
  return coeffs;
}

IntVec quotient_invariants(const IntMat& L, std::size_t ambient_dim) {
  if (L.cols() != ambient_dim && !(L.rows() == 0)) {
    throw std::invalid_argument("quotient_invariants: width mismatch");
  }
  IntMat padded(std::max(L.rows(), ambient_dim), ambient_dim);
  for (std::size_t r = 0; r < L.rows(); ++r)
    for (std::size_t c = 0; c < ambient_dim; ++c) padded(r, c) = L(r, c);
  const SnfResult s = snf(padded);
  IntVec out;
  for (const auto& d : s.diagonal) {
    if (d != 1) out.push_back(d);
  }
  return out;
}

IntVec quotient_invariants_mod(const IntMat& L, const Int& modulus) {
  IntVec out;
  for (const auto& d : snf_mod(L, modulus).diagonal) {
    if (d != 1) out.push_back(d);
  }
  return out;
}

IntVec canonical_invariants(const IntVec& cyclic_orders) {
  IntMat D(cyclic_orders.size(), cyclic_orders.size());
  for (std::size_t i = 0; i < cyclic_orders.size(); ++i) D(i, i) = abs(cyclic_orders[i]);
  return quotient_invariants(D, cyclic_orders.size());
}

std::string to_string(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ")";
  return os.str();
}

}  // namespace bgjt
