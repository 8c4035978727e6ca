#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace bgjt {

// A prime power r^e appearing in a factorization of a machine integer.
struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

bool is_prime(std::uint64_t n);

// Trial division by small primes, then Pollard rho (Brent) on the cofactor.
// Result is sorted by prime.
std::vector<PrimePower> factor_integer(std::uint64_t n);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Inverse of a modulo m; requires gcd(a, m) == 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

// Euler's totient from a factorization.
std::uint64_t totient(const std::vector<PrimePower>& factors);

}  // namespace bgjt
