#pragma once

#include <optional>
#include <vector>

#include "ywc/nat.hpp"

namespace ywc::nt {

// a*u + b*v = gcd, signed coefficients.
struct Bezout {
  Nat gcd;
  Int u;
  Int v;
};

// gcd(a, modulus) != 1 while inverting. A gcd strictly between 1 and the
// modulus reveals a factor of it; callers surface that as a critical finding.
class NotInvertible : public std::runtime_error {
 public:
  NotInvertible(Nat a, Nat modulus, Nat gcd)
      : std::runtime_error("not invertible: gcd(" + a.get_str() + ", " +
                           modulus.get_str() + ") = " + gcd.get_str()),
        gcd_(std::move(gcd)) {}
  const Nat& gcd() const { return gcd_; }

 private:
  Nat gcd_;
};

class NotFound : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

Nat mod_pow(const Nat& base, const Nat& exponent, const Nat& modulus);

Bezout ext_gcd(const Nat& a, const Nat& b);

Nat mod_inv(const Nat& a, const Nat& modulus);

// Miller-Rabin. Deterministic for n < 2^64 (fixed witness set); otherwise
// `rounds` pseudorandom witnesses derived from n, error <= 4^-rounds.
bool is_probable_prime(const Nat& n, unsigned rounds = 32);

// Prime of exactly `bits` bits. Pure function of (bits, rng state).
Nat gen_prime(std::size_t bits, Rng& rng, unsigned rounds = 32);

// Prime p of exactly `bits` bits with (p-1)/2 also prime.
Nat gen_safe_prime(std::size_t bits, Rng& rng, unsigned rounds = 32);

// Prime factors of n (no multiplicities), trial division. Desk scale only.
std::vector<Nat> factorize(const Nat& n);

// Smallest t >= 1 with a^t = 1 (mod modulus). Either modulus < 2^32, or the
// group exponent and its prime factors are supplied.
Nat multiplicative_order(const Nat& a, const Nat& modulus);
Nat multiplicative_order(const Nat& a, const Nat& modulus,
                         const Nat& group_exponent,
                         const std::vector<Nat>& exponent_primes);

// g with order p-1 mod p and order q-1 mod q, drawn from rng. Throws
// NotFound when the candidate budget (4 * bitlen(pq)) is exhausted.
Nat common_primitive_element(const Nat& p, const Nat& q, Rng& rng);

}  // namespace ywc::nt
