#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ywc {

// Arbitrary-precision non-negative integer. Every protocol quantity is one.
using Nat = mpz_class;

// Signed arbitrary-precision integer; appears only inside extended-gcd
// intermediates. Public results are always reduced into [0, modulus).
using Int = mpz_class;

// Canonical wire encoding: lowercase hex, no leading zeros, "0" for zero.
std::string to_hex(const Nat& v);
Nat from_hex(const std::string& s);

std::size_t bit_length(const Nat& v);

// Seeded random source. Single-owner, never shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) by rejection sampling.
  Nat below(const Nat& bound);

  // Uniform in [lo, hi] inclusive.
  Nat between(const Nat& lo, const Nat& hi);

  // Uniform value of exactly `bits` bits (top bit set).
  Nat exact_bits(std::size_t bits);

 private:
  std::mt19937_64 engine_;
};

// Deterministic sub-stream derivation for per-trial rngs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ywc
