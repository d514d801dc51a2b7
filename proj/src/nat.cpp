#include "ywc/nat.hpp"

namespace ywc {

std::string to_hex(const Nat& v) {
  if (sgn(v) < 0) throw std::domain_error("negative value has no wire encoding");
  return v.get_str(16);
}

Nat from_hex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty hex string");
  if (s.size() > 1 && s[0] == '0')
    throw std::invalid_argument("leading zeros are not canonical: " + s);
  for (char c : s) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) throw std::invalid_argument("bad hex digit in: " + s);
  }
  Nat v;
  if (v.set_str(s, 16) != 0) throw std::invalid_argument("unparseable hex: " + s);
  return v;
}

std::size_t bit_length(const Nat& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Nat Rng::below(const Nat& bound) {
  if (bound <= 0) throw std::domain_error("Rng::below requires bound > 0");
  const std::size_t bits = bit_length(bound);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    Nat candidate = 0;
    for (std::size_t i = 0; i < words; ++i) {
      candidate <<= 64;
      candidate += Nat(engine_());
    }
    candidate >>= (words * 64 - bits);
    if (candidate < bound) return candidate;
  }
}

Nat Rng::between(const Nat& lo, const Nat& hi) {
  if (lo > hi) throw std::domain_error("Rng::between requires lo <= hi");
  return lo + below(hi - lo + 1);
}

Nat Rng::exact_bits(std::size_t bits) {
  if (bits == 0) throw std::domain_error("Rng::exact_bits requires bits >= 1");
  if (bits == 1) return 1;
  Nat top = Nat(1) << (bits - 1);
  return top + below(top);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ywc
