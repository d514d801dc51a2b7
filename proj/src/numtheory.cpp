#include "ywc/numtheory.hpp"

#include <algorithm>
#include <array>

namespace ywc::nt {

Nat mod_pow(const Nat& base, const Nat& exponent, const Nat& modulus) {
  if (modulus < 2) throw std::domain_error("mod_pow: modulus must be >= 2");
  Nat result;
  mpz_powm(result.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return result;
}

Bezout ext_gcd(const Nat& a, const Nat& b) {
  if (a == 0 && b == 0) throw std::domain_error("ext_gcd(0, 0) is undefined");
  Bezout r;
  mpz_gcdext(r.gcd.get_mpz_t(), r.u.get_mpz_t(), r.v.get_mpz_t(),
             a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Nat mod_inv(const Nat& a, const Nat& modulus) {
  if (modulus < 2) throw std::domain_error("mod_inv: modulus must be >= 2");
  Nat inv;
  if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    Nat g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
    throw NotInvertible(a, modulus, g);
  }
  return inv;
}

namespace {

// One Miller-Rabin round; n odd, n-1 = d * 2^s, witness already reduced.
bool witness_passes(const Nat& n, const Nat& d, unsigned long s, const Nat& a) {
  if (a <= 1 || a == n - 1) return true;
  Nat x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

bool is_probable_prime(const Nat& n, unsigned rounds) {
  if (rounds < 1) throw std::domain_error("is_probable_prime: rounds >= 1");
  if (n < 2) return false;
  static constexpr std::array<unsigned, 12> small = {2,  3,  5,  7,  11, 13,
                                                     17, 19, 23, 29, 31, 37};
  for (unsigned p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Nat d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;

  if (bit_length(n) <= 64) {
    // Deterministic for n < 2^64 with this witness set.
    for (unsigned a : small)
      if (!witness_passes(n, d, s, Nat(a))) return false;
    return true;
  }
  // Pseudorandom witnesses derived from n, so the result is a pure
  // function of (n, rounds).
  Rng wrng(mix_seed(mpz_get_ui(n.get_mpz_t()), bit_length(n)));
  for (unsigned i = 0; i < rounds; ++i) {
    Nat a = wrng.between(2, n - 2);
    if (!witness_passes(n, d, s, a)) return false;
  }
  return true;
}

Nat gen_prime(std::size_t bits, Rng& rng, unsigned rounds) {
  if (bits < 2) throw std::domain_error("gen_prime: bits must be >= 2");
  for (;;) {
    Nat candidate = rng.exact_bits(bits);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate, rounds)) return candidate;
  }
}

Nat gen_safe_prime(std::size_t bits, Rng& rng, unsigned rounds) {
  if (bits < 3) throw std::domain_error("gen_safe_prime: bits must be >= 3");
  for (;;) {
    Nat half = gen_prime(bits - 1, rng, rounds);
    Nat p = 2 * half + 1;
    if (bit_length(p) == bits && is_probable_prime(p, rounds)) return p;
  }
}

namespace {

// (prime, multiplicity) pairs by trial division. Throws when a cofactor
// survives that is too large to certify.
std::vector<std::pair<Nat, unsigned>> factorize_full(Nat n) {
  if (n < 1) throw std::domain_error("factorize: n must be >= 1");
  std::vector<std::pair<Nat, unsigned>> out;
  auto strip = [&](const Nat& p) {
    unsigned m = 0;
    while (n % p == 0) {
      n /= p;
      ++m;
    }
    if (m) out.emplace_back(p, m);
  };
  strip(2);
  for (Nat p = 3; p * p <= n && p < (1 << 22); p += 2) strip(p);
  if (n > 1) {
    if (!is_probable_prime(n))
      throw std::runtime_error("factorize: cofactor " + n.get_str() +
                               " too large for trial division");
    out.emplace_back(n, 1);
  }
  return out;
}

Nat carmichael(const std::vector<std::pair<Nat, unsigned>>& factors) {
  Nat lambda = 1;
  for (const auto& [p, m] : factors) {
    Nat comp;
    if (p == 2)
      comp = m == 1 ? Nat(1) : (m == 2 ? Nat(2) : Nat(1) << (m - 2));
    else {
      comp = p - 1;
      for (unsigned i = 1; i < m; ++i) comp *= p;
    }
    mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), comp.get_mpz_t());
  }
  return lambda;
}

}  // namespace

std::vector<Nat> factorize(const Nat& n) {
  std::vector<Nat> primes;
  for (const auto& [p, m] : factorize_full(n)) primes.push_back(p);
  return primes;
}

Nat multiplicative_order(const Nat& a, const Nat& modulus,
                         const Nat& group_exponent,
                         const std::vector<Nat>& exponent_primes) {
  Nat g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1)
    throw std::domain_error("multiplicative_order: gcd(a, modulus) != 1");
  Nat t = group_exponent;
  for (const Nat& r : exponent_primes) {
    while (t % r == 0 && mod_pow(a, t / r, modulus) == 1) t /= r;
  }
  if (mod_pow(a, t, modulus) != 1)
    throw std::domain_error(
        "multiplicative_order: supplied exponent is not a group exponent");
  return t;
}

Nat multiplicative_order(const Nat& a, const Nat& modulus) {
  if (bit_length(modulus) > 32)
    throw std::runtime_error(
        "multiplicative_order: modulus over 2^32 needs an explicit "
        "group-exponent factorization");
  Nat lambda = carmichael(factorize_full(modulus));
  return multiplicative_order(a, modulus, lambda, factorize(lambda));
}

Nat common_primitive_element(const Nat& p, const Nat& q, Rng& rng) {
  if (p == q) throw std::domain_error("common_primitive_element: p == q");
  // Safe primes carry their own factorization of p-1; otherwise fall back
  // to trial division, which limits non-safe primes to desk scale.
  auto cofactor_primes = [](const Nat& prime) -> std::vector<Nat> {
    Nat half = (prime - 1) / 2;
    if (prime > 4 && prime % 2 == 1 && half > 2 && is_probable_prime(half))
      return {Nat(2), half};
    return factorize(prime - 1);
  };
  const std::vector<Nat> rp = cofactor_primes(p);
  const std::vector<Nat> rq = cofactor_primes(q);
  const Nat n = p * q;

  auto has_full_order = [](const Nat& g, const Nat& prime,
                           const std::vector<Nat>& primes_of_order) {
    if (g % prime == 0) return false;
    for (const Nat& r : primes_of_order)
      if (mod_pow(g, (prime - 1) / r, prime) == 1) return false;
    return true;
  };

  const std::size_t budget = 4 * bit_length(n);
  for (std::size_t i = 0; i < budget; ++i) {
    Nat g = rng.between(2, n - 1);
    if (has_full_order(g, p, rp) && has_full_order(g, q, rq)) return g;
  }
  throw NotFound("common_primitive_element: candidate budget exhausted");
}

}  // namespace ywc::nt
