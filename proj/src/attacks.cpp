#include "ywc/attacks.hpp"

#include <algorithm>

namespace ywc {

EuclidForgery forge_via_euclid(const Intercept& intercept,
                               const Timestamp& t_a) {
  const LoginRequest& m = intercept.m;
  if (t_a.ticks < 1) throw std::domain_error("attacker timestamp must be >= 1");
  const auto bez = nt::ext_gcd(m.e, t_a.ticks);
  if (bez.gcd != 1)
    throw Infeasible("forge_via_euclid: gcd(e, t_a) = " + bez.gcd.get_str(),
                     bez.gcd);
  // Minimal strictly positive (u, v) with e*u - t_a*v = 1.
  Nat u = bez.u % t_a.ticks;
  if (u <= 0) u += t_a.ticks;
  Nat v = (m.e * u - 1) / t_a.ticks;
  if (v == 0) {
    u += t_a.ticks;
    v = (m.e * u - 1) / t_a.ticks;
  }
  LoginRequest forged = m;
  forged.x = nt::mod_pow(m.id, m.cid * v, m.n);
  forged.y = nt::mod_pow(m.id, m.cid * u, m.n);
  forged.t = t_a;
  return {t_a, u, v, std::move(forged)};
}

TimeFactorForgery forge_via_time_factor(const Intercept& intercept,
                                        const Timestamp& window_lo,
                                        const Timestamp& window_hi) {
  const LoginRequest& m = intercept.m;
  const Nat& t = m.t.ticks;
  // Largest divisor of t inside the window (freshest admissible timestamp).
  Nat best = 0;
  for (Nat d = 1; d * d <= t; ++d) {
    if (t % d != 0) continue;
    for (const Nat& cand : {Nat(d), Nat(t / d)})
      if (cand >= window_lo.ticks && cand <= window_hi.ticks && cand > best)
        best = cand;
  }
  if (best == 0)
    throw Infeasible("forge_via_time_factor: no divisor of t=" + t.get_str() +
                     " in window [" + window_lo.ticks.get_str() + ", " +
                     window_hi.ticks.get_str() + "]");
  const Nat w = t / best;
  LoginRequest forged = m;
  forged.x = nt::mod_pow(m.x, w, m.n);
  forged.t = Timestamp{best};
  return {w, Timestamp{best}, std::move(forged)};
}

RogueRegistration impersonate_via_inverse_registration(
    const Intercept& intercept, const RegistrationEndpoint& kic_register,
    const Timestamp& t_f, Rng& rng) {
  const LoginRequest& m = intercept.m;
  Nat id_f;
  try {
    id_f = nt::mod_inv(m.id, m.n);
  } catch (const nt::NotInvertible& ex) {
    throw CriticalFinding("victim identity shares factor with modulus",
                          ex.gcd());
  }
  const Nat pw_f = rng.between(1, m.n - 1);

  SmartCardContents rogue_card;
  try {
    rogue_card = kic_register({id_f, pw_f});
  } catch (const CriticalFinding&) {
    throw;
  } catch (const std::exception& ex) {
    throw Infeasible(std::string("KIC rejected rogue registration: ") +
                     ex.what());
  }

  Nat recovered_s;
  try {
    recovered_s = nt::mod_inv(rogue_card.s, m.n);
  } catch (const nt::NotInvertible& ex) {
    throw CriticalFinding("rogue card secret shares factor with modulus",
                          ex.gcd());
  }

  const Nat y_r = rng.between(2, m.n - 1);
  LoginRequest forged =
      forge_from_recovered_secret(intercept, recovered_s, y_r, t_f);
  const bool collision = rogue_card.cid == m.cid;
  return {id_f,         pw_f,      std::move(rogue_card),
          recovered_s,  collision, std::move(forged)};
}

LoginRequest forge_from_recovered_secret(const Intercept& intercept,
                                         const Nat& recovered_s,
                                         const Nat& y_r, const Timestamp& t_f) {
  const LoginRequest& m = intercept.m;
  LoginRequest forged = m;
  forged.x = nt::mod_pow(y_r, m.e, m.n);
  forged.y = recovered_s * nt::mod_pow(y_r, t_f.ticks, m.n) % m.n;
  forged.t = t_f;
  return forged;
}

namespace {

std::vector<Nat> prime_cofactors(const Nat& prime) {
  const Nat half = (prime - 1) / 2;
  if (prime > 4 && prime % 2 == 1 && half > 2 && nt::is_probable_prime(half))
    return {Nat(2), half};
  return nt::factorize(prime - 1);
}

}  // namespace

std::pair<Nat, std::vector<Nat>> carmichael_of_modulus(const KicParams& kic) {
  Nat lambda;
  mpz_lcm(lambda.get_mpz_t(), Nat(kic.p - 1).get_mpz_t(),
          Nat(kic.q - 1).get_mpz_t());
  std::vector<Nat> primes = prime_cofactors(kic.p);
  for (const Nat& r : prime_cofactors(kic.q))
    if (std::find(primes.begin(), primes.end(), r) == primes.end())
      primes.push_back(r);
  return {lambda, primes};
}

InverseTimestampForgery forge_via_inverse_timestamp(const Intercept& intercept,
                                                    InverseMode mode,
                                                    const Nat& k,
                                                    const KicParams* analysis) {
  const LoginRequest& m = intercept.m;
  const Nat& t = m.t.ticks;

  Nat t_f;
  if (mode == InverseMode::LITERAL) {
    try {
      t_f = nt::mod_inv(t, m.n);
    } catch (const nt::NotInvertible& ex) {
      throw Infeasible("inverse timestamp: gcd(t, n) = " + ex.gcd().get_str(),
                       ex.gcd());
    }
  } else {
    if (analysis == nullptr)
      throw std::domain_error("WHITEBOX mode requires KIC secret access");
    const Nat lambda = carmichael_of_modulus(*analysis).first;
    try {
      t_f = nt::mod_inv(t % lambda, lambda);
    } catch (const nt::NotInvertible& ex) {
      throw Infeasible(
          "inverse timestamp: gcd(t, lambda(n)) = " + ex.gcd().get_str(),
          ex.gcd());
    }
  }
  LoginRequest forged = m;
  forged.y = nt::mod_pow(k, t_f, m.n);
  // id^(-cid*t) realized as (id^-1)^(cid*t)
  forged.x = nt::mod_pow(nt::mod_inv(m.id, m.n), m.cid * t, m.n) *
             nt::mod_pow(k, m.e, m.n) % m.n;
  forged.t = Timestamp{t_f};

  // The equation holds iff cid*t*t_f = cid modulo the order of id mod n.
  std::optional<bool> predicted;
  std::optional<Nat> order;
  if (analysis != nullptr) {
    auto [lambda, primes] = carmichael_of_modulus(*analysis);
    order = nt::multiplicative_order(m.id, m.n, lambda, primes);
  } else if (bit_length(m.n) <= 32) {
    order = nt::multiplicative_order(m.id, m.n);
  }
  if (order)
    predicted = (m.cid * t * t_f % *order) == (m.cid % *order);

  return {mode, Timestamp{t_f}, k, std::move(forged), predicted};
}

}  // namespace ywc
