#include "ywc/protocol.hpp"

#include <sstream>

namespace ywc {

Nat encode_identity(const std::string& text, const Nat& n) {
  if (n < 5) throw std::domain_error("encode_identity: modulus too small");
  Nat v = 0;
  for (unsigned char c : text) v = (v << 8) + c;
  return 2 + v % (n - 2);
}

std::string to_string(Reason r) {
  switch (r) {
    case Reason::OK: return "OK";
    case Reason::FORMAT_ID: return "FORMAT_ID";
    case Reason::FORMAT_CID: return "FORMAT_CID";
    case Reason::STALE_TIMESTAMP: return "STALE_TIMESTAMP";
    case Reason::EQUATION_FAILED: return "EQUATION_FAILED";
  }
  return "?";
}

std::string encode_request(const LoginRequest& m) {
  std::ostringstream out;
  out << "id=" << to_hex(m.id) << " cid=" << to_hex(m.cid)
      << " x=" << to_hex(m.x) << " y=" << to_hex(m.y) << " n=" << to_hex(m.n)
      << " e=" << to_hex(m.e) << " g=" << to_hex(m.g)
      << " t=" << to_hex(m.t.ticks);
  return out.str();
}

LoginRequest decode_request(const std::string& line) {
  static const char* keys[] = {"id", "cid", "x", "y", "n", "e", "g", "t"};
  std::istringstream in(line);
  Nat fields[8];
  for (int i = 0; i < 8; ++i) {
    std::string token;
    if (!(in >> token))
      throw std::invalid_argument("login request line: missing field " +
                                  std::string(keys[i]));
    const std::string prefix = std::string(keys[i]) + "=";
    if (token.rfind(prefix, 0) != 0)
      throw std::invalid_argument("login request line: expected " + prefix +
                                  "..., got " + token);
    fields[i] = from_hex(token.substr(prefix.size()));
  }
  std::string extra;
  if (in >> extra)
    throw std::invalid_argument("login request line: trailing token " + extra);
  return {fields[0], fields[1], fields[2], fields[3],
          fields[4], fields[5], fields[6], Timestamp{fields[7]}};
}

CidPolicy parse_cid_policy(const std::string& name) {
  if (name == "sequential") return SequentialCid{};
  if (name == "random") return RandomCid{};
  if (name == "mirror") return MirrorCid{};
  throw std::invalid_argument("unknown cid policy: " + name);
}

std::string cid_policy_name(const CidPolicy& p) {
  if (std::holds_alternative<SequentialCid>(p)) return "sequential";
  if (std::holds_alternative<RandomCid>(p)) return "random";
  return "mirror";
}

KicParams kic_setup(std::size_t bits, Rng& rng) {
  if (bits < 3) throw std::domain_error("kic_setup: bits must be >= 3");
  // Safe primes make factoring p-1 trivial for the primitive-element
  // search; at toy sizes plain primes suffice (trial-division fallback).
  const bool toy = bits <= 20;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Nat p = toy ? nt::gen_prime(bits, rng) : nt::gen_safe_prime(bits, rng);
    Nat q;
    do {
      q = toy ? nt::gen_prime(bits, rng) : nt::gen_safe_prime(bits, rng);
    } while (q == p);
    const Nat n = p * q;
    const Nat phi = (p - 1) * (q - 1);

    Nat e, d;
    for (;;) {
      e = rng.between(3, phi - 1);
      Nat g;
      mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), phi.get_mpz_t());
      if (g == 1) {
        d = nt::mod_inv(e, phi);
        break;
      }
    }
    try {
      Nat g = nt::common_primitive_element(p, q, rng);
      return {p, q, n, e, d, g};
    } catch (const nt::NotFound&) {
      // regenerate primes
    }
  }
  throw nt::NotFound("kic_setup: primitive-element search failed 8 times");
}

SmartCardContents issue_card(const KicParams& kic, const UserCredentials& creds,
                             CidPolicy& cid_policy, Rng& rng) {
  if (creds.id < 2 || creds.id >= kic.n)
    throw std::domain_error("issue_card: id out of range");
  if (creds.pw < 1 || creds.pw >= kic.n)
    throw std::domain_error("issue_card: pw out of range");
  Nat shared;
  mpz_gcd(shared.get_mpz_t(), creds.id.get_mpz_t(), kic.n.get_mpz_t());
  if (shared != 1)
    throw CriticalFinding("issue_card: identity shares factor with modulus",
                          shared);

  Nat cid = std::visit(
      [&](auto& policy) -> Nat {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, SequentialCid>) return policy.next++;
        if constexpr (std::is_same_v<P, RandomCid>)
          return rng.between(2, kic.n - 1);
        if constexpr (std::is_same_v<P, MirrorCid>) return policy.value;
      },
      cid_policy);

  return {kic.n,
          kic.e,
          kic.g,
          creds.id,
          cid,
          nt::mod_pow(creds.id, cid * kic.d, kic.n),
          nt::mod_pow(kic.g, creds.pw * kic.d, kic.n)};
}

LoginRequest build_login_request(const SmartCardContents& card, const Nat& pw,
                                 const Timestamp& t, Rng& rng) {
  return build_login_request_with_nonce(card, pw, t,
                                        rng.between(2, card.n - 1));
}

LoginRequest build_login_request_with_nonce(const SmartCardContents& card,
                                            const Nat& pw, const Timestamp& t,
                                            const Nat& r) {
  if (t.ticks < 1) throw std::domain_error("timestamp must be >= 1");
  const Nat x = nt::mod_pow(card.g, pw * r, card.n);
  const Nat y = card.s * nt::mod_pow(card.h, r * t.ticks, card.n) % card.n;
  return {card.id, card.cid, x, y, card.n, card.e, card.g, t};
}

bool equation_holds(const LoginRequest& m) {
  if (m.n < 2) return false;
  const Nat lhs = nt::mod_pow(m.y, m.e, m.n);
  const Nat rhs =
      nt::mod_pow(m.id, m.cid, m.n) * nt::mod_pow(m.x, m.t.ticks, m.n) % m.n;
  return lhs == rhs;
}

bool default_id_format(const Nat& value, const Nat& modulus) {
  if (value < 2 || value >= modulus) return false;
  Nat g;
  mpz_gcd(g.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
  return g == 1;
}

bool default_cid_format(const Nat& value, const Nat& modulus) {
  return value >= 2 && value < modulus;
}

VerifyDecision verify_login(const LoginRequest& m, const Timestamp& server_now,
                            const Nat& delta_t, const FormatPolicy& id_format,
                            const FormatPolicy& cid_format) {
  if (!id_format(m.id, m.n)) return {false, Reason::FORMAT_ID};
  if (!cid_format(m.cid, m.n)) return {false, Reason::FORMAT_CID};
  // Future-dated requests rejected as well: 0 <= now - t <= delta_t.
  if (server_now.ticks < m.t.ticks || server_now.ticks - m.t.ticks > delta_t)
    return {false, Reason::STALE_TIMESTAMP};
  if (!equation_holds(m)) return {false, Reason::EQUATION_FAILED};
  return {true, Reason::OK};
}

}  // namespace ywc
