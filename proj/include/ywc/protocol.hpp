#pragma once

#include <functional>
#include <string>
#include <variant>

#include "ywc/numtheory.hpp"

namespace ywc {

// An input violated an invariant in a way that exposes KIC secrets, e.g. an
// identity sharing a factor with n.
class CriticalFinding : public std::runtime_error {
 public:
  CriticalFinding(std::string what, Nat factor)
      : std::runtime_error(std::move(what)), factor_(std::move(factor)) {}
  const Nat& factor() const { return factor_; }

 private:
  Nat factor_;
};

struct PublicParams {
  Nat n;
  Nat e;
  Nat g;
};

// Full KIC key material. Never serialized into public outputs.
struct KicParams {
  Nat p;
  Nat q;
  Nat n;
  Nat e;
  Nat d;
  Nat g;

  PublicParams public_params() const { return {n, e, g}; }
};

struct UserCredentials {
  Nat id;
  Nat pw;
};

// External string identities map to Nat by big-endian byte interpretation,
// reduced into [2, n-1].
Nat encode_identity(const std::string& text, const Nat& n);

struct SmartCardContents {
  Nat n;
  Nat e;
  Nat g;
  Nat id;
  Nat cid;
  Nat s;  // id^(cid*d) mod n
  Nat h;  // g^(pw*d) mod n
  // Carried on the card but never consumed by any phase of the scheme.
  std::string f_slot = "sha-256";
};

// Abstract clock units; >= 1 so timestamps are always usable as exponents.
struct Timestamp {
  Nat ticks;
  bool operator==(const Timestamp&) const = default;
};

struct LoginRequest {
  Nat id;
  Nat cid;
  Nat x;
  Nat y;
  Nat n;
  Nat e;
  Nat g;
  Timestamp t;
  bool operator==(const LoginRequest&) const = default;
};

// Canonical one-line wire format: fields id, cid, x, y, n, e, g, t as hex,
// in that key order. Bit-exact.
std::string encode_request(const LoginRequest& m);
LoginRequest decode_request(const std::string& line);

enum class Reason { OK, FORMAT_ID, FORMAT_CID, STALE_TIMESTAMP, EQUATION_FAILED };
std::string to_string(Reason r);

struct VerifyDecision {
  bool accepted;
  Reason reason;
};

// How the KIC assigns card identifiers. MIRROR reproduces the assumption
// hidden in the rogue-registration attack: the attacker receives a chosen
// (victim's) CID.
struct SequentialCid {
  Nat next = 2;
};
struct RandomCid {};
struct MirrorCid {
  Nat value;
};
using CidPolicy = std::variant<SequentialCid, RandomCid, MirrorCid>;

CidPolicy parse_cid_policy(const std::string& name);
std::string cid_policy_name(const CidPolicy& p);

KicParams kic_setup(std::size_t bits, Rng& rng);

SmartCardContents issue_card(const KicParams& kic, const UserCredentials& creds,
                             CidPolicy& cid_policy, Rng& rng);

LoginRequest build_login_request(const SmartCardContents& card, const Nat& pw,
                                 const Timestamp& t, Rng& rng);

// Same construction with the card's random nonce pinned (fixtures, demo).
LoginRequest build_login_request_with_nonce(const SmartCardContents& card,
                                            const Nat& pw, const Timestamp& t,
                                            const Nat& r);

// The server's step-4 acceptance test alone: y^e = id^cid * x^t (mod n).
bool equation_holds(const LoginRequest& m);

// Default format policy: 2 <= id, cid < n and gcd(id, n) = 1.
using FormatPolicy =
    std::function<bool(const Nat& value, const Nat& modulus)>;
bool default_id_format(const Nat& value, const Nat& modulus);
bool default_cid_format(const Nat& value, const Nat& modulus);

VerifyDecision verify_login(const LoginRequest& m, const Timestamp& server_now,
                            const Nat& delta_t,
                            const FormatPolicy& id_format = default_id_format,
                            const FormatPolicy& cid_format = default_cid_format);

}  // namespace ywc
