#pragma once

#include <optional>

#include "ywc/protocol.hpp"

namespace ywc {

// A captured legitimate login request. The harness only logs messages that
// verified OK at capture time.
struct Intercept {
  LoginRequest m;
  Timestamp captured_at;
};

// The attack construction cannot proceed with the given inputs (e.g. shared
// factor where coprimality is required, no divisor in the window).
class Infeasible : public std::runtime_error {
 public:
  explicit Infeasible(std::string what, std::optional<Nat> gcd = std::nullopt)
      : std::runtime_error(std::move(what)), gcd_(std::move(gcd)) {}
  const std::optional<Nat>& gcd() const { return gcd_; }

 private:
  std::optional<Nat> gcd_;
};

// Forgery from the Bezout identity e*u - t_a*v = 1: x_f = id^(cid*v),
// y_f = id^(cid*u). Passes the verification equation unconditionally.
struct EuclidForgery {
  Timestamp t_a;
  Nat u;  // minimal strictly positive pair
  Nat v;
  LoginRequest forged;
};

EuclidForgery forge_via_euclid(const Intercept& intercept, const Timestamp& t_a);

// Forgery from a time factorization w * t_a = t: x_f = x^w, y reused.
struct TimeFactorForgery {
  Nat w;
  Timestamp t_a;
  LoginRequest forged;
};

TimeFactorForgery forge_via_time_factor(const Intercept& intercept,
                                        const Timestamp& window_lo,
                                        const Timestamp& window_hi);

// Rogue registration of id^-1 mod n to extract the victim's card secret.
struct RogueRegistration {
  Nat id_f;
  Nat pw_f;
  SmartCardContents rogue_card;
  Nat recovered_s;  // rogue_card.s^-1 mod n
  bool cid_collision;  // rogue cid == victim cid; the attack hinges on this
  LoginRequest forged;
};

using RegistrationEndpoint =
    std::function<SmartCardContents(const UserCredentials&)>;

RogueRegistration impersonate_via_inverse_registration(
    const Intercept& intercept, const RegistrationEndpoint& kic_register,
    const Timestamp& t_f, Rng& rng);

// Final step of the rogue-registration attack with the randomness pinned:
// x_f = y_r^e, y_f = recovered_s * y_r^t_f.
LoginRequest forge_from_recovered_secret(const Intercept& intercept,
                                         const Nat& recovered_s,
                                         const Nat& y_r, const Timestamp& t_f);

// Inverse-timestamp forgery. LITERAL takes t*t_f = 1 (mod n) at face value;
// WHITEBOX uses t*t_f = 1 (mod lambda(n)), which needs KIC secrets and is
// analysis-only. The identity actually holds modulo ord(id mod n), so the
// constructor also emits predicted_success from that condition.
enum class InverseMode { LITERAL, WHITEBOX };

struct InverseTimestampForgery {
  InverseMode mode;
  Timestamp t_f;
  Nat k;
  LoginRequest forged;
  std::optional<bool> predicted_success;
};

InverseTimestampForgery forge_via_inverse_timestamp(
    const Intercept& intercept, InverseMode mode, const Nat& k,
    const KicParams* analysis = nullptr);

// lambda(n) = lcm(p-1, q-1) and its prime factors, from KIC secrets.
std::pair<Nat, std::vector<Nat>> carmichael_of_modulus(const KicParams& kic);

}  // namespace ywc
