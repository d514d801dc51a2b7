#include "ywc/harness.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace ywc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string digest_params(const KicParams& kic) {
  const std::string blob = to_hex(kic.p) + "|" + to_hex(kic.q) + "|" +
                           to_hex(kic.n) + "|" + to_hex(kic.e) + "|" +
                           to_hex(kic.d) + "|" + to_hex(kic.g);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : blob) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Nat nat_gcd(const Nat& a, const Nat& b) {
  Nat g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Nat json_nat(const nlohmann::json& v) {
  if (v.is_string()) return Nat(v.get<std::string>());
  return Nat(static_cast<unsigned long>(v.get<std::uint64_t>()));
}

Nat flip_random_bit(const Nat& v, const Nat& modulus, Rng& rng) {
  const std::size_t width = std::max<std::size_t>(bit_length(modulus), 1);
  for (;;) {
    Nat out = v;
    const auto bit = static_cast<mp_bitcnt_t>(rng.next_u64() % width);
    mpz_combit(out.get_mpz_t(), bit);
    if (out < modulus) return out;  // keep the field in range, retry otherwise
  }
}

}  // namespace

std::string attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::NONE: return "none";
    case AttackKind::EUCLID: return "euclid";
    case AttackKind::TIME_FACTOR: return "time-factor";
    case AttackKind::INVERSE_ID: return "inverse-id";
    case AttackKind::INVERSE_TS_LITERAL: return "inverse-ts-literal";
    case AttackKind::INVERSE_TS_WHITEBOX: return "inverse-ts-whitebox";
    case AttackKind::TAMPER: return "tamper";
  }
  return "?";
}

AttackKind parse_attack(const std::string& name) {
  for (auto k : {AttackKind::NONE, AttackKind::EUCLID, AttackKind::TIME_FACTOR,
                 AttackKind::INVERSE_ID, AttackKind::INVERSE_TS_LITERAL,
                 AttackKind::INVERSE_TS_WHITEBOX, AttackKind::TAMPER})
    if (attack_name(k) == name) return k;
  throw std::invalid_argument("unknown attack: " + name);
}

ScenarioConfig load_scenario_config(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  ScenarioConfig cfg;
  cfg.id = j.value("id", cfg.id);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.prime_bits = j.value("prime_bits", cfg.prime_bits);
  cfg.cid_policy = j.value("cid_policy", cfg.cid_policy);
  cfg.attack = parse_attack(j.value("attack", "none"));
  cfg.trials = j.value("trials", cfg.trials);
  if (j.contains("clock")) {
    const auto& c = j.at("clock");
    const std::string mode = c.value("mode", "abstract");
    if (mode == "abstract")
      cfg.clock.mode = ClockMode::ABSTRACT;
    else if (mode == "realistic")
      cfg.clock.mode = ClockMode::REALISTIC;
    else
      throw std::invalid_argument("unknown clock mode: " + mode);
    if (c.contains("start")) cfg.clock.start = json_nat(c.at("start"));
    if (c.contains("delta_t")) cfg.clock.delta_t = json_nat(c.at("delta_t"));
  }
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.prime_bits < 3) throw std::invalid_argument("prime_bits must be >= 3");
  parse_cid_policy(cfg.cid_policy);
  return cfg;
}

Intercept intercept_channel(const LoginRequest& m, const Timestamp& captured_at) {
  return {decode_request(encode_request(m)), captured_at};
}

std::vector<VerdictRecord> run_scenario(const ScenarioConfig& config) {
  std::vector<VerdictRecord> records;
  records.reserve(config.trials);

  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng rng(mix_seed(config.seed, trial));
    VerdictRecord rec;
    rec.scenario = config.id;
    rec.attack = attack_name(config.attack);
    rec.trial = trial;

    auto t0 = Clock::now();
    const KicParams kic = kic_setup(config.prime_bits, rng);
    rec.param_digest = digest_params(kic);
    rec.timings.keygen_ms = ms_since(t0);

    // Victim registration.
    Nat id;
    do {
      id = rng.between(2, kic.n - 1);
    } while (!default_id_format(id, kic.n));
    const UserCredentials victim{id, rng.between(1, kic.n - 1)};

    CidPolicy issue_policy = parse_cid_policy(config.cid_policy);
    if (std::holds_alternative<MirrorCid>(issue_policy))
      issue_policy = RandomCid{};  // MIRROR targets the rogue card only
    const SmartCardContents card = issue_card(kic, victim, issue_policy, rng);

    // Legitimate login and capture.
    t0 = Clock::now();
    const Timestamp t_login{config.clock.start +
                            Nat(rng.next_u64() % 1000000)};
    const LoginRequest m =
        build_login_request(card, victim.pw, t_login, rng);
    const VerifyDecision legit =
        verify_login(m, t_login, config.clock.delta_t);
    rec.timings.login_ms = ms_since(t0);
    if (!legit.accepted)
      throw std::runtime_error(
          "corrupt trial " + std::to_string(trial) +
          ": legitimate login rejected with " + to_string(legit.reason));
    const Intercept icept = intercept_channel(m, t_login);

    // Attack construction.
    t0 = Clock::now();
    std::optional<LoginRequest> forged;
    Timestamp attack_now{t_login.ticks + 1};
    try {
      switch (config.attack) {
        case AttackKind::NONE:
          forged = m;
          attack_now = t_login;
          break;
        case AttackKind::EUCLID: {
          // Attacker launches within the freshness window, t_a coprime to e.
          const Nat slack =
              config.clock.delta_t > 0 ? config.clock.delta_t : Nat(1);
          Timestamp t_a{t_login.ticks + 1 + Nat(rng.next_u64()) % slack};
          while (nat_gcd(t_a.ticks, m.e) != 1) --t_a.ticks;
          if (t_a.ticks < 1) throw Infeasible("no coprime timestamp found");
          forged = forge_via_euclid(icept, t_a).forged;
          attack_now = t_a;
          break;
        }
        case AttackKind::TIME_FACTOR:
          // Past-dated by construction: w * t_a = t forces t_a <= t.
          forged = forge_via_time_factor(icept, Timestamp{2},
                                         Timestamp{t_login.ticks - 1})
                       .forged;
          break;
        case AttackKind::INVERSE_ID: {
          CidPolicy rogue_policy = parse_cid_policy(config.cid_policy);
          if (std::holds_alternative<MirrorCid>(rogue_policy))
            rogue_policy = MirrorCid{card.cid};
          RegistrationEndpoint endpoint =
              [&](const UserCredentials& creds) -> SmartCardContents {
            return issue_card(kic, creds, rogue_policy, rng);
          };
          forged = impersonate_via_inverse_registration(icept, endpoint,
                                                        attack_now, rng)
                       .forged;
          break;
        }
        case AttackKind::INVERSE_TS_LITERAL:
        case AttackKind::INVERSE_TS_WHITEBOX: {
          const auto mode = config.attack == AttackKind::INVERSE_TS_LITERAL
                                ? InverseMode::LITERAL
                                : InverseMode::WHITEBOX;
          const Nat k = rng.between(2, kic.n - 1);
          // KIC secrets are always passed for the success prediction; the
          // construction itself reads them only in WHITEBOX mode.
          const auto f = forge_via_inverse_timestamp(icept, mode, k, &kic);
          forged = f.forged;
          rec.predicted_success = f.predicted_success;
          break;
        }
        case AttackKind::TAMPER: {
          LoginRequest tampered = icept.m;
          if (rng.next_u64() % 2 == 0)
            tampered.x = flip_random_bit(tampered.x, tampered.n, rng);
          else
            tampered.y = flip_random_bit(tampered.y, tampered.n, rng);
          forged = tampered;
          attack_now = t_login;
          break;
        }
      }
      rec.feasible = true;
    } catch (const Infeasible&) {
      rec.feasible = false;
    }
    rec.timings.attack_ms = ms_since(t0);

    t0 = Clock::now();
    if (forged) {
      rec.equation_check = equation_holds(*forged);
      // ABSTRACT: the scenario sets the server clock to the attacker's
      // claimed time, so only format and equation can reject. REALISTIC:
      // the clock has advanced monotonically past the capture.
      const Timestamp server_now = config.clock.mode == ClockMode::ABSTRACT
                                       ? forged->t
                                       : attack_now;
      rec.full_verify =
          to_string(verify_login(*forged, server_now, config.clock.delta_t)
                        .reason);
    } else {
      rec.full_verify = "INFEASIBLE";
    }
    rec.timings.verify_ms = ms_since(t0);

    records.push_back(std::move(rec));
  }
  return records;
}

Summary emit_report(const std::vector<VerdictRecord>& records,
                    std::ostream& sink, bool include_timings) {
  Summary summary;
  for (const auto& r : records) {
    nlohmann::ordered_json line{
        {"scenario", r.scenario},     {"attack", r.attack},
        {"trial", r.trial},           {"feasible", r.feasible},
        {"equation_check", r.equation_check},
        {"full_verify", r.full_verify},
    };
    if (r.predicted_success)
      line["predicted_success"] = *r.predicted_success;
    else
      line["predicted_success"] = nullptr;
    line["param_digest"] = r.param_digest;
    if (include_timings)
      line["timings"] = {{"keygen_ms", r.timings.keygen_ms},
                         {"login_ms", r.timings.login_ms},
                         {"attack_ms", r.timings.attack_ms},
                         {"verify_ms", r.timings.verify_ms}};
    sink << line.dump() << "\n";

    auto& s = summary[r.attack];
    ++s.trials;
    if (r.feasible) ++s.feasible;
    if (r.equation_check) ++s.equation_pass;
    if (r.full_verify == "OK") ++s.full_verify_ok;
  }
  sink << "\n";
  for (const auto& [label, s] : summary)
    sink << "summary attack=" << label << " trials=" << s.trials
         << " feasible=" << s.feasible << " equation_pass=" << s.equation_pass
         << " full_verify_ok=" << s.full_verify_ok << "\n";
  return summary;
}

}  // namespace ywc
