#pragma once

#include <iosfwd>
#include <map>

#include "ywc/attacks.hpp"

namespace ywc {

enum class ClockMode { ABSTRACT, REALISTIC };

struct ClockModel {
  ClockMode mode = ClockMode::ABSTRACT;
  Nat start = 1000;  // first login timestamp lower bound
  Nat delta_t = 60;  // freshness window
};

enum class AttackKind {
  NONE,
  EUCLID,
  TIME_FACTOR,
  INVERSE_ID,
  INVERSE_TS_LITERAL,
  INVERSE_TS_WHITEBOX,
  TAMPER,  // negative control: one bit of x or y flipped post-interception
};

std::string attack_name(AttackKind k);
AttackKind parse_attack(const std::string& name);

struct ScenarioConfig {
  std::string id = "scenario";
  std::uint64_t seed = 0;
  std::size_t prime_bits = 32;
  std::string cid_policy = "sequential";
  AttackKind attack = AttackKind::NONE;
  std::size_t trials = 1;
  ClockModel clock;
};

ScenarioConfig load_scenario_config(std::istream& in);

struct PhaseTimings {
  double keygen_ms = 0;
  double login_ms = 0;
  double attack_ms = 0;
  double verify_ms = 0;
};

struct VerdictRecord {
  std::string scenario;
  std::string attack;
  std::size_t trial = 0;
  bool feasible = false;
  bool equation_check = false;       // step-4 equation alone
  std::string full_verify = "NONE";  // full decision incl. format + freshness
  std::optional<bool> predicted_success;
  std::string param_digest;  // hash of the trial's KicParams
  PhaseTimings timings;      // excluded from the determinism contract
};

// Stores the canonical wire encoding; the returned value round-trips it.
Intercept intercept_channel(const LoginRequest& m, const Timestamp& captured_at);

// One record per trial, fully deterministic given config.seed. Throws on a
// corrupt trial (legitimate login rejected): that is an implementation bug,
// never an expected outcome.
std::vector<VerdictRecord> run_scenario(const ScenarioConfig& config);

struct AttackSummary {
  std::size_t trials = 0;
  std::size_t feasible = 0;
  std::size_t equation_pass = 0;
  std::size_t full_verify_ok = 0;
};

using Summary = std::map<std::string, AttackSummary>;

// Line-delimited records in stable key order, blank line, then one summary
// block per attack label. Deterministic unless include_timings is set.
Summary emit_report(const std::vector<VerdictRecord>& records,
                    std::ostream& sink, bool include_timings = false);

}  // namespace ywc
