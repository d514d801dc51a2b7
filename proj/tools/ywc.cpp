// Command-line front end for the Yang-Wang-Chang scheme and its attack
// harness. Exit codes: 0 success/accept, 1 verification reject, 2 input
// error, 3 infeasible attack.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ywc/attacks.hpp"
#include "ywc/files.hpp"
#include "ywc/harness.hpp"

namespace {

using namespace ywc;

constexpr int kExitReject = 1;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

Nat parse_nat(const std::string& s) {
  try {
    if (s.rfind("0x", 0) == 0) return from_hex(s.substr(2));
    return Nat(s);
  } catch (const std::exception&) {
    throw InputError("not a number: " + s);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

// Writes to the named file, or stdout when the path is empty.
void write_text(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    open_output(path) << text;
}

LoginRequest read_request_file(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty request file " + path);
  try {
    return decode_request(line);
  } catch (const std::exception& ex) {
    throw InputError(std::string("bad request line: ") + ex.what());
  }
}

KicParams read_kic_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_kic_params(in);
  } catch (const std::exception& ex) {
    throw InputError("bad KIC secret file " + path + ": " + ex.what());
  }
}

// Resolves --id/--id-text style pairs into a Nat.
Nat resolve_value(const std::string& numeric, const std::string& text,
                  const Nat& n, const char* what) {
  if (!numeric.empty() && !text.empty())
    throw InputError(std::string(what) + ": give either a number or text");
  if (!numeric.empty()) return parse_nat(numeric);
  if (!text.empty()) return encode_identity(text, n);
  throw InputError(std::string(what) + " is required");
}

// The built-in n=35 walkthrough: prints every intermediate of a legitimate
// session and all four forgeries.
int run_demo() {
  const KicParams kic{5, 7, 35, 5, 5, 3};
  std::cout << "KIC setup: p=" << kic.p << " q=" << kic.q << " n=" << kic.n
            << " e=" << kic.e << " d=" << kic.d << " g=" << kic.g << "\n";

  const UserCredentials creds{2, 4};
  CidPolicy policy = MirrorCid{3};
  Rng rng(0);
  const SmartCardContents card = issue_card(kic, creds, policy, rng);
  std::cout << "card: id=" << card.id << " cid=" << card.cid << " s=" << card.s
            << " h=" << card.h << "\n";

  const Timestamp t{6};
  const LoginRequest m = build_login_request_with_nonce(card, creds.pw, t, 2);
  std::cout << "login (r=2, t=6): x=" << m.x << " y=" << m.y << "\n";
  std::cout << "wire: " << encode_request(m) << "\n";
  const VerifyDecision legit = verify_login(m, t, 2);
  std::cout << "verify: " << to_string(legit.reason) << "\n";

  const Intercept icept = intercept_channel(m, t);

  const auto euclid = forge_via_euclid(icept, Timestamp{7});
  std::cout << "\nforgery via extended Euclid (t_a=7): u=" << euclid.u
            << " v=" << euclid.v << " x_f=" << euclid.forged.x
            << " y_f=" << euclid.forged.y << " -> "
            << to_string(verify_login(euclid.forged, Timestamp{7}, 2).reason)
            << "\n";

  const auto tf = forge_via_time_factor(icept, Timestamp{2}, Timestamp{4});
  std::cout << "forgery via time factor (window [2,4]): t_a=" << tf.t_a.ticks
            << " w=" << tf.w << " x_f=" << tf.forged.x << " -> "
            << to_string(verify_login(tf.forged, tf.t_a, 2).reason) << "\n";

  CidPolicy mirror = MirrorCid{card.cid};
  RegistrationEndpoint endpoint = [&](const UserCredentials& c) {
    return issue_card(kic, c, mirror, rng);
  };
  const auto rogue =
      impersonate_via_inverse_registration(icept, endpoint, Timestamp{6}, rng);
  std::cout << "impersonation via rogue registration: id_f=" << rogue.id_f
            << " S_k=" << rogue.rogue_card.s
            << " recovered S_i=" << rogue.recovered_s << " x_f="
            << rogue.forged.x << " y_f=" << rogue.forged.y << " -> "
            << to_string(verify_login(rogue.forged, Timestamp{6}, 2).reason)
            << "\n";

  const auto lit =
      forge_via_inverse_timestamp(icept, InverseMode::LITERAL, 2, &kic);
  std::cout << "forgery via inverse timestamp (literal, k=2): t_f="
            << lit.t_f.ticks << " x_f=" << lit.forged.x
            << " y_f=" << lit.forged.y << " -> "
            << to_string(verify_login(lit.forged, lit.t_f, 2).reason) << "\n";

  const LoginRequest m5 = build_login_request_with_nonce(card, creds.pw,
                                                         Timestamp{5}, 2);
  const auto wb = forge_via_inverse_timestamp(
      intercept_channel(m5, Timestamp{5}), InverseMode::WHITEBOX, 2, &kic);
  std::cout << "forgery via inverse timestamp (whitebox, t=5, k=2): t_f="
            << wb.t_f.ticks << " x_f=" << wb.forged.x << " y_f=" << wb.forged.y
            << " -> " << to_string(verify_login(wb.forged, wb.t_f, 2).reason)
            << "\n";
  return 0;
}

nlohmann::ordered_json request_json(const LoginRequest& m) {
  return {{"id", to_hex(m.id)}, {"cid", to_hex(m.cid)}, {"x", to_hex(m.x)},
          {"y", to_hex(m.y)},   {"n", to_hex(m.n)},     {"e", to_hex(m.e)},
          {"g", to_hex(m.g)},   {"t", to_hex(m.t.ticks)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yang-Wang-Chang smart-card authentication scheme and forgery "
               "attack harness"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate KIC key material");
  std::size_t bits = 32;
  std::uint64_t seed = 0;
  std::string out_public, out_secret;
  keygen->add_option("--bits", bits, "prime size in bits");
  keygen->add_option("--seed", seed, "rng seed");
  keygen->add_option("--out-public", out_public)->required();
  keygen->add_option("--out-secret", out_secret)->required();

  // register
  auto* reg = app.add_subcommand("register", "issue a smart card");
  std::string secret_path, id_str, id_text, pw_str, pw_text, cid_policy_name,
      cid_str, out_path;
  reg->add_option("--secret", secret_path)->required();
  reg->add_option("--id", id_str, "identity as a number");
  reg->add_option("--id-text", id_text, "identity as text");
  reg->add_option("--pw", pw_str, "password as a number");
  reg->add_option("--pw-text", pw_text, "password as text");
  reg->add_option("--cid-policy", cid_policy_name)
      ->default_val("sequential");
  reg->add_option("--cid", cid_str, "card id for the mirror policy");
  reg->add_option("--seed", seed);
  reg->add_option("--out", out_path);

  // login
  auto* login = app.add_subcommand("login", "build a login request");
  std::string card_path, t_str;
  login->add_option("--card", card_path)->required();
  login->add_option("--pw", pw_str);
  login->add_option("--pw-text", pw_text);
  login->add_option("--t", t_str, "timestamp ticks")->required();
  login->add_option("--seed", seed);
  login->add_option("--out", out_path);

  // verify
  auto* verify = app.add_subcommand("verify", "verify a login request line");
  std::string request_path, now_str, delta_str = "60", public_path;
  verify->add_option("--request", request_path)->required();
  verify->add_option("--now", now_str, "server timestamp")->required();
  verify->add_option("--delta-t", delta_str, "freshness window");
  verify->add_option("--public", public_path,
                     "public params to cross-check n, e, g");

  // attack
  auto* attack = app.add_subcommand("attack", "forge from an intercept");
  std::string type_str, t_a_str, lo_str, hi_str, t_f_str, k_str;
  std::string atk_cid_policy = "mirror";
  bool allow_secret = false;
  attack->add_option("--type", type_str,
                     "euclid | time-factor | inverse-id | inverse-ts-literal "
                     "| inverse-ts-whitebox")
      ->required();
  attack->add_option("--request", request_path, "intercepted request line")
      ->required();
  attack->add_option("--t-a", t_a_str, "attacker timestamp (euclid)");
  attack->add_option("--window-lo", lo_str, "timestamp window (time-factor)");
  attack->add_option("--window-hi", hi_str, "timestamp window (time-factor)");
  attack->add_option("--t-f", t_f_str, "forgery timestamp (inverse-id)");
  attack->add_option("--k", k_str, "random base (inverse-ts)");
  attack->add_option("--secret", secret_path,
                     "KIC secret file (KIC side of inverse-id; analysis "
                     "input for inverse-ts)");
  attack->add_flag("--allow-secret-access", allow_secret,
                   "required to read KIC secrets in whitebox mode");
  attack->add_option("--cid-policy", atk_cid_policy);
  attack->add_option("--cid", cid_str);
  attack->add_option("--seed", seed);
  attack->add_option("--out", out_path, "forged request line destination");

  // run-scenario
  auto* scenario = app.add_subcommand("run-scenario", "execute a config file");
  std::string config_path;
  bool with_timings = false;
  scenario->add_option("--config", config_path)->required();
  scenario->add_option("--out", out_path, "report destination");
  scenario->add_flag("--timings", with_timings,
                     "append per-phase timings (breaks byte determinism)");

  auto* demo = app.add_subcommand("demo", "toy fixture walkthrough (n=35)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) {
      Rng rng(seed);
      const KicParams kic = kic_setup(bits, rng);
      std::ofstream pub = open_output(out_public);
      write_public_params(kic.public_params(), pub);
      std::ofstream sec = open_output(out_secret);
      write_kic_params(kic, sec);
      return 0;
    }

    if (*reg) {
      const KicParams kic = read_kic_file(secret_path);
      const UserCredentials creds{
          resolve_value(id_str, id_text, kic.n, "--id"),
          resolve_value(pw_str, pw_text, kic.n, "--pw")};
      CidPolicy policy = parse_cid_policy(cid_policy_name);
      if (std::holds_alternative<MirrorCid>(policy)) {
        if (cid_str.empty()) throw InputError("mirror policy needs --cid");
        policy = MirrorCid{parse_nat(cid_str)};
      }
      Rng rng(seed);
      const SmartCardContents card = issue_card(kic, creds, policy, rng);
      std::ostringstream buf;
      write_card(card, buf);
      write_text(out_path, buf.str());
      return 0;
    }

    if (*login) {
      auto in = open_input(card_path);
      const SmartCardContents card = read_card(in);
      const Nat pw = resolve_value(pw_str, pw_text, card.n, "--pw");
      Rng rng(seed);
      const LoginRequest m =
          build_login_request(card, pw, Timestamp{parse_nat(t_str)}, rng);
      write_text(out_path, encode_request(m) + "\n");
      return 0;
    }

    if (*verify) {
      const LoginRequest m = read_request_file(request_path);
      if (!public_path.empty()) {
        auto in = open_input(public_path);
        const PublicParams pp = read_public_params(in);
        if (pp.n != m.n || pp.e != m.e || pp.g != m.g)
          throw InputError("request parameters do not match " + public_path);
      }
      const VerifyDecision d =
          verify_login(m, Timestamp{parse_nat(now_str)}, parse_nat(delta_str));
      std::cout << to_string(d.reason) << "\n";
      return d.accepted ? 0 : kExitReject;
    }

    if (*attack) {
      const LoginRequest m = read_request_file(request_path);
      const Intercept icept{m, m.t};
      Rng rng(seed);
      nlohmann::ordered_json transcript{{"type", type_str}};
      LoginRequest forged;

      if (type_str == "euclid") {
        if (t_a_str.empty()) throw InputError("euclid needs --t-a");
        const auto f = forge_via_euclid(icept, Timestamp{parse_nat(t_a_str)});
        transcript["t_a"] = f.t_a.ticks.get_str();
        transcript["u"] = f.u.get_str();
        transcript["v"] = f.v.get_str();
        forged = f.forged;
      } else if (type_str == "time-factor") {
        if (lo_str.empty() || hi_str.empty())
          throw InputError("time-factor needs --window-lo and --window-hi");
        const auto f = forge_via_time_factor(icept, Timestamp{parse_nat(lo_str)},
                                             Timestamp{parse_nat(hi_str)});
        transcript["t_a"] = f.t_a.ticks.get_str();
        transcript["w"] = f.w.get_str();
        forged = f.forged;
      } else if (type_str == "inverse-id") {
        if (secret_path.empty())
          throw InputError("inverse-id needs --secret to run the KIC side");
        const KicParams kic = read_kic_file(secret_path);
        CidPolicy policy = parse_cid_policy(atk_cid_policy);
        if (std::holds_alternative<MirrorCid>(policy))
          policy = MirrorCid{cid_str.empty() ? m.cid : parse_nat(cid_str)};
        RegistrationEndpoint endpoint = [&](const UserCredentials& c) {
          return issue_card(kic, c, policy, rng);
        };
        const Timestamp t_f{t_f_str.empty() ? m.t.ticks : parse_nat(t_f_str)};
        const auto f =
            impersonate_via_inverse_registration(icept, endpoint, t_f, rng);
        transcript["id_f"] = to_hex(f.id_f);
        transcript["rogue_cid"] = to_hex(f.rogue_card.cid);
        transcript["rogue_s"] = to_hex(f.rogue_card.s);
        transcript["recovered_s"] = to_hex(f.recovered_s);
        transcript["cid_collision"] = f.cid_collision;
        forged = f.forged;
      } else if (type_str == "inverse-ts-literal" ||
                 type_str == "inverse-ts-whitebox") {
        const bool whitebox = type_str == "inverse-ts-whitebox";
        std::optional<KicParams> kic;
        if (whitebox && !allow_secret)
          throw InputError("whitebox mode needs --allow-secret-access");
        if (!secret_path.empty() && (allow_secret || whitebox))
          kic = read_kic_file(secret_path);
        if (whitebox && !kic)
          throw InputError("whitebox mode needs --secret");
        const Nat k = k_str.empty() ? rng.between(2, m.n - 1) : parse_nat(k_str);
        const auto f = forge_via_inverse_timestamp(
            icept, whitebox ? InverseMode::WHITEBOX : InverseMode::LITERAL, k,
            kic ? &*kic : nullptr);
        transcript["t_f"] = to_hex(f.t_f.ticks);
        transcript["k"] = to_hex(f.k);
        if (f.predicted_success)
          transcript["predicted_success"] = *f.predicted_success;
        forged = f.forged;
      } else {
        throw InputError("unknown attack type: " + type_str);
      }

      transcript["equation_check"] = equation_holds(forged);
      transcript["forged"] = request_json(forged);
      std::cout << transcript.dump(2) << "\n";
      if (!out_path.empty()) write_text(out_path, encode_request(forged) + "\n");
      return 0;
    }

    if (*scenario) {
      auto in = open_input(config_path);
      ScenarioConfig cfg;
      try {
        cfg = load_scenario_config(in);
      } catch (const std::exception& ex) {
        throw InputError("bad config " + config_path + ": " + ex.what());
      }
      const auto records = run_scenario(cfg);
      std::ostringstream buf;
      emit_report(records, buf, with_timings);
      write_text(out_path, buf.str());
      return 0;
    }

    if (*demo) return run_demo();
  } catch (const Infeasible& ex) {
    std::cerr << "infeasible: " << ex.what() << "\n";
    return kExitInfeasible;
  } catch (const InputError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  }
  return 0;
}
