#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "ywc/files.hpp"
#include "ywc/protocol.hpp"

using namespace ywc;

namespace {

// p=5, q=7, e=5 toy parameter set from the scheme walkthrough.
KicParams toy_kic() { return {5, 7, 35, 5, 5, 3}; }

SmartCardContents toy_card() {
  const KicParams kic = toy_kic();
  CidPolicy policy = MirrorCid{3};
  Rng rng(0);
  return issue_card(kic, {2, 4}, policy, rng);
}

}  // namespace

TEST_CASE("toy KIC parameters satisfy every invariant") {
  const KicParams kic = toy_kic();
  CHECK(kic.n == kic.p * kic.q);
  CHECK(kic.e * kic.d % ((kic.p - 1) * (kic.q - 1)) == 1);
  CHECK(oracle::exhaustive_order(kic.g % kic.p, kic.p) == kic.p - 1);
  CHECK(oracle::exhaustive_order(kic.g % kic.q, kic.q) == kic.q - 1);
}

TEST_CASE("issue_card computes the card secrets") {
  const SmartCardContents card = toy_card();
  CHECK(oracle::naive_mod_pow(2, 15, 35) == 8);
  CHECK(card.s == 8);
  CHECK(oracle::naive_mod_pow(3, 20, 35) == 16);
  CHECK(card.h == 16);
  CHECK(card.cid == 3);
}

TEST_CASE("issue_card rejects bad credentials") {
  const KicParams kic = toy_kic();
  CidPolicy policy = SequentialCid{};
  Rng rng(0);
  // identity sharing a factor with n factors the modulus
  try {
    issue_card(kic, {5, 4}, policy, rng);
    FAIL("expected CriticalFinding");
  } catch (const CriticalFinding& ex) {
    CHECK(ex.factor() == 5);
  }
  CHECK_THROWS_AS(issue_card(kic, {1, 4}, policy, rng), std::domain_error);
  CHECK_THROWS_AS(issue_card(kic, {36, 4}, policy, rng), std::domain_error);
  CHECK_THROWS_AS(issue_card(kic, {2, 0}, policy, rng), std::domain_error);
  CHECK_THROWS_AS(issue_card(kic, {2, 35}, policy, rng), std::domain_error);
}

TEST_CASE("sequential cid policy hands out distinct ids") {
  const KicParams kic = toy_kic();
  CidPolicy policy = SequentialCid{};
  Rng rng(0);
  const auto a = issue_card(kic, {2, 4}, policy, rng);
  const auto b = issue_card(kic, {3, 4}, policy, rng);
  CHECK(a.cid == 2);
  CHECK(b.cid == 3);
}

TEST_CASE("build_login_request toy values") {
  const LoginRequest m =
      build_login_request_with_nonce(toy_card(), 4, Timestamp{6}, 2);
  CHECK(oracle::naive_mod_pow(3, 8, 35) == 16);
  CHECK(m.x == 16);
  // y = s * h^(r*t) = 8 * 16^12 mod 35
  CHECK(Nat(8) * oracle::naive_mod_pow(16, 12, 35) % 35 == 8);
  CHECK(m.y == 8);
}

TEST_CASE("verify_login toy walkthrough") {
  const LoginRequest m =
      build_login_request_with_nonce(toy_card(), 4, Timestamp{6}, 2);

  auto d = verify_login(m, Timestamp{6}, 2);
  CHECK(d.accepted);
  CHECK(d.reason == Reason::OK);
  CHECK(oracle::naive_mod_pow(8, 5, 35) == 8);
  CHECK(oracle::naive_mod_pow(2, 3, 35) * oracle::naive_mod_pow(16, 6, 35) %
            35 ==
        8);

  LoginRequest tampered = m;
  tampered.y = 9;
  d = verify_login(tampered, Timestamp{6}, 2);
  CHECK_FALSE(d.accepted);
  CHECK(d.reason == Reason::EQUATION_FAILED);

  d = verify_login(m, Timestamp{9}, 2);
  CHECK(d.reason == Reason::STALE_TIMESTAMP);
  // future-dated requests rejected too
  d = verify_login(m, Timestamp{5}, 2);
  CHECK(d.reason == Reason::STALE_TIMESTAMP);

  LoginRequest bad_id = m;
  bad_id.id = 1;
  CHECK(verify_login(bad_id, Timestamp{6}, 2).reason == Reason::FORMAT_ID);
  bad_id.id = 5;  // shares a factor with n
  CHECK(verify_login(bad_id, Timestamp{6}, 2).reason == Reason::FORMAT_ID);
  LoginRequest bad_cid = m;
  bad_cid.cid = 1;
  CHECK(verify_login(bad_cid, Timestamp{6}, 2).reason == Reason::FORMAT_CID);
}

TEST_CASE("wrong password fails the verification equation") {
  // Note t=7 here: at t=6 with r=2 the exponent r*t hits a multiple of
  // ord(g mod 35) = 12 and the tiny toy group accepts any password.
  const LoginRequest m =
      build_login_request_with_nonce(toy_card(), 3, Timestamp{7}, 2);
  CHECK(verify_login(m, Timestamp{7}, 2).reason == Reason::EQUATION_FAILED);

  Rng rng(606);
  const KicParams kic = kic_setup(32, rng);
  Nat id;
  do {
    id = rng.between(2, kic.n - 1);
  } while (!default_id_format(id, kic.n));
  const Nat pw = rng.between(1, kic.n - 1);
  CidPolicy policy = RandomCid{};
  const auto card = issue_card(kic, {id, pw}, policy, rng);
  const auto m2 = build_login_request(card, pw + 1, Timestamp{1234}, rng);
  CHECK(verify_login(m2, Timestamp{1234}, 60).reason ==
        Reason::EQUATION_FAILED);
}

TEST_CASE("kic_setup invariants across seeds") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const KicParams kic = kic_setup(16, rng);
    CHECK(kic.n == kic.p * kic.q);
    CHECK(kic.p != kic.q);
    const Nat phi = (kic.p - 1) * (kic.q - 1);
    CHECK(kic.e * kic.d % phi == 1);
    CHECK(kic.e > 1);
    CHECK(kic.e < phi);
    CHECK(nt::multiplicative_order(kic.g % kic.p, kic.p) == kic.p - 1);
    CHECK(nt::multiplicative_order(kic.g % kic.q, kic.q) == kic.q - 1);
  }
}

TEST_CASE("kic_setup is deterministic and safe-prime-backed above toy scale") {
  Rng a(77), b(77);
  const KicParams ka = kic_setup(32, a);
  const KicParams kb = kic_setup(32, b);
  CHECK(ka.n == kb.n);
  CHECK(ka.d == kb.d);
  CHECK(ka.g == kb.g);
  CHECK(nt::is_probable_prime((ka.p - 1) / 2));
  CHECK(nt::is_probable_prime((ka.q - 1) / 2));
}

TEST_CASE("completeness: legitimate logins always verify") {
  std::uint64_t seed = 0;
  for (std::size_t bits : {32, 64}) {
    for (int i = 0; i < 25; ++i) {
      Rng rng(mix_seed(900 + bits, seed++));
      const KicParams kic = kic_setup(bits, rng);
      Nat id;
      do {
        id = rng.between(2, kic.n - 1);
      } while (!default_id_format(id, kic.n));
      const Nat pw = rng.between(1, kic.n - 1);
      CidPolicy policy = RandomCid{};
      const auto card = issue_card(kic, {id, pw}, policy, rng);
      const Timestamp t{rng.between(1000, 100000)};
      const LoginRequest m = build_login_request(card, pw, t, rng);
      const auto d = verify_login(m, Timestamp{t.ticks + 30}, 60);
      CHECK(d.reason == Reason::OK);
    }
  }
}

TEST_CASE("verification-equation algebra for legitimate requests") {
  // y^e = id^cid * g^(pw*r*t) mod n
  Rng rng(404);
  const KicParams kic = kic_setup(32, rng);
  const Nat pw = rng.between(1, kic.n - 1);
  Nat id;
  do {
    id = rng.between(2, kic.n - 1);
  } while (!default_id_format(id, kic.n));
  CidPolicy policy = RandomCid{};
  const auto card = issue_card(kic, {id, pw}, policy, rng);
  const Nat r = 12345;
  const Timestamp t{777};
  const auto m = build_login_request_with_nonce(card, pw, t, r);
  const Nat lhs = nt::mod_pow(m.y, kic.e, kic.n);
  const Nat rhs = nt::mod_pow(id, card.cid, kic.n) *
                  nt::mod_pow(kic.g, pw * r * t.ticks, kic.n) % kic.n;
  CHECK(lhs == rhs);
}

TEST_CASE("single-bit tampering is rejected") {
  Rng rng(31337);
  const KicParams kic = kic_setup(64, rng);
  Nat id;
  do {
    id = rng.between(2, kic.n - 1);
  } while (!default_id_format(id, kic.n));
  const Nat pw = rng.between(1, kic.n - 1);
  CidPolicy policy = RandomCid{};
  const auto card = issue_card(kic, {id, pw}, policy, rng);

  int rejected = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    const Timestamp t{1000 + i};
    LoginRequest m = build_login_request(card, pw, t, rng);
    const auto bit = static_cast<mp_bitcnt_t>(rng.next_u64() % 64);
    if (rng.next_u64() % 2)
      mpz_combit(m.x.get_mpz_t(), bit);
    else
      mpz_combit(m.y.get_mpz_t(), bit);
    if (verify_login(m, t, 60).reason == Reason::EQUATION_FAILED) ++rejected;
  }
  CHECK(rejected >= 99);
}

TEST_CASE("login request wire round trip") {
  const LoginRequest m =
      build_login_request_with_nonce(toy_card(), 4, Timestamp{6}, 2);
  CHECK(encode_request(m) == "id=2 cid=3 x=10 y=8 n=23 e=5 g=3 t=6");
  CHECK(decode_request(encode_request(m)) == m);

  Rng rng(1);
  const KicParams kic = kic_setup(64, rng);
  CidPolicy policy = RandomCid{};
  Nat id;
  do {
    id = rng.between(2, kic.n - 1);
  } while (!default_id_format(id, kic.n));
  const Nat pw = rng.between(1, kic.n - 1);
  const auto card = issue_card(kic, {id, pw}, policy, rng);
  for (int i = 0; i < 50; ++i) {
    const auto r = build_login_request(card, pw, Timestamp{1000 + i}, rng);
    CHECK(decode_request(encode_request(r)) == r);
  }

  CHECK_THROWS_AS(decode_request(""), std::invalid_argument);
  CHECK_THROWS_AS(decode_request("id=2 cid=3"), std::invalid_argument);
  CHECK_THROWS_AS(decode_request("cid=3 id=2 x=1 y=1 n=23 e=5 g=3 t=6"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      decode_request("id=2 cid=3 x=10 y=8 n=23 e=5 g=3 t=6 junk=1"),
      std::invalid_argument);
}

TEST_CASE("identity text encoding lands in range") {
  const Nat n = toy_kic().n;
  for (const char* name : {"", "alice", "bob@example", "x"}) {
    const Nat v = encode_identity(name, n);
    CHECK(v >= 2);
    CHECK(v < n);
  }
}

TEST_CASE("key material and card files round trip") {
  const KicParams kic = toy_kic();
  std::stringstream buf;
  write_kic_params(kic, buf);
  const KicParams back = read_kic_params(buf);
  CHECK(back.p == kic.p);
  CHECK(back.d == kic.d);

  std::stringstream pub;
  write_public_params(kic.public_params(), pub);
  const std::string pub_text = pub.str();
  // secret exponent never leaks into the public file
  CHECK(pub_text.find("\"d\"") == std::string::npos);
  CHECK(pub_text.find("\"p\"") == std::string::npos);
  const PublicParams pp = read_public_params(pub);
  CHECK(pp.n == 35);

  std::stringstream cbuf;
  write_card(toy_card(), cbuf);
  const SmartCardContents card = read_card(cbuf);
  CHECK(card.s == 8);
  CHECK(card.h == 16);
  CHECK(card.f_slot == toy_card().f_slot);
}
