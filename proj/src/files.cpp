#include "ywc/files.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace ywc {

namespace {

Nat get_nat(const nlohmann::json& j, const char* key) {
  return from_hex(j.at(key).get<std::string>());
}

}  // namespace

void write_public_params(const PublicParams& pp, std::ostream& out) {
  nlohmann::ordered_json j{
      {"n", to_hex(pp.n)}, {"e", to_hex(pp.e)}, {"g", to_hex(pp.g)}};
  out << j.dump(2) << "\n";
}

PublicParams read_public_params(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  return {get_nat(j, "n"), get_nat(j, "e"), get_nat(j, "g")};
}

void write_kic_params(const KicParams& kic, std::ostream& out) {
  nlohmann::ordered_json j{{"p", to_hex(kic.p)}, {"q", to_hex(kic.q)},
                           {"n", to_hex(kic.n)}, {"e", to_hex(kic.e)},
                           {"d", to_hex(kic.d)}, {"g", to_hex(kic.g)}};
  out << j.dump(2) << "\n";
}

KicParams read_kic_params(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  return {get_nat(j, "p"), get_nat(j, "q"), get_nat(j, "n"),
          get_nat(j, "e"), get_nat(j, "d"), get_nat(j, "g")};
}

void write_card(const SmartCardContents& card, std::ostream& out) {
  nlohmann::ordered_json j{
      {"n", to_hex(card.n)},     {"e", to_hex(card.e)},
      {"g", to_hex(card.g)},     {"id", to_hex(card.id)},
      {"cid", to_hex(card.cid)}, {"s", to_hex(card.s)},
      {"h", to_hex(card.h)},     {"f", card.f_slot}};
  out << j.dump(2) << "\n";
}

SmartCardContents read_card(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  return {get_nat(j, "n"),   get_nat(j, "e"), get_nat(j, "g"),
          get_nat(j, "id"),  get_nat(j, "cid"), get_nat(j, "s"),
          get_nat(j, "h"),   j.at("f").get<std::string>()};
}

}  // namespace ywc
