#pragma once

#include <iosfwd>

#include "ywc/protocol.hpp"

namespace ywc {

// JSON file formats for key material and cards. Secret material (p, q, d)
// only ever appears in the secret-params file.
void write_public_params(const PublicParams& pp, std::ostream& out);
PublicParams read_public_params(std::istream& in);

void write_kic_params(const KicParams& kic, std::ostream& out);
KicParams read_kic_params(std::istream& in);

void write_card(const SmartCardContents& card, std::ostream& out);
SmartCardContents read_card(std::istream& in);

}  // namespace ywc
