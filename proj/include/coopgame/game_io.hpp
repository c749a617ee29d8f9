#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "coopgame/game.hpp"

namespace coopgame {

// Game file schema: {"n": int, "kind": "tabulated"|"voting"|"flid"|"additive",
// ...kind-specific payload}. Unknown kinds and length mismatches raise
// parse_error; a tabulated file with n > 25 raises capacity_error.
std::shared_ptr<const GameOracle> load_game(const std::string& path);
std::shared_ptr<const GameOracle> parse_game(const std::string& json_text);

// Serializes a FLID game in the file schema, numbers at 17 significant digits.
void write_flid_json(std::ostream& out, const FlidGame& game);

}  // namespace coopgame
