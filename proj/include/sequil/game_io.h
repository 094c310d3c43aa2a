#pragma once

// Game files (JSON) and the bundled fixture catalogue.
//
// Layout:
//   {
//     "format_version": 1,
//     "id": "g1",
//     "players": 2,
//     "strategy_counts": [3, 3],
//     "symmetric": true,
//     "labels": [["R", "B", "Y"], ["R", "B", "Y"]],
//     "symmetric_payoffs": [[10, 120, 10], ...],   // player 0's tensor, or
//     "payoffs": [<tensor of player 0>, <tensor of player 1>, ...],
//     "provenance": "..."
//   }
// Tensors are nested arrays indexed [x_0][x_1]...[x_{n-1}] (the first
// player's strategy is the outermost index). "symmetric_payoffs" is only
// valid with "symmetric": true; the other players' tensors then follow by
// rotating the profile (see game.h).

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sequil/game.h"

namespace sequil {

inline constexpr int kGameFormatVersion = 1;

Game game_from_json(const std::string& text, const std::string& source = "<string>");
std::string game_to_json(const Game& game);

Game load_game(const std::filesystem::path& path);
void save_game(const Game& game, const std::filesystem::path& path);

// FNV-1a 64 of the payoff tensors printed with %.17g, as 16 hex digits.
std::string payoff_checksum(const Game& game);

// All *.json games in dir keyed by id.
std::map<std::string, Game> load_game_dir(const std::filesystem::path& dir);

// Directory of bundled games: $SEQUIL_GAMES, else the build-time path.
std::filesystem::path bundled_game_dir();

// A game by file path or by id in dir (default: bundled games).
Game resolve_game(const std::string& name_or_path,
                  const std::filesystem::path& dir = {});

// Compares every game in dir with its CHECKSUMS line; returns one message
// per mismatch or missing entry.
std::vector<std::string> verify_checksums(const std::filesystem::path& dir);

}  // namespace sequil
