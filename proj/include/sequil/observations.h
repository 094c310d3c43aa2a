#pragma once

// Choice and stated-belief observations in CSV form.
//
// Header: game,session,subject,round,role,choice[,belief_1,...,belief_K]
// Comma separated, dot decimal, LF line ends. `choice` is a 0-based
// strategy index or a strategy label of the game; `role` is the 0-based
// player index. Belief columns hold the stated distribution over the
// opponents' strategies and may be empty for rows without a belief.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sequil/game.h"

namespace sequil {

struct Observation {
  std::string game;
  std::string session;
  std::string subject;
  int round = 0;
  int role = 0;
  int choice = 0;
  std::vector<double> belief;  // empty when absent
};

// With `games`, rows are checked against their game (choice range, belief
// length) and choice labels are resolved. Diagnostics name line and column.
std::vector<Observation> parse_observations(
    std::istream& in, const std::string& source,
    const std::map<std::string, Game>* games = nullptr);
std::vector<Observation> load_observations(
    const std::filesystem::path& path,
    const std::map<std::string, Game>* games = nullptr);

// Writes the header and rows; beliefs with %.6f, `belief_columns` columns.
void write_observations(std::ostream& out, const std::vector<Observation>& rows,
                        int belief_columns);

// Rows of one game, in file order.
std::vector<Observation> rows_for_game(const std::vector<Observation>& rows,
                                       const std::string& game);

}  // namespace sequil
