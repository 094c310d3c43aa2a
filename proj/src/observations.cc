#include "sequil/observations.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sequil/error.h"

namespace sequil {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t pos = 0;
  try {
    out = std::stoi(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size() && std::isfinite(out);
}

const char* kColumns[] = {"game", "session", "subject", "round", "role", "choice"};

}  // namespace

std::vector<Observation> parse_observations(std::istream& in, const std::string& source,
                                            const std::map<std::string, Game>* games) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& column, const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(lineno) + ": column '" + column +
                          "': " + what);
  };
  if (!std::getline(in, line)) throw ValidationError(source + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 6) fail("header", "expected game,session,subject,round,role,choice");
  for (int c = 0; c < 6; ++c) {
    if (header[c] != kColumns[c]) fail(header[c], std::string("expected '") + kColumns[c] + "'");
  }
  const int belief_cols = static_cast<int>(header.size()) - 6;
  for (int b = 0; b < belief_cols; ++b) {
    if (header[6 + b] != "belief_" + std::to_string(b + 1)) {
      fail(header[6 + b], "expected 'belief_" + std::to_string(b + 1) + "'");
    }
  }
  std::vector<Observation> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find('"') != std::string::npos) fail("row", "quoted fields are not supported");
    const auto f = split(line);
    if (f.size() != header.size()) {
      fail("row", "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()));
    }
    Observation o;
    o.game = f[0];
    o.session = f[1];
    o.subject = f[2];
    if (o.game.empty()) fail("game", "empty");
    if (!parse_int(f[3], o.round)) fail("round", "expected an integer, got '" + f[3] + "'");
    if (!parse_int(f[4], o.role) || o.role < 0) fail("role", "expected a player index, got '" + f[4] + "'");
    const Game* game = nullptr;
    if (games) {
      auto it = games->find(o.game);
      if (it == games->end()) fail("game", "unknown game '" + o.game + "'");
      game = &it->second;
      if (o.role >= game->num_players()) fail("role", "out of range for " + o.game);
    }
    if (!parse_int(f[5], o.choice)) {
      if (!game) fail("choice", "labels need the game definitions; got '" + f[5] + "'");
      try {
        o.choice = game->label_index(o.role, f[5]);
      } catch (const ValidationError&) {
        fail("choice", "unknown strategy '" + f[5] + "'");
      }
    }
    if (o.choice < 0 || (game && o.choice >= game->num_strategies(o.role))) {
      fail("choice", "strategy index out of range");
    }
    bool any = false;
    for (int b = 0; b < belief_cols; ++b) any = any || !f[6 + b].empty();
    if (any) {
      int expected = belief_cols;
      if (game) expected = game->num_strategies(game->num_players() == 2 ? 1 - o.role : 0);
      for (int b = 0; b < belief_cols; ++b) {
        double v = 0.0;
        if (b >= expected) {
          if (!f[6 + b].empty()) fail(header[6 + b], "more belief entries than opponent strategies");
          continue;
        }
        if (!parse_double(f[6 + b], v) || v < 0.0) fail(header[6 + b], "expected a probability");
        o.belief.push_back(v);
      }
      if (static_cast<int>(o.belief.size()) != expected) fail("belief_1", "incomplete belief");
      double sum = 0.0;
      for (double v : o.belief) sum += v;
      if (std::abs(sum - 1.0) > 1e-4) fail("belief_1", "belief does not sum to 1");
      for (double& v : o.belief) v /= sum;
    }
    rows.push_back(std::move(o));
  }
  return rows;
}

std::vector<Observation> load_observations(const std::filesystem::path& path,
                                           const std::map<std::string, Game>* games) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_observations(in, path.string(), games);
}

void write_observations(std::ostream& out, const std::vector<Observation>& rows,
                        int belief_columns) {
  out << "game,session,subject,round,role,choice";
  for (int b = 0; b < belief_columns; ++b) out << ",belief_" << b + 1;
  out << '\n';
  char buf[32];
  for (const auto& o : rows) {
    out << o.game << ',' << o.session << ',' << o.subject << ',' << o.round << ','
        << o.role << ',' << o.choice;
    for (int b = 0; b < belief_columns; ++b) {
      out << ',';
      if (b < static_cast<int>(o.belief.size())) {
        std::snprintf(buf, sizeof buf, "%.6f", o.belief[b]);
        out << buf;
      }
    }
    out << '\n';
  }
}

std::vector<Observation> rows_for_game(const std::vector<Observation>& rows,
                                       const std::string& game) {
  std::vector<Observation> out;
  for (const auto& o : rows) {
    if (o.game == game) out.push_back(o);
  }
  return out;
}

}  // namespace sequil
