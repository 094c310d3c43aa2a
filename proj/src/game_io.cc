#include "sequil/game_io.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sequil/error.h"

namespace sequil {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& field,
                       const std::string& what) {
  throw ValidationError(source + ": field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& source, const char* key) {
  if (!doc.contains(key)) fail(source, key, "missing");
  return doc.at(key);
}

// Flattens a nested tensor with the given shape, row-major.
void flatten(const json& node, const std::vector<int>& shape, size_t depth,
             const std::string& path, const std::string& source,
             std::vector<double>& out) {
  if (depth == shape.size()) {
    if (!node.is_number()) fail(source, path, "expected a number");
    out.push_back(node.get<double>());
    return;
  }
  if (!node.is_array() || static_cast<int>(node.size()) != shape[depth]) {
    fail(source, path, "expected an array of " + std::to_string(shape[depth]) + " entries");
  }
  for (size_t j = 0; j < node.size(); ++j) {
    flatten(node[j], shape, depth + 1, path + "[" + std::to_string(j) + "]", source, out);
  }
}

json nest(const std::vector<double>& flat, const std::vector<int>& shape, size_t depth,
          size_t& pos) {
  if (depth == shape.size()) return flat[pos++];
  json arr = json::array();
  for (int j = 0; j < shape[depth]; ++j) arr.push_back(nest(flat, shape, depth + 1, pos));
  return arr;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_of(const std::string& text, size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(),
                                         text.begin() + std::min(byte, text.size()), '\n'));
}

}  // namespace

Game game_from_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ":" + std::to_string(line_of(text, e.byte)) +
                          ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(source + ": expected a JSON object");
  const json& version = require(doc, source, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kGameFormatVersion) {
    fail(source, "format_version", "unsupported (expected " + std::to_string(kGameFormatVersion) + ")");
  }
  const json& id = require(doc, source, "id");
  if (!id.is_string() || id.get<std::string>().empty()) fail(source, "id", "expected a non-empty string");
  const json& players = require(doc, source, "players");
  if (!players.is_number_integer()) fail(source, "players", "expected an integer");
  const int n = players.get<int>();
  if (n < 2 || n > kMaxPlayers) fail(source, "players", "must be 2 or 3");
  const json& counts_j = require(doc, source, "strategy_counts");
  if (!counts_j.is_array() || static_cast<int>(counts_j.size()) != n) {
    fail(source, "strategy_counts", "expected " + std::to_string(n) + " integers");
  }
  std::vector<int> counts;
  for (size_t i = 0; i < counts_j.size(); ++i) {
    if (!counts_j[i].is_number_integer()) {
      fail(source, "strategy_counts[" + std::to_string(i) + "]", "expected an integer");
    }
    counts.push_back(counts_j[i].get<int>());
  }
  const bool symmetric = doc.value("symmetric", false);
  std::vector<std::vector<std::string>> labels;
  if (doc.contains("labels")) {
    const json& lj = doc.at("labels");
    if (!lj.is_array() || static_cast<int>(lj.size()) != n) fail(source, "labels", "expected one list per player");
    for (size_t i = 0; i < lj.size(); ++i) {
      std::vector<std::string> row;
      if (!lj[i].is_array()) fail(source, "labels[" + std::to_string(i) + "]", "expected a list of strings");
      for (const auto& l : lj[i]) {
        if (!l.is_string()) fail(source, "labels[" + std::to_string(i) + "]", "expected strings");
        row.push_back(l.get<std::string>());
      }
      labels.push_back(std::move(row));
    }
  }
  const bool has_sym = doc.contains("symmetric_payoffs");
  const bool has_full = doc.contains("payoffs");
  if (has_sym == has_full) {
    fail(source, "payoffs", "give exactly one of 'payoffs' and 'symmetric_payoffs'");
  }
  Game game;
  try {
    if (has_sym) {
      if (!symmetric) fail(source, "symmetric_payoffs", "requires \"symmetric\": true");
      std::vector<double> first;
      flatten(doc.at("symmetric_payoffs"), counts, 0, "symmetric_payoffs", source, first);
      game = Game::symmetric_from_first(id.get<std::string>(), n, counts[0], std::move(first),
                                        labels.empty() ? std::vector<std::string>{} : labels[0]);
    } else {
      const json& pj = doc.at("payoffs");
      if (!pj.is_array() || static_cast<int>(pj.size()) != n) fail(source, "payoffs", "expected one tensor per player");
      std::vector<std::vector<double>> payoffs(n);
      for (int i = 0; i < n; ++i) {
        flatten(pj[i], counts, 0, "payoffs[" + std::to_string(i) + "]", source, payoffs[i]);
      }
      game = Game(id.get<std::string>(), counts, std::move(payoffs), symmetric, labels);
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source, 0) == 0) throw;
    throw ValidationError(source + ": " + msg);
  }
  if (doc.contains("provenance")) {
    if (!doc.at("provenance").is_string()) fail(source, "provenance", "expected a string");
    game.set_provenance(doc.at("provenance").get<std::string>());
  }
  return game;
}

std::string game_to_json(const Game& game) {
  json doc = json::object();
  doc["format_version"] = kGameFormatVersion;
  doc["id"] = game.id();
  doc["players"] = game.num_players();
  doc["strategy_counts"] = game.strategy_counts();
  doc["symmetric"] = game.symmetric();
  json labels = json::array();
  for (int i = 0; i < game.num_players(); ++i) labels.push_back(game.labels(i));
  doc["labels"] = labels;
  if (game.symmetric()) {
    size_t pos = 0;
    doc["symmetric_payoffs"] = nest(game.tensor(0), game.strategy_counts(), 0, pos);
  } else {
    json all = json::array();
    for (int i = 0; i < game.num_players(); ++i) {
      size_t pos = 0;
      all.push_back(nest(game.tensor(i), game.strategy_counts(), 0, pos));
    }
    doc["payoffs"] = all;
  }
  if (!game.provenance().empty()) doc["provenance"] = game.provenance();
  return doc.dump(2) + "\n";
}

Game load_game(const std::filesystem::path& path) {
  return game_from_json(read_file(path), path.string());
}

void save_game(const Game& game, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << game_to_json(game);
}

std::string payoff_checksum(const Game& game) {
  std::string text;
  char buf[64];
  for (int i = 0; i < game.num_players(); ++i) {
    if (i > 0) text += ';';
    for (size_t q = 0; q < game.tensor(i).size(); ++q) {
      std::snprintf(buf, sizeof buf, q == 0 ? "%.17g" : ",%.17g", game.tensor(i)[q]);
      text += buf;
    }
  }
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::map<std::string, Game> load_game_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("game directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, Game> out;
  for (const auto& f : files) {
    Game g = load_game(f);
    const std::string id = g.id();
    if (!out.emplace(id, std::move(g)).second) {
      throw ValidationError(f.string() + ": duplicate game id '" + id + "'");
    }
  }
  return out;
}

std::filesystem::path bundled_game_dir() {
  if (const char* env = std::getenv("SEQUIL_GAMES")) return env;
  return SEQUIL_DATA_DIR;
}

Game resolve_game(const std::string& name_or_path, const std::filesystem::path& dir) {
  if (std::filesystem::is_regular_file(name_or_path)) return load_game(name_or_path);
  const auto games = load_game_dir(dir.empty() ? bundled_game_dir() : dir);
  auto it = games.find(name_or_path);
  if (it == games.end()) {
    std::string known;
    for (const auto& [id, g] : games) known += (known.empty() ? "" : ", ") + id;
    throw ValidationError("unknown game '" + name_or_path + "' (known: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> verify_checksums(const std::filesystem::path& dir) {
  std::map<std::string, std::string> pinned;
  std::ifstream in(dir / "CHECKSUMS");
  if (!in) return {"missing CHECKSUMS file in " + dir.string()};
  std::string id, sum;
  while (in >> id >> sum) pinned[id] = sum;
  std::vector<std::string> problems;
  for (const auto& [gid, game] : load_game_dir(dir)) {
    auto it = pinned.find(gid);
    if (it == pinned.end()) {
      problems.push_back(gid + ": no checksum entry");
    } else if (it->second != payoff_checksum(game)) {
      problems.push_back(gid + ": payoffs differ from the pinned checksum");
    }
  }
  return problems;
}

}  // namespace sequil
