// Command-line entry points.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sequil/beliefs.h"
#include "sequil/error.h"
#include "sequil/estimation.h"
#include "sequil/export.h"
#include "sequil/game_io.h"
#include "sequil/level_k.h"
#include "sequil/logit.h"
#include "sequil/mps.h"
#include "sequil/observations.h"
#include "sequil/parallel.h"
#include "sequil/regions.h"
#include "sequil/restricted.h"
#include "sequil/simulate.h"
#include "sequil/stats.h"
#include "sequil/svg.h"

namespace {

using namespace sequil;

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    std::vector<size_t> w(header.size());
    for (size_t c = 0; c < header.size(); ++c) w[c] = header[c].size();
    for (const auto& r : rows) {
      for (size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (size_t c = 0; c < r.size(); ++c) {
        if (c) out << "  ";
        out << r[c] << std::string(w[c] - r[c].size(), ' ');
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& r) {
      for (size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

void emit(const Table& t, const std::string& csv_path) {
  t.print(std::cout);
  if (!csv_path.empty()) {
    std::ostringstream s;
    t.write_csv(s);
    write_file(csv_path, s.str());
  }
}

std::string mask_labels(const Game& game, int player, unsigned mask) {
  std::string s;
  for (int k = 0; k < game.num_strategies(player); ++k) {
    if (mask >> k & 1u) s += (s.empty() ? "" : "+") + game.label(player, k);
  }
  return s.empty() ? "-" : s;
}

std::string pattern_labels(const Game& game, const AnalysisSpace& space,
                           const std::vector<unsigned>& masks) {
  std::string s;
  for (size_t f = 0; f < masks.size(); ++f) {
    if (f) s += "/";
    s += mask_labels(game, space.factor_player(static_cast<int>(f)), masks[f]);
  }
  return s;
}

Table region_table(const Game& game, const RegionSet& set) {
  Table t{{"region", "dimension", "measure", "full_dim", "robust", "colorable", "best_reply",
           "color", "cells"}, {}};
  for (size_t r = 0; r < set.regions.size(); ++r) {
    const Region& g = set.regions[r];
    t.rows.push_back({std::to_string(r), std::to_string(g.dimension), num(g.measure, 6),
                      g.full_dimensional ? "yes" : "no", g.robust ? "yes" : "no",
                      g.colorable ? "yes" : "no", pattern_labels(game, set.space, g.pattern),
                      g.color ? pattern_labels(game, set.space, *g.color) : "-",
                      std::to_string(g.measure > 0.0 ? g.cells.size() : 0)});
  }
  return t;
}

std::string render_regions(const RegionSet& set, const std::string& title) {
  PlotSpec spec;
  spec.title = title;
  if (set.grid.num_factors() == 1 && set.grid.factor(0).k() == 3) {
    add_regions_ternary(spec, set);
    return render_ternary(spec);
  }
  if (set.grid.num_factors() == 2 && set.grid.factor(0).k() == 2 && set.grid.factor(1).k() == 2) {
    spec.labels = {"p", "q"};
    add_regions_square(spec, set);
    return render_square(spec);
  }
  throw ValidationError("figures are available for 3-strategy symmetric games and 2x2 games");
}

struct DataSet {
  std::map<std::string, Game> games;
  std::vector<Observation> rows;
  std::vector<GameData> per_game;  // games with data, sorted by id
};

DataSet load_data(const std::string& csv, const std::string& games_dir) {
  DataSet d;
  d.games = load_game_dir(games_dir.empty() ? bundled_game_dir() : std::filesystem::path(games_dir));
  d.rows = load_observations(csv, &d.games);
  std::set<std::string> ids;
  for (const auto& o : d.rows) ids.insert(o.game);
  for (const auto& id : ids) d.per_game.push_back(make_game_data(d.games.at(id), d.rows));
  if (d.per_game.empty()) throw ValidationError(csv + ": no observations");
  return d;
}

std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
  if (names.empty()) {
    return {ModelKind::kS, ModelKind::kEpsPerfect, ModelKind::kEpsProper, ModelKind::kLogit,
            ModelKind::kLevelK};
  }
  std::vector<ModelKind> out;
  for (const auto& n : names) out.push_back(parse_model(n));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Set-valued equilibrium analysis of normal-form games and experimental data"};
  app.set_config("--config", "", "Read options from a TOML/INI file (flags win)");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: $SEQUIL_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "S choice sets of a game at one epsilon");
  std::string a_game, a_svg, a_json, a_belief_svg, a_csv;
  double a_eps = 0.5;
  int a_grid = 0;
  bool a_beliefs = false;
  analyze->add_option("game", a_game, "Bundled game id or game file")->required();
  analyze->add_option("--epsilon", a_eps, "Epsilon in (0, 1]")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--grid", a_grid, "Grid points per edge (default by dimension)");
  analyze->add_flag("--beliefs", a_beliefs, "Also report the belief sets of colorable regions");
  analyze->add_option("--svg", a_svg, "Write a figure of the choice sets");
  analyze->add_option("--belief-svg", a_belief_svg, "Write a figure of the belief sets");
  analyze->add_option("--json", a_json, "Write the region export");
  analyze->add_option("--csv", a_csv, "Write the region table as CSV");

  // curve
  auto* curve = app.add_subcommand("curve", "Trace a one-parameter model curve");
  std::string c_game, c_model = "logit", c_out, c_svg;
  int c_steps = 100;
  double c_lambda_max = 2.0, c_tau_max = 10.0, c_eps_min = 0.01;
  curve->add_option("game", c_game, "Bundled game id or game file")->required();
  curve->add_option("--model", c_model, "logit, levelk, eps-perfect or eps-proper");
  curve->add_option("--steps", c_steps, "Samples after the starting point")->check(CLI::PositiveNumber);
  curve->add_option("--lambda-max", c_lambda_max, "Largest logit precision");
  curve->add_option("--tau-max", c_tau_max, "Largest Poisson mean for level-k");
  curve->add_option("--eps-min", c_eps_min, "Smallest epsilon for the restricted models");
  curve->add_option("--out", c_out, "Write the curve export here instead of stdout");
  curve->add_option("--svg", c_svg, "Write a ternary figure of the curve");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit models to choice data per game");
  std::string f_data, f_games, f_csv;
  std::vector<std::string> f_models;
  FitOptions f_opts;
  fit->add_option("data", f_data, "Observation CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--games", f_games, "Directory of game files (default: bundled)");
  fit->add_option("--model", f_models, "Models to fit (default: all)")->delimiter(',');
  fit->add_option("--grid", f_opts.grid_m, "Grid points per edge for the S model");
  fit->add_option("--lambda-max", f_opts.logit.lambda_max, "Largest logit precision");
  fit->add_option("--csv", f_csv, "Write the table as CSV");

  // mps
  auto* mps = app.add_subcommand("mps", "Measure of predictive success of the S model");
  std::string m_data, m_games, m_csv, m_unit = "subject";
  mps->add_option("data", m_data, "Observation CSV")->required()->check(CLI::ExistingFile);
  mps->add_option("--games", m_games, "Directory of game files (default: bundled)");
  mps->add_option("--unit", m_unit, "Hit unit: subject, session or observation")
      ->check(CLI::IsMember({"subject", "session", "observation"}));
  mps->add_option("--csv", m_csv, "Write the table as CSV");

  // beliefs
  auto* beliefs = app.add_subcommand("beliefs", "Diagnostics of stated beliefs");
  std::string b_data, b_games, b_csv;
  BeliefOptions b_opts;
  beliefs->add_option("data", b_data, "Observation CSV")->required()->check(CLI::ExistingFile);
  beliefs->add_option("--games", b_games, "Directory of game files (default: bundled)");
  beliefs->add_option("--resamples", b_opts.resamples, "Permutation resamples")
      ->check(CLI::PositiveNumber);
  beliefs->add_option("--seed", b_opts.seed, "Permutation seed");
  beliefs->add_option("--rounding", b_opts.rounding, "Rounding grid for level-k matches");
  beliefs->add_option("--csv", b_csv, "Write the table as CSV");

  // oos
  auto* oos = app.add_subcommand("oos", "Out-of-sample fit over all in-sample combinations");
  std::string o_data, o_games, o_model = "S", o_csv;
  std::vector<int> o_k;
  FitOptions o_opts;
  oos->add_option("data", o_data, "Observation CSV")->required()->check(CLI::ExistingFile);
  oos->add_option("--games", o_games, "Directory of game files (default: bundled)");
  oos->add_option("--model", o_model, "Model to evaluate");
  oos->add_option("--k", o_k, "In-sample sizes (default: 2 .. #games-1)")->delimiter(',');
  oos->add_option("--grid", o_opts.grid_m, "Grid points per edge for the S model");
  oos->add_option("--csv", o_csv, "Write the table as CSV");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthetic session data");
  std::string s_game, s_model = "logit", s_protocol = "perfect-stranger", s_out, s_prefix = "s";
  double s_param = 0.0, s_conc = 50.0;
  int s_subjects = 8, s_rounds = 7, s_sessions = 1;
  uint64_t s_seed = 1;
  bool s_no_beliefs = false;
  sim->add_option("game", s_game, "Bundled game id or game file")->required();
  sim->add_option("--model", s_model, "S, logit, levelk, eps-perfect or eps-proper");
  sim->add_option("--param", s_param, "Model parameter");
  sim->add_option("--subjects", s_subjects, "Subjects per session")->check(CLI::PositiveNumber);
  sim->add_option("--rounds", s_rounds, "Rounds per session")->check(CLI::PositiveNumber);
  sim->add_option("--sessions", s_sessions, "Number of sessions")->check(CLI::PositiveNumber);
  sim->add_option("--protocol", s_protocol, "perfect-stranger or minimal-repeat");
  sim->add_option("--seed", s_seed, "Seed of the first session (later sessions add 1 each)");
  sim->add_option("--concentration", s_conc, "Dirichlet concentration of stated beliefs");
  sim->add_flag("--no-beliefs", s_no_beliefs, "Omit belief columns");
  sim->add_option("--session-prefix", s_prefix, "Session id prefix");
  sim->add_option("--out", s_out, "Write the CSV here instead of stdout");

  // compare
  auto* compare = app.add_subcommand("compare", "KS distances and Wilcoxon tests between fits");
  std::string k_fits, k_csv;
  bool k_unweighted = false;
  compare->add_option("fits", k_fits, "CSV written by fit --csv")->required()->check(CLI::ExistingFile);
  compare->add_flag("--unweighted", k_unweighted, "Do not weight games by #Obs");
  compare->add_option("--csv", k_csv, "Write the KS matrix as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  set_thread_count(threads);

  if (analyze->parsed()) {
    const Game game = resolve_game(a_game);
    const AnalysisSpace space = default_space(game);
    const int m = a_grid > 0 ? a_grid : default_grid_m(space);
    const RegionSet set = enumerate_s_choice_sets(game, a_eps, m);
    std::cout << "game " << game.id() << "  epsilon " << num(a_eps) << "  grid " << m
              << "  regions " << set.regions.size() << "  union " << num(set.union_measure(), 6)
              << "  bound " << num(max_area_bound(space.factor_counts[0], a_eps), 6) << "\n";
    if (!set.diagnostic.empty()) std::cout << "note: " << set.diagnostic << "\n";
    emit(region_table(game, set), a_csv);
    if (!a_json.empty()) write_file(a_json, export_regions(set));
    if (!a_svg.empty()) {
      write_file(a_svg, render_regions(set, game.id() + "  eps = " + num(a_eps, 3)));
    }
    if (a_beliefs || !a_belief_svg.empty()) {
      const AnalysisSpace bspace = belief_space(game, space);
      const RegionSet bset =
          enumerate_s_belief_sets(game, region_colors(set), bspace, make_grid(bspace, m));
      std::cout << "belief sets\n";
      region_table(game, bset).print(std::cout);
      if (!a_belief_svg.empty()) {
        write_file(a_belief_svg, render_regions(bset, game.id() + "  beliefs  eps = " + num(a_eps, 3)));
      }
    }
    return 0;
  }

  if (curve->parsed()) {
    const Game game = resolve_game(c_game);
    const ModelKind model = parse_model(c_model);
    ModelCurve mc;
    switch (model) {
      case ModelKind::kLogit: {
        LogitOptions lo;
        lo.lambda_max = c_lambda_max;
        lo.steps = c_steps;
        mc = logit_qre_curve(game, lo);
        break;
      }
      case ModelKind::kLevelK:
        mc = level_k_curve(game, c_tau_max, c_steps);
        break;
      case ModelKind::kEpsPerfect:
        mc = eps_model_curve(game, RestrictedKind::kPerfect, c_steps, c_eps_min);
        break;
      case ModelKind::kEpsProper:
        mc = eps_model_curve(game, RestrictedKind::kProper, c_steps, c_eps_min);
        break;
      case ModelKind::kS:
        throw ValidationError("the S model is set-valued; use analyze");
    }
    const std::string doc = export_curve(mc);
    if (c_out.empty()) {
      std::cout << doc;
    } else {
      write_file(c_out, doc);
    }
    if (!c_svg.empty()) {
      if (!game.symmetric() || game.num_strategies(0) != 3) {
        throw ValidationError("curve figures need a symmetric 3-strategy game");
      }
      PlotSpec spec;
      spec.title = game.id() + "  " + model_name(model);
      CurveLayer line;
      for (const auto& s : mc.samples) {
        line.points.emplace_back(s.profile[0].begin(), s.profile[0].end());
      }
      spec.curves.push_back(std::move(line));
      write_file(c_svg, render_ternary(spec));
    }
    return 0;
  }

  if (fit->parsed()) {
    const DataSet d = load_data(f_data, f_games);
    Table t{{"game", "obs", "model", "parameter", "G", "dof", "Gbar", "note"}, {}};
    for (const auto& gd : d.per_game) {
      for (ModelKind model : parse_models(f_models)) {
        const FitResult r = fit_scalar_model({gd}, model, f_opts);
        t.rows.push_back({gd.game.id(), std::to_string(gd.observations), model_name(model),
                          num(r.parameter, 4), num(r.g, 4), std::to_string(r.dof),
                          num(r.g_bar, 4), r.diagnostic.empty() ? "" : "curve truncated"});
      }
    }
    emit(t, f_csv);
    return 0;
  }

  if (mps->parsed()) {
    const DataSet d = load_data(m_data, m_games);
    const HitUnit unit = m_unit == "subject"   ? HitUnit::kSubjectAverage
                         : m_unit == "session" ? HitUnit::kSessionAverage
                                               : HitUnit::kObservation;
    Table t{{"game", "points", "epsilon", "hit", "area", "mps"}, {}};
    std::vector<MpsEvaluator> evals;
    std::vector<std::vector<std::vector<std::vector<double>>>> points;
    for (const auto& gd : d.per_game) {
      evals.emplace_back(gd.game, gd.space, default_grid_m(gd.space));
      points.push_back(hit_points(gd, d.rows, unit));
      const MpsResult r = evals.back().best(points.back());
      t.rows.push_back({gd.game.id(), std::to_string(r.points), num(r.epsilon, 4),
                        num(r.hit_rate, 4), num(r.area_size, 4), num(r.mps, 4)});
    }
    MpsResult pooled;
    pooled.mps = -2.0;
    for (double eps : eps_grid(0.01)) {
      std::vector<MpsResult> per;
      for (size_t i = 0; i < evals.size(); ++i) per.push_back(evals[i].evaluate(points[i], eps));
      const MpsResult p = pooled_mps(per);
      if (p.mps > pooled.mps + 1e-12) pooled = p;
    }
    t.rows.push_back({"pooled", std::to_string(pooled.points), num(pooled.epsilon, 4),
                      num(pooled.hit_rate, 4), num(pooled.area_size, 4), num(pooled.mps, 4)});
    emit(t, m_csv);
    return 0;
  }

  if (beliefs->parsed()) {
    const DataSet d = load_data(b_data, b_games);
    Table t{{"game", "beliefs", "missing", "level_k", "rank1", "rank2", "rank3", "unbiased",
             "role", "mean_choice", "mean_belief", "p_value"}, {}};
    auto vec = [](const std::vector<double>& v) {
      std::string s;
      for (double x : v) s += (s.empty() ? "" : " ") + num(x, 2);
      return s;
    };
    for (const auto& gd : d.per_game) {
      const BeliefReport r = belief_diagnostics(gd.game, d.rows, b_opts);
      std::vector<std::string> base = {gd.game.id(), std::to_string(r.beliefs),
                                       std::to_string(r.missing), num(r.level_k_share, 3)};
      for (int k = 0; k < 3; ++k) {
        base.push_back(k < static_cast<int>(r.rank_share.size()) ? num(r.rank_share[k], 3) : "-");
      }
      base.push_back(num(r.unbiased_share, 3));
      if (r.expectations.empty()) {
        auto row = base;
        row.insert(row.end(), {"-", "-", "-", "-"});
        t.rows.push_back(row);
      }
      for (const auto& e : r.expectations) {
        auto row = base;
        row.insert(row.end(), {std::to_string(e.role), vec(e.mean_choice), vec(e.mean_belief),
                               num(e.test.p_value, 4)});
        t.rows.push_back(row);
      }
    }
    emit(t, b_csv);
    return 0;
  }

  if (oos->parsed()) {
    const DataSet d = load_data(o_data, o_games);
    const ModelKind model = parse_model(o_model);
    const int n = static_cast<int>(d.per_game.size());
    if (o_k.empty()) {
      for (int k = 2; k < n; ++k) o_k.push_back(k);
    }
    Table t{{"model", "k", "combinations", "average_G"}, {}};
    for (int k : o_k) {
      const OutOfSample r = out_of_sample(d.per_game, model, k, o_opts);
      t.rows.push_back({model_name(model), std::to_string(k), std::to_string(r.combinations),
                        num(r.average_g, 4)});
    }
    emit(t, o_csv);
    return 0;
  }

  if (sim->parsed()) {
    const Game game = resolve_game(s_game);
    AgentSpec agent;
    agent.model = parse_model(s_model);
    agent.parameter = s_param;
    agent.belief_concentration = s_conc;
    const std::vector<AgentSpec> agents(s_subjects, agent);
    std::vector<Observation> rows;
    for (int k = 0; k < s_sessions; ++k) {
      SessionSpec spec;
      spec.session = s_prefix + std::to_string(k + 1);
      spec.rounds = s_rounds;
      spec.protocol = parse_protocol(s_protocol);
      spec.seed = s_seed + k;
      spec.beliefs = !s_no_beliefs;
      auto part = simulate_session(game, agents, spec);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    const int belief_columns = s_no_beliefs || game.num_players() < 2 ? 0 : game.num_strategies(1);
    if (s_out.empty()) {
      write_observations(std::cout, rows, belief_columns);
    } else {
      std::ofstream f(s_out, std::ios::binary);
      if (!f) throw ValidationError("cannot write " + s_out);
      write_observations(f, rows, belief_columns);
    }
    return 0;
  }

  if (compare->parsed()) {
    std::ifstream in(k_fits);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> cols;
    {
      std::stringstream ss(line);
      std::string c;
      while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    auto col = [&](const std::string& name) {
      const auto it = std::find(cols.begin(), cols.end(), name);
      if (it == cols.end()) throw ValidationError(k_fits + ": missing column " + name);
      return static_cast<size_t>(it - cols.begin());
    };
    const size_t ci_game = col("game"), ci_obs = col("obs"), ci_model = col("model"),
                 ci_gbar = col("Gbar");
    // model -> game -> (gbar, obs)
    std::map<std::string, std::map<std::string, std::pair<double, double>>> table;
    std::vector<std::string> order;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string c;
      while (std::getline(ss, c, ',')) f.push_back(c);
      if (f.size() < std::max({ci_game, ci_obs, ci_model, ci_gbar}) + 1) {
        throw ValidationError(k_fits + ":" + std::to_string(lineno) + ": too few fields");
      }
      try {
        table[f[ci_model]][f[ci_game]] = {std::stod(f[ci_gbar]), std::stod(f[ci_obs])};
      } catch (const std::exception&) {
        throw ValidationError(k_fits + ":" + std::to_string(lineno) + ": bad number");
      }
      if (std::find(order.begin(), order.end(), f[ci_model]) == order.end()) {
        order.push_back(f[ci_model]);
      }
    }
    auto column = [&](const std::string& a, const std::string& b, std::vector<double>& va,
                      std::vector<double>& vb, std::vector<double>& w) {
      for (const auto& [game, v] : table[a]) {
        const auto it = table[b].find(game);
        if (it == table[b].end()) continue;
        va.push_back(v.first);
        vb.push_back(it->second.first);
        w.push_back(k_unweighted ? 1.0 : v.second);
      }
    };
    Table ks{{"KS_D"}, {}};
    for (const auto& m : order) ks.header.push_back(m);
    for (const auto& a : order) {
      std::vector<std::string> row = {a};
      for (const auto& b : order) {
        std::vector<double> va, vb, w;
        column(a, b, va, vb, w);
        row.push_back(va.empty() ? "-" : num(ks_d(va, vb, w, w), 3));
      }
      ks.rows.push_back(row);
    }
    emit(ks, k_csv);
    Table wx{{"model_a", "model_b", "games", "W_plus", "W_minus", "z", "p_value"}, {}};
    for (size_t i = 0; i < order.size(); ++i) {
      for (size_t j = i + 1; j < order.size(); ++j) {
        std::vector<double> va, vb, w;
        column(order[i], order[j], va, vb, w);
        const WilcoxonResult r = wilcoxon_signed_rank(va, vb);
        wx.rows.push_back({order[i], order[j], std::to_string(va.size()), num(r.w_plus, 1),
                           num(r.w_minus, 1), num(r.z, 3), num(r.p_value, 4)});
      }
    }
    std::cout << "\n";
    wx.print(std::cout);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sequil::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sequil::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
