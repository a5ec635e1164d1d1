#include "bce/io.hpp"

#include <fstream>

namespace bce::io {

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return doc;
}

Rat parse_cell(const json& cell) {
  if (cell.is_number_integer()) return Rat(cell.get<long long>());
  if (cell.is_string()) return parse_rational(cell.get<std::string>());
  throw ParseError("payoff cells must be integers or rational strings");
}

namespace {

std::vector<std::string> parse_labels(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array())
    throw ParseError(std::string("missing '") + key + "' array");
  std::vector<std::string> out;
  for (const auto& item : doc[key]) {
    if (!item.is_string()) throw ParseError(std::string(key) + " labels must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

RatMatrix parse_matrix(const json& rows, Eigen::Index expect_rows, Eigen::Index expect_cols,
                       const char* what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != expect_rows)
    throw ParseError(std::string(what) + ": expected " + std::to_string(expect_rows) + " rows");
  RatMatrix m(expect_rows, expect_cols);
  for (Eigen::Index r = 0; r < expect_rows; ++r) {
    const auto& row = rows[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expect_cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(r) + " has wrong width");
    for (Eigen::Index c = 0; c < expect_cols; ++c) m(r, c) = parse_cell(row[static_cast<size_t>(c)]);
  }
  return m;
}

}  // namespace

DecisionProblem parse_problem(const json& doc) {
  auto states = parse_labels(doc, "states");
  auto actions = parse_labels(doc, "actions");
  if (!doc.contains("utility")) throw ParseError("missing 'utility' matrix");
  RatMatrix u = parse_matrix(doc["utility"], static_cast<Eigen::Index>(actions.size()),
                             static_cast<Eigen::Index>(states.size()), "utility");
  return DecisionProblem::create(std::move(states), std::move(actions), std::move(u));
}

Distribution parse_distribution(const json& doc, const std::vector<std::string>& domain) {
  if (!doc.is_object()) throw ParseError("distribution must be a JSON object");
  RatVector w = RatVector::Zero(static_cast<Eigen::Index>(domain.size()));
  for (const auto& [key, value] : doc.items()) {
    Eigen::Index idx = -1;
    for (size_t i = 0; i < domain.size(); ++i)
      if (domain[i] == key) { idx = static_cast<Eigen::Index>(i); break; }
    if (idx < 0) throw ParseError("unknown label in distribution: " + key);
    w(idx) = parse_cell(value);
  }
  return Distribution::create(domain, std::move(w));
}

PosteriorDistribution parse_tau(const json& doc, const std::vector<std::string>& states) {
  if (!doc.contains("posteriors") || !doc.contains("weights"))
    throw ParseError("tau files need 'posteriors' and 'weights'");
  std::vector<RatVector> posteriors;
  for (const auto& entry : doc["posteriors"]) {
    Distribution d = parse_distribution(entry, states);
    posteriors.push_back(d.weights);
  }
  const auto& wdoc = doc["weights"];
  if (!wdoc.is_array() || wdoc.size() != posteriors.size())
    throw ParseError("tau weights must match the posterior count");
  RatVector w(static_cast<Eigen::Index>(wdoc.size()));
  for (size_t k = 0; k < wdoc.size(); ++k) w(static_cast<Eigen::Index>(k)) = parse_cell(wdoc[k]);
  return PosteriorDistribution::create(std::move(posteriors), std::move(w));
}

ProblemFamily parse_family(const json& doc) {
  ProblemFamily family;
  family.base = parse_problem(doc);
  if (!doc.contains("theta") || !doc["theta"].is_array() || doc["theta"].empty())
    throw ParseError("family files need a nonempty 'theta' grid");
  for (const auto& t : doc["theta"]) family.thetas.push_back(parse_cell(t));

  std::string mode = doc.value("mode", "shift");
  if (mode == "shift") {
    family.mode = ProblemFamily::Mode::Shift;
  } else if (mode == "ratio") {
    family.mode = ProblemFamily::Mode::Ratio;
    if (!doc.contains("cI") || !doc.contains("cII"))
      throw ParseError("ratio families need 'cI' and 'cII' schedules");
    for (const auto& c : doc["cI"]) family.cost_type1.push_back(parse_cell(c));
    for (const auto& c : doc["cII"]) family.cost_type2.push_back(parse_cell(c));
    if (family.cost_type1.size() != family.thetas.size() ||
        family.cost_type2.size() != family.thetas.size())
      throw ParseError("cost schedules must match the theta grid");
    if (!doc.contains("hat_states")) throw ParseError("ratio families need 'hat_states'");
    for (const auto& s : doc["hat_states"]) {
      auto idx = family.base.state_index(s.get<std::string>());
      if (!idx) throw ParseError("unknown hat state: " + s.get<std::string>());
      family.hat_states.push_back(*idx);
    }
  } else if (mode == "table") {
    family.mode = ProblemFamily::Mode::Table;
    if (!doc.contains("utility_per_theta"))
      throw ParseError("table families need 'utility_per_theta'");
    const auto& tables = doc["utility_per_theta"];
    if (!tables.is_array() || tables.size() != family.thetas.size())
      throw ParseError("one utility table per theta required");
    for (const auto& table : tables)
      family.tables.push_back(parse_matrix(table, family.base.num_actions(),
                                           family.base.num_states(), "utility_per_theta"));
  } else {
    throw ParseError("unknown family mode: " + mode);
  }
  return family;
}

RingGame parse_ring(const json& doc) {
  RingGame game;
  game.states = parse_labels(doc, "states");
  if (!doc.contains("players") || !doc["players"].is_array() || doc["players"].empty())
    throw ParseError("ring files need a nonempty 'players' array");
  Eigen::Index prev = static_cast<Eigen::Index>(game.states.size());
  for (const auto& pdoc : doc["players"]) {
    RingGame::Player player;
    player.actions = parse_labels(pdoc, "actions");
    if (!pdoc.contains("payoff")) throw ParseError("each ring player needs a 'payoff' table");
    player.payoff = parse_matrix(pdoc["payoff"], static_cast<Eigen::Index>(player.actions.size()),
                                 prev, "payoff");
    prev = static_cast<Eigen::Index>(player.actions.size());
    game.players.push_back(std::move(player));
  }
  return game;
}

PrivateGame parse_private_game(const json& doc) {
  PrivateGame game;
  game.states = parse_labels(doc, "states");
  if (!doc.contains("players") || !doc["players"].is_array() || doc["players"].empty())
    throw ParseError("game files need a nonempty 'players' array");
  for (const auto& pdoc : doc["players"]) {
    PrivateGame::Player player;
    player.actions = parse_labels(pdoc, "actions");
    if (!pdoc.contains("utility")) throw ParseError("each player needs a 'utility' table");
    player.utility = parse_matrix(pdoc["utility"], static_cast<Eigen::Index>(player.actions.size()),
                                  static_cast<Eigen::Index>(game.states.size()), "utility");
    game.players.push_back(std::move(player));
  }
  return game;
}

json rat_json(const Rat& value) { return rat_to_string(value); }

json vector_json(const RatVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rat_to_string(v(i)));
  return out;
}

json matrix_json(const RatMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json decimal_json(const RatVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rat_to_decimal(v(i)));
  return out;
}

json verdict_json(const Verdict& verdict, const Distribution& prior,
                  const Distribution& marginal) {
  json out;
  out["consistent"] = verdict.consistent;
  if (verdict.witness) out["pi"] = matrix_json(verdict.witness->pi);
  if (verdict.dual) {
    json dual;
    dual["p"] = vector_json(verdict.dual->p);
    dual["q"] = vector_json(verdict.dual->q);
    dual["lambda_up"] = vector_json(verdict.dual->lambda_up());
    dual["lambda_down"] = vector_json(verdict.dual->lambda_down());
    dual["lambda"] = matrix_json(verdict.dual->lambda);
    dual["objective"] = rat_json(verdict.dual->objective(prior, marginal));
    out["dual"] = std::move(dual);
  }
  if (verdict.dominated_action) out["dominated_action"] = *verdict.dominated_action;
  return out;
}

json testfn_json(const TestFunction& fn) {
  json out;
  out["p"] = vector_json(fn.p);
  out["q"] = vector_json(fn.q);
  out["tag"] = fn.tag;
  return out;
}

json test_verdict_json(const TestVerdict& verdict) {
  json out;
  out["consistent"] = verdict.consistent;
  out["exactness"] =
      verdict.exactness == Exactness::Characterization ? "characterization" : "necessary-only";
  json violated = json::array();
  for (const auto& v : verdict.violated) {
    json item = testfn_json(v.fn);
    item["slack"] = rat_json(v.slack);
    violated.push_back(std::move(item));
  }
  out["violated"] = std::move(violated);
  if (verdict.dominated_action) out["dominated_action"] = *verdict.dominated_action;
  return out;
}

json hpolytope_json(const HPolytope& h) {
  json out;
  json ineq = json::array();
  for (const auto& row : h.inequalities) {
    json r;
    r["normal"] = vector_json(row.normal);
    r["height"] = rat_json(row.height);
    ineq.push_back(std::move(r));
  }
  json eq = json::array();
  for (const auto& row : h.equalities) {
    json r;
    r["normal"] = vector_json(row.normal);
    r["height"] = rat_json(row.height);
    eq.push_back(std::move(r));
  }
  out["inequalities"] = std::move(ineq);
  out["equalities"] = std::move(eq);
  return out;
}

json vpolytope_json(const VPolytope& v) {
  json out;
  json verts = json::array();
  for (const auto& vert : v.vertices) verts.push_back(vector_json(vert));
  out["vertices"] = std::move(verts);
  return out;
}

}  // namespace bce::io
