// Command-line front end: consistency checks, identified-set geometry,
// bounds, rationalizing information structures, and parameter sweeps over
// exact-rational decision problems.
//
// Exit codes: 0 consistent / success, 1 inconsistent, 2 input error.

#include "bce/classify.hpp"
#include "bce/consistency.hpp"
#include "bce/extensions.hpp"
#include "bce/geometry.hpp"
#include "bce/io.hpp"
#include "bce/rationalizer.hpp"
#include "bce/support_tests.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

using namespace bce;
using io::json;

namespace {

constexpr int kExitConsistent = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitInputError = 2;

struct CommonArgs {
  std::string problem_path;
  std::string prior_path;
  std::string marginal_path;
  std::string tau_path;
  std::string method = "auto";
  int cap = kDefaultGeometryCap;
  std::string out_path;
  std::string format = "json";
};

void emit(const CommonArgs& args, const std::string& text) {
  if (args.out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(args.out_path);
  if (!out) throw InputError("cannot write " + args.out_path);
  out << text << "\n";
}

void emit_json(const CommonArgs& args, const json& doc) { emit(args, doc.dump(2)); }

DecisionProblem load_problem(const CommonArgs& args) {
  if (args.problem_path.empty()) throw InputError("--problem is required");
  return io::parse_problem(io::load_file(args.problem_path));
}

Distribution load_prior(const CommonArgs& args, const DecisionProblem& problem) {
  if (args.prior_path.empty()) throw InputError("--prior is required");
  return io::parse_distribution(io::load_file(args.prior_path), problem.states);
}

Distribution load_marginal(const CommonArgs& args, const DecisionProblem& problem) {
  if (args.marginal_path.empty()) throw InputError("--marginal is required");
  return io::parse_distribution(io::load_file(args.marginal_path), problem.actions);
}

// The cheapest exact characterization first, then the LP.
std::string pick_auto_method(const StructureClass& cls) {
  switch (cls.tag) {
    case StructureTag::BinaryState: return "binary";
    case StructureTag::BinaryAction:
    case StructureTag::AffineUtilityDifferences: return "aud";
    case StructureTag::TwoStep: return "two-step";
    case StructureTag::SmallState: return "small-states";
    default: return "lp";
  }
}

struct CheckOutcome {
  bool consistent = false;
  json doc;
};

CheckOutcome run_check(const DecisionProblem& problem, const Distribution& prior,
                       const Distribution& marginal, const std::string& method_flag) {
  std::string method = method_flag;
  StructureClass cls = classify(problem);
  if (method == "auto") method = pick_auto_method(cls);

  CheckOutcome out;
  out.doc["method"] = method;
  out.doc["class"] = to_string(cls.tag);

  if (method == "lp") {
    Verdict v = check_bce(problem, prior, marginal);
    out.consistent = v.consistent;
    out.doc.update(io::verdict_json(v, prior, marginal));
    return out;
  }

  TestVerdict v;
  if (method == "binary") {
    v = check_binary_states(problem, prior, marginal);
  } else if (method == "aud") {
    v = check_aud(problem, prior, marginal);
  } else if (method == "two-step") {
    v = check_two_step(problem, prior, marginal);
  } else if (method == "small-states") {
    v = check_small_states(problem, prior, marginal);
  } else {
    throw InputError("unknown method: " + method);
  }
  out.consistent = v.consistent;
  out.doc.update(io::test_verdict_json(v));

  // a passing screen that is only necessary gets settled by the LP
  if (v.consistent && v.exactness == Exactness::NecessaryOnly) {
    Verdict full = check_bce(problem, prior, marginal);
    out.consistent = full.consistent;
    out.doc["consistent"] = full.consistent;
    out.doc["method"] = method + "+lp";
    if (!full.consistent)
      out.doc["dual"] = io::verdict_json(full, prior, marginal)["dual"];
  }
  return out;
}

int cmd_check(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution prior = load_prior(args, problem);
  Distribution marginal = load_marginal(args, problem);
  CheckOutcome outcome = run_check(problem, prior, marginal, args.method);
  emit_json(args, outcome.doc);
  return outcome.consistent ? kExitConsistent : kExitInconsistent;
}

// free-coordinate primitive representative of a state-indexed direction
RatVector free_primitive(const RatVector& full) {
  RatVector shifted(full.size() - 1);
  for (Eigen::Index i = 1; i < full.size(); ++i) shifted(i - 1) = full(i) - full(0);
  return primitive_vector(shifted);
}

int cmd_facets(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution marginal = load_marginal(args, problem);

  FacetResult fr;
  try {
    fr = enumerate_facets(weighted_minkowski(problem, marginal, args.cap), args.cap);
  } catch (const GeometryCapError& e) {
    throw InputError(std::string(e.what()) + "; use `check --method lp` beyond the cap");
  }

  // provenance tags: match facet normals against the closed-form families
  std::vector<std::pair<RatVector, std::string>> family;
  auto add_family = [&](const std::vector<TestFunction>& fns) {
    for (const auto& fn : fns) {
      RatVector key = free_primitive(fn.p);
      bool zero = true;
      for (Eigen::Index i = 0; i < key.size(); ++i)
        if (key(i) != 0) zero = false;
      if (!zero) family.emplace_back(std::move(key), fn.tag);
    }
  };
  bool dominated_support = false;
  {
    ConsistencyChecker checker(problem);
    for (Eigen::Index a = 0; a < problem.num_actions(); ++a)
      if (marginal[a] > 0 && checker.dominated()[a]) dominated_support = true;
  }
  if (!dominated_support) add_family(testfns_simplex(problem, marginal));
  if (detect_aud(problem)) add_family(testfns_aud(problem));
  if (detect_two_step(problem)) add_family(testfns_two_step(problem));

  json facets = json::array();
  for (const auto& row : fr.hrep.inequalities) {
    json item;
    item["normal"] = io::vector_json(row.normal);
    item["height"] = io::rat_json(row.height);
    RatVector key = primitive_vector(row.normal);
    json tags = json::array();
    for (const auto& [dir, tag] : family)
      if (dir == key) tags.push_back(tag);
    item["tags"] = std::move(tags);
    facets.push_back(std::move(item));
  }

  json doc;
  doc["facets"] = std::move(facets);
  json basis = json::array();
  for (const auto& b : fr.hull.basis) basis.push_back(io::vector_json(b));
  doc["basis"] = std::move(basis);
  json rays = json::array();
  for (const auto& r : refinement_rays(problem, marginal, args.cap))
    rays.push_back(io::vector_json(r));
  doc["rays"] = std::move(rays);
  doc["equalities"] = io::hpolytope_json(fr.hrep)["equalities"];
  emit_json(args, doc);
  return kExitConsistent;
}

int cmd_bounds(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution prior = load_prior(args, problem);
  auto [lb, ub] = bounds_binary_action(problem, prior);
  json doc;
  doc["action"] = problem.actions[1];
  doc["lb"] = io::rat_json(lb);
  doc["ub"] = io::rat_json(ub);
  doc["lb_decimal"] = rat_to_decimal(lb);
  doc["ub_decimal"] = rat_to_decimal(ub);
  emit_json(args, doc);
  return kExitConsistent;
}

int cmd_rationalize(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution prior = load_prior(args, problem);
  Distribution marginal = load_marginal(args, problem);

  Verdict v = check_bce(problem, prior, marginal);
  if (!v.consistent) {
    emit_json(args, io::verdict_json(v, prior, marginal));
    return kExitInconsistent;
  }

  json doc;
  doc["consistent"] = true;
  doc["pi"] = io::matrix_json(v.witness->pi);

  BeliefSystem bs = recover_belief_system(problem, *v.witness, marginal);
  json beliefs = json::object();
  for (size_t k = 0; k < bs.actions.size(); ++k)
    beliefs[problem.actions[bs.actions[k]]] = io::vector_json(bs.posteriors[k]);
  doc["posteriors"] = std::move(beliefs);

  PosteriorDistribution tau = tau_from_bce(problem, *v.witness, marginal);
  json tau_doc;
  tau_doc["posteriors"] = json::array();
  for (const auto& mu : tau.posteriors) tau_doc["posteriors"].push_back(io::vector_json(mu));
  tau_doc["weights"] = io::vector_json(tau.weights);
  doc["tau"] = std::move(tau_doc);

  ImplementResult impl = implement_tau(problem, tau, marginal);
  if (!impl.success) throw std::logic_error("flow infeasible for a consistent witness");
  json rule = json::array();
  for (const auto& probs : impl.rule.action_probs) rule.push_back(io::vector_json(probs));
  doc["decision_rule"] = std::move(rule);

  doc["kernel"] = io::matrix_json(experiment_kernel(problem, prior, tau, impl.rule));
  emit_json(args, doc);
  return kExitConsistent;
}

int cmd_implement_tau(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution marginal = load_marginal(args, problem);
  if (args.tau_path.empty()) throw InputError("--tau is required");
  PosteriorDistribution tau = io::parse_tau(io::load_file(args.tau_path), problem.states);

  ImplementResult impl = implement_tau(problem, tau, marginal);
  json doc;
  doc["success"] = impl.success;
  if (impl.success) {
    json rule = json::array();
    for (const auto& probs : impl.rule.action_probs) rule.push_back(io::vector_json(probs));
    doc["decision_rule"] = std::move(rule);
  } else {
    json coalition = json::array();
    for (Eigen::Index a : impl.violating) coalition.push_back(problem.actions[a]);
    doc["violating"] = std::move(coalition);
  }
  emit_json(args, doc);
  return impl.success ? kExitConsistent : kExitInconsistent;
}

int cmd_across(const CommonArgs& args, const std::vector<std::string>& problem_paths) {
  if (problem_paths.empty()) throw InputError("--problem is required at least once");
  std::vector<DecisionProblem> problems;
  for (const auto& path : problem_paths)
    problems.push_back(io::parse_problem(io::load_file(path)));

  DecisionProblem product = product_problem(problems);
  Distribution prior =
      io::parse_distribution(io::load_file(args.prior_path), product.states);
  Distribution joint =
      io::parse_distribution(io::load_file(args.marginal_path), product.actions);
  Verdict v = across_problems(problems, joint, prior);
  json doc = io::verdict_json(v, prior, joint);
  doc["profiles"] = product.actions;
  emit_json(args, doc);
  return v.consistent ? kExitConsistent : kExitInconsistent;
}

int cmd_ring(const CommonArgs& args, const std::string& ring_path,
             const std::vector<std::string>& marginal_paths) {
  if (ring_path.empty()) throw InputError("--ring is required");
  RingGame game = io::parse_ring(io::load_file(ring_path));
  if (marginal_paths.size() != game.players.size())
    throw InputError("need one --marginal per player");
  Distribution prior = io::parse_distribution(io::load_file(args.prior_path), game.states);
  std::vector<Distribution> marginals;
  for (size_t n = 0; n < game.players.size(); ++n)
    marginals.push_back(
        io::parse_distribution(io::load_file(marginal_paths[n]), game.players[n].actions));

  RingVerdict rv = ring_check(game, prior, marginals);
  json doc;
  doc["consistent"] = rv.consistent;
  if (!rv.consistent) doc["failing_link"] = rv.failing_link;
  json links = json::array();
  for (size_t n = 0; n < rv.links.size(); ++n) {
    json link;
    link["player"] = static_cast<int>(n) + 1;
    link["consistent"] = rv.links[n].consistent;
    links.push_back(std::move(link));
  }
  doc["links"] = std::move(links);
  if (rv.consistent) doc["witness_validated"] = rv.witness_validated;
  emit_json(args, doc);
  return rv.consistent ? kExitConsistent : kExitInconsistent;
}

int cmd_sweep(const CommonArgs& args, const std::string& family_path) {
  if (family_path.empty()) throw InputError("--family is required");
  ProblemFamily family = io::parse_family(io::load_file(family_path));
  DecisionProblem first = family.instantiate(0);
  Distribution prior = io::parse_distribution(io::load_file(args.prior_path), first.states);

  const bool verdict_mode = !args.marginal_path.empty();
  std::optional<Distribution> marginal;
  if (verdict_mode)
    marginal = io::parse_distribution(io::load_file(args.marginal_path), first.actions);

  struct Row {
    Rat theta;
    bool consistent = false;
    Rat lb, ub;
  };
  std::vector<std::future<Row>> futures;
  for (size_t k = 0; k < family.thetas.size(); ++k) {
    futures.push_back(std::async(std::launch::async, [&, k]() {
      DecisionProblem instance = family.instantiate(k);
      Row row;
      row.theta = family.thetas[k];
      if (verdict_mode) {
        row.consistent = run_check(instance, prior, *marginal, args.method).consistent;
      } else {
        auto [lb, ub] = bounds_binary_action(instance, prior);
        row.lb = lb;
        row.ub = ub;
      }
      return row;
    }));
  }
  std::vector<Row> rows;
  for (auto& f : futures) rows.push_back(f.get());

  if (!verdict_mode) {
    // the monotone-family guarantees are validated centrally
    shift_bounds_table(family, prior);
  }

  if (args.format == "csv") {
    std::string text = verdict_mode ? "theta,consistent" : "theta,lb,ub";
    for (const auto& row : rows) {
      text += "\n" + rat_to_string(row.theta);
      if (verdict_mode)
        text += std::string(",") + (row.consistent ? "1" : "0");
      else
        text += "," + rat_to_string(row.lb) + "," + rat_to_string(row.ub);
    }
    emit(args, text);
  } else {
    json doc = json::array();
    for (const auto& row : rows) {
      json item;
      item["theta"] = io::rat_json(row.theta);
      if (verdict_mode) {
        item["consistent"] = row.consistent;
      } else {
        item["lb"] = io::rat_json(row.lb);
        item["ub"] = io::rat_json(row.ub);
      }
      doc.push_back(std::move(item));
    }
    emit_json(args, doc);
  }
  return kExitConsistent;
}

// counterclockwise cycle around the centroid, starting at the lexicographic
// minimum; comparisons are exact
std::vector<RatVector> order_cycle(std::vector<RatVector> pts) {
  if (pts.size() <= 2) return pts;
  RatVector c = RatVector::Zero(2);
  for (const auto& p : pts) c += p;
  c /= Rat(static_cast<long>(pts.size()));
  auto side = [&](const RatVector& p) {
    Rat dx = p(0) - c(0), dy = p(1) - c(1);
    return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1;
  };
  std::sort(pts.begin(), pts.end(), [&](const RatVector& a, const RatVector& b) {
    int sa = side(a), sb = side(b);
    if (sa != sb) return sa < sb;
    Rat cross = (a(0) - c(0)) * (b(1) - c(1)) - (a(1) - c(1)) * (b(0) - c(0));
    if (cross != 0) return cross > 0;
    return lex_less(a, b);
  });
  size_t start = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (lex_less(pts[i], pts[start])) start = i;
  std::rotate(pts.begin(), pts.begin() + static_cast<long>(start), pts.end());
  return pts;
}

int cmd_plot_data(const CommonArgs& args) {
  DecisionProblem problem = load_problem(args);
  Distribution marginal = load_marginal(args, problem);
  const Eigen::Index I = problem.num_states();
  if (I > 3) throw InputError("plot data is defined for two or three states only");

  json doc;
  if (I == 3) {
    // project onto (mu1, mu2)
    auto project = [](const RatVector& free_pt) {
      RatVector full = from_free_coordinates(free_pt);
      return rat_vector({full(0), full(1)});
    };
    auto cycle_json = [&](const VPolytope& v) {
      std::vector<RatVector> pts;
      for (const auto& vert : v.vertices) pts.push_back(project(vert));
      pts = order_cycle(std::move(pts));
      json arr = json::array();
      json dec = json::array();
      for (const auto& p : pts) {
        arr.push_back(io::vector_json(p));
        dec.push_back(io::decimal_json(p));
      }
      json out;
      out["cycle_mu12"] = std::move(arr);
      out["decimal"] = std::move(dec);
      return out;
    };
    json sets = json::object();
    for (Eigen::Index a = 0; a < problem.num_actions(); ++a) {
      VPolytope va = enumerate_vertices(optimal_belief_set(problem, a), args.cap);
      if (va.vertices.empty()) continue;
      sets[problem.actions[a]] = cycle_json(va);
    }
    doc["sets"] = std::move(sets);
    doc["identified_set"] = cycle_json(weighted_minkowski(problem, marginal, args.cap));
  } else {
    // intervals in mu(w2)
    ConsistencyChecker checker(problem);
    json sets = json::object();
    RatVector e2 = rat_vector({Rat(0), Rat(1)});
    for (Eigen::Index a = 0; a < problem.num_actions(); ++a) {
      if (checker.dominated()[a]) continue;
      Rat hi = *checker.action_support(a, e2);
      Rat lo = -*checker.action_support(a, -e2);
      sets[problem.actions[a]] = json::array({io::rat_json(lo), io::rat_json(hi)});
    }
    doc["sets"] = std::move(sets);
    auto [lo, hi] = binary_state_interval(problem, marginal);
    doc["identified_set"] = json::array({io::rat_json(lo), io::rat_json(hi)});
  }
  emit_json(args, doc);
  return kExitConsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tests for rationalizing action distributions via information"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::string> problem_paths;
  std::vector<std::string> marginal_paths;
  std::string ring_path;
  std::string family_path;

  auto add_common = [&](CLI::App* cmd, bool problem = true) {
    if (problem) cmd->add_option("--problem", args.problem_path, "decision problem JSON");
    cmd->add_option("--out", args.out_path, "output path (default stdout)");
    cmd->add_option("--format", args.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--cap", args.cap, "geometry dimension cap");
  };

  CLI::App* check = app.add_subcommand("check", "decide consistency of a (prior, marginal) pair");
  add_common(check);
  check->add_option("--prior", args.prior_path, "prior JSON");
  check->add_option("--marginal", args.marginal_path, "action distribution JSON");
  check->add_option("--method", args.method, "auto|lp|small-states|aud|two-step|binary")
      ->check(CLI::IsMember({"auto", "lp", "small-states", "aud", "two-step", "binary"}));

  CLI::App* facets = app.add_subcommand("facets", "H-representation of the identified prior set");
  add_common(facets);
  facets->add_option("--marginal", args.marginal_path, "action distribution JSON");

  CLI::App* bounds = app.add_subcommand("bounds", "range of nu(a2) for binary-action problems");
  add_common(bounds);
  bounds->add_option("--prior", args.prior_path, "prior JSON");

  CLI::App* rationalize =
      app.add_subcommand("rationalize", "construct a rationalizing information structure");
  add_common(rationalize);
  rationalize->add_option("--prior", args.prior_path, "prior JSON");
  rationalize->add_option("--marginal", args.marginal_path, "action distribution JSON");

  CLI::App* implement =
      app.add_subcommand("implement-tau", "decision rule implementing a marginal from tau");
  add_common(implement);
  implement->add_option("--tau", args.tau_path, "posterior distribution JSON");
  implement->add_option("--marginal", args.marginal_path, "action distribution JSON");

  CLI::App* across = app.add_subcommand("across", "one information structure for several problems");
  across->add_option("--problem", problem_paths, "decision problem JSON (repeat per problem)");
  across->add_option("--prior", args.prior_path, "prior JSON");
  across->add_option("--marginal", args.marginal_path, "joint action-profile distribution JSON");
  across->add_option("--out", args.out_path, "output path (default stdout)");

  CLI::App* ring = app.add_subcommand("ring", "per-link consistency in a ring-network game");
  ring->add_option("--ring", ring_path, "ring game JSON");
  ring->add_option("--prior", args.prior_path, "prior JSON");
  ring->add_option("--marginal", marginal_paths, "per-player action distribution (repeat)");
  ring->add_option("--out", args.out_path, "output path (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "per-theta verdicts or bounds over a family");
  sweep->add_option("--family", family_path, "problem family JSON");
  sweep->add_option("--prior", args.prior_path, "prior JSON");
  sweep->add_option("--marginal", args.marginal_path, "action distribution JSON (verdict mode)");
  sweep->add_option("--method", args.method, "method for verdict mode");
  sweep->add_option("--out", args.out_path, "output path (default stdout)");
  sweep->add_option("--format", args.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* plot = app.add_subcommand("plot-data", "vertex cycles for two- and three-state plots");
  add_common(plot);
  plot->add_option("--marginal", args.marginal_path, "action distribution JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(args);
    if (facets->parsed()) return cmd_facets(args);
    if (bounds->parsed()) return cmd_bounds(args);
    if (rationalize->parsed()) return cmd_rationalize(args);
    if (implement->parsed()) return cmd_implement_tau(args);
    if (across->parsed()) return cmd_across(args, problem_paths);
    if (ring->parsed()) return cmd_ring(args, ring_path, marginal_paths);
    if (sweep->parsed()) return cmd_sweep(args, family_path);
    if (plot->parsed()) return cmd_plot_data(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
