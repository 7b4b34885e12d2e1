#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ceei/discrete_solve.hpp"
#include "ceei/eg_solver.hpp"
#include "ceei/fairness.hpp"
#include "ceei/generators.hpp"
#include "ceei/instance_io.hpp"
#include "json.hpp"

namespace ceei::cli {

namespace {

using json = nlohmann::ordered_json;

/// Error carrying the exit code it maps to.
struct CommandError {
  int code;
  std::string kind;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError{kInvalidInput, "io", "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CommandError{kInvalidInput, "io", "cannot write '" + path + "'"};
  out << text << '\n';
}

json exact_number(const Rational& v) {
  return json{{"decimal", to_double(v)}, {"exact", to_string(v)}};
}

json exact_vector(std::span<const Rational> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(exact_number(v));
  return out;
}

json bundles_json(const DiscreteAssignment& y) {
  json out = json::array();
  for (AgentIndex i = 0; i < y.agents(); ++i) out.push_back(y.bundle(i));
  return out;
}

json assignment_json(const Instance& inst, const DiscreteAssignment& y) {
  return json{{"owner", std::vector<std::size_t>(y.owners().begin(), y.owners().end())},
              {"bundles", bundles_json(y)},
              {"utilities", exact_vector(agent_utilities(inst, y))}};
}

json certificate_json(const Certificate& cert) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, EnvyPair>) {
          return json{{"type", "envy_pair"}, {"envious", c.envious}, {"envied", c.envied}};
        } else if constexpr (std::is_same_v<T, DominatingAssignment>) {
          const auto owners = c.assignment.owners();
          return json{{"type", "dominating_assignment"},
                      {"owner", std::vector<std::size_t>(owners.begin(), owners.end())}};
        } else if constexpr (std::is_same_v<T, PriceSupport>) {
          return json{{"type", "price_support"}, {"prices", exact_vector(c.prices.values())}};
        } else if constexpr (std::is_same_v<T, ViolatingBundle>) {
          return json{{"type", "violating_bundle"}, {"agent", c.agent}, {"objects", c.objects}};
        } else {
          json out{{"type", "kkt_violation"}, {"agent", c.agent}};
          out["object"] = c.object ? json(*c.object) : json(nullptr);
          out["gap"] = exact_number(c.gap);
          return out;
        }
      },
      cert);
}

json instance_summary(const Instance& inst) {
  return json{{"digest", instance_digest(inst)},
              {"agents", inst.agents()},
              {"objects", inst.objects()}};
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit)) {
      throw CommandError{kInvalidInput, "parameters", std::string("malformed ") + what + " list"};
    }
    out.push_back(std::stoull(item));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  std::string instance;
};

struct CheckOptions {
  std::string instance;
  std::string assignment;
  std::string notion;
};

struct SearchOptions {
  std::string instance;
  std::string target;
};

struct GenOptions {
  std::string kind;
  std::size_t agents = 2;
  std::size_t objects = 4;
  std::uint64_t max_utility = 100;
  bool binary = false;
  std::string set;
  std::string weights;
  std::uint64_t bound = 0;
  std::size_t groups = 0;
  std::string out;
};

struct Common {
  double tolerance = 1e-10;
  double kkt_tolerance = 1e-8;
  std::size_t max_iter = 100000;
  std::optional<std::uint64_t> seed;
  std::uint64_t limit_nodes = SearchBudget{}.max_nodes;
  double limit_seconds = 0;
  std::optional<std::uint64_t> limit;
  std::string format = "json";
};

SolverConfig solver_config(const Common& c) {
  SolverConfig cfg;
  cfg.convergence_tolerance = c.tolerance;
  cfg.kkt_tolerance = c.kkt_tolerance;
  cfg.max_iterations = c.max_iter;
  cfg.seed = c.seed;
  return cfg;
}

json solution_json(const EquilibriumSolution& sol) {
  json out;
  if (sol.exact) {
    json shares = json::array();
    for (AgentIndex i = 0; i < sol.exact->allocation.agents(); ++i) {
      shares.push_back(exact_vector(sol.exact->allocation.row(i)));
    }
    out["x"] = std::move(shares);
    out["u_star"] = exact_vector(sol.exact->utilities);
    out["p_star"] = exact_vector(sol.exact->prices.values());
  } else {
    json shares = json::array();
    for (std::size_t i = 0; i < sol.allocation.rows(); ++i) {
      auto row = sol.allocation.row(i);
      shares.push_back(std::vector<double>(row.begin(), row.end()));
    }
    out["x"] = std::move(shares);
    out["u_star"] = sol.utilities;
    out["p_star"] = sol.prices;
  }
  out["certified_exact"] = sol.exact.has_value();
  out["iterations"] = sol.iterations;
  return out;
}

int cmd_solve(const SolveOptions& opt, const Common& common, json& report) {
  const Instance inst = load_instance(opt.instance);
  report["instance"] = instance_summary(inst);
  const SolverConfig cfg = solver_config(common);
  report["config"] = json{{"tolerance", cfg.convergence_tolerance},
                          {"kkt_tolerance", cfg.kkt_tolerance},
                          {"max_iter", cfg.max_iterations},
                          {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)}};
  const EquilibriumSolution sol = solve_eg(inst, cfg);
  json result = solution_json(sol);
  const auto residual = kkt_residual(inst, sol, cfg.kkt_tolerance);
  result["residuals"] = json{{"clearing", residual.clearing},
                             {"spending", residual.spending},
                             {"bang_per_buck", residual.bang_per_buck},
                             {"negative_price", residual.negative_price},
                             {"max", residual.max()}};
  if (sol.exact) {
    result["nash_welfare"] = exact_number(nash_welfare(inst, sol.exact->allocation));
  } else {
    double welfare = 1;
    for (double u : sol.utilities) welfare *= u;
    result["nash_welfare"] = welfare;
  }
  report["result"] = std::move(result);
  return kHolds;
}

int cmd_check(const CheckOptions& opt, const Common& common, json& report) {
  const Instance inst = load_instance(opt.instance);
  const DiscreteAssignment y = parse_assignment(read_file(opt.assignment), inst);
  report["instance"] = instance_summary(inst);
  report["config"] = json{{"notion", opt.notion},
                          {"limit", common.limit ? json(*common.limit) : json(nullptr)}};
  Verdict verdict;
  Notion notion;
  if (opt.notion == "ef") {
    notion = Notion::EnvyFree;
    verdict = is_envy_free(inst, y);
  } else if (opt.notion == "po") {
    notion = Notion::ParetoOptimal;
    verdict = is_pareto_optimal_discrete(inst, y, common.limit.value_or(kDefaultParetoLimit));
  } else if (opt.notion == "ceei-frac") {
    notion = Notion::CeeiFrac;
    verdict = verify_ceei_frac(inst, y);
  } else {
    notion = Notion::CeeiDisc;
    verdict = verify_ceei_disc(inst, y, common.limit.value_or(kDefaultBundleLimit));
  }
  report["result"] = json{
      {"holds", verdict.holds},
      {"assignment", assignment_json(inst, y)},
      {"certificate", certificate_json(verdict.certificate)},
      {"certificate_rechecks",
       certificate_rechecks(inst, y, notion, verdict, common.limit.value_or(kDefaultBundleLimit))}};
  return verdict.holds ? kHolds : kFails;
}

int cmd_search(const SearchOptions& opt, const Common& common, json& report) {
  const Instance inst = load_instance(opt.instance);
  report["instance"] = instance_summary(inst);
  const SearchBudget budget{common.limit_nodes, common.limit_seconds};
  report["config"] = json{{"target", opt.target},
                          {"limit_nodes", budget.max_nodes},
                          {"limit_seconds", budget.max_seconds},
                          {"limit", common.limit ? json(*common.limit) : json(nullptr)}};
  json result;
  auto found = [&](const DiscreteAssignment& y) {
    result["status"] = "found";
    result["assignment"] = assignment_json(inst, y);
    result["welfare"] = exact_number(nash_welfare(inst, y));
  };
  auto search_json = [](const SearchResult& r) {
    return json{{"nodes_explored", r.nodes_explored}, {"optimal", r.optimal}};
  };

  int code = kHolds;
  if (opt.target == "mnw" || opt.target == "binary-mnw") {
    const SearchResult r =
        opt.target == "mnw" ? max_nash_discrete(inst, budget) : binary_max_nash(inst);
    found(r.best);
    result["search"] = search_json(r);
    if (!r.optimal) {
      result["status"] = "inconclusive";
      code = kInconclusive;
    }
  } else if (opt.target == "ceei-frac") {
    try {
      if (auto y = exists_ceei_frac_discrete(inst, budget)) {
        found(*y);
      } else {
        result["status"] = "none";
        code = kFails;
      }
    } catch (const InconclusiveSearch& e) {
      result["status"] = "inconclusive";
      result["search"] = json{{"nodes_explored", e.nodes()}, {"optimal", false}};
      code = kInconclusive;
    }
    SolverConfig cfg = solver_config(common);
    cfg.seed.reset();
    const EquilibriumSolution eg = solve_eg(inst, cfg);
    if (eg.exact) {
      Rational welfare = 1;
      for (const auto& u : eg.exact->utilities) welfare *= u;
      result["fractional_optimum"] = exact_number(welfare);
    } else {
      double welfare = 1;
      for (double u : eg.utilities) welfare *= u;
      result["fractional_optimum"] = welfare;
    }
  } else if (opt.target == "ceei-disc") {
    if (auto w = exists_ceei_disc_bruteforce(inst, common.limit.value_or(kDefaultEnumerationLimit))) {
      found(w->assignment);
      result["certificate"] = certificate_json(PriceSupport{w->prices});
    } else {
      result["status"] = "none";
      code = kFails;
    }
  } else {
    if (auto y = find_ceei_disc_identical(inst)) {
      found(*y);
    } else {
      result["status"] = "none";
      code = kFails;
    }
  }
  report["result"] = std::move(result);
  return code;
}

int cmd_gen(const GenOptions& opt, const Common& common, json& report) {
  const std::uint64_t seed = common.seed.value_or(0);
  Instance inst;
  json config{{"kind", opt.kind}};
  if (opt.kind == "random") {
    inst = gen_random(opt.agents, opt.objects, opt.max_utility, opt.binary, seed);
    config["agents"] = opt.agents;
    config["objects"] = opt.objects;
    config["max"] = opt.max_utility;
    config["binary"] = opt.binary;
    config["seed"] = seed;
  } else if (opt.kind == "partition") {
    PartitionInput input{parse_list(opt.set, "--set")};
    inst = from_partition(input);
    config["set"] = input.values;
  } else {
    ThreePartitionInput input;
    if (!opt.weights.empty()) {
      input.weights = parse_list(opt.weights, "--weights");
      input.bound = opt.bound;
    } else {
      input = planted_three_partition(opt.groups, opt.bound, seed);
      config["groups"] = opt.groups;
      config["seed"] = seed;
    }
    inst = from_three_partition(input);
    config["weights"] = input.weights;
    config["bound"] = input.bound;
  }
  report["config"] = std::move(config);
  report["instance"] = instance_summary(inst);
  if (!opt.out.empty()) {
    write_file(opt.out, serialize_instance(inst));
    report["result"] = json{{"path", opt.out}};
  } else {
    report["result"] = json{{"document", json::parse(serialize_instance(inst))}};
  }
  return kHolds;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competitive equilibrium (equal incomes) solver and verifier", "ceei"};
  app.require_subcommand(1);
  Common common;
  SolveOptions solve_opt;
  CheckOptions check_opt;
  SearchOptions search_opt;
  GenOptions gen_opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"json"}));
    sub->add_option("--seed", common.seed, "Random seed");
  };

  auto* solve = app.add_subcommand("solve", "Fractional equilibrium of an instance");
  solve->add_option("instance", solve_opt.instance)->required();
  solve->add_option("--tolerance", common.tolerance, "Relative utility change for convergence");
  solve->add_option("--kkt-tolerance", common.kkt_tolerance, "Equilibrium residual bound");
  solve->add_option("--max-iter", common.max_iter, "Iteration cap");
  add_common(solve);

  auto* check = app.add_subcommand("check", "Test a discrete assignment for a fairness notion");
  check->add_option("instance", check_opt.instance)->required();
  check->add_option("assignment", check_opt.assignment)->required();
  check->add_option("--notion", check_opt.notion)
      ->required()
      ->check(CLI::IsMember({"ef", "po", "ceei-frac", "ceei-disc"}));
  check->add_option("--limit", common.limit, "Enumeration size guard");
  add_common(check);

  auto* search = app.add_subcommand("search", "Search for a discrete assignment");
  search->add_option("instance", search_opt.instance)->required();
  search->add_option("--target", search_opt.target)
      ->required()
      ->check(CLI::IsMember({"mnw", "ceei-frac", "ceei-disc", "binary-mnw", "identical-ceei-disc"}));
  search->add_option("--limit-nodes", common.limit_nodes, "Branch-and-bound node budget");
  search->add_option("--limit-seconds", common.limit_seconds, "Wall-clock budget (0 = none)");
  search->add_option("--limit", common.limit, "Enumeration size guard");
  search->add_option("--tolerance", common.tolerance);
  search->add_option("--max-iter", common.max_iter);
  add_common(search);

  auto* gen = app.add_subcommand("gen", "Generate an instance document");
  gen->add_option("kind", gen_opt.kind)
      ->required()
      ->check(CLI::IsMember({"random", "partition", "3partition"}));
  gen->add_option("-n,--agents", gen_opt.agents);
  gen->add_option("-m,--objects", gen_opt.objects);
  gen->add_option("--max", gen_opt.max_utility);
  gen->add_flag("--binary", gen_opt.binary);
  gen->add_option("--set", gen_opt.set, "Comma-separated multiset for partition");
  gen->add_option("--weights", gen_opt.weights, "Comma-separated weights for 3partition");
  gen->add_option("--bound", gen_opt.bound, "Bound W for 3partition");
  gen->add_option("--groups", gen_opt.groups, "Planted 3partition group count");
  gen->add_option("-o,--out", gen_opt.out, "Output path");
  add_common(gen);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    out << json{{"command", nullptr}, {"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump()
        << '\n';
    return kInvalidInput;
  }

  json report;
  const auto start = std::chrono::steady_clock::now();
  int code = kHolds;
  auto fail = [&](int exit_code, const std::string& kind, const std::string& message) {
    err << "error: " << message << '\n';
    report["error"] = json{{"kind", kind}, {"message", message}};
    code = exit_code;
  };
  try {
    if (solve->parsed()) {
      report["command"] = "solve";
      code = cmd_solve(solve_opt, common, report);
    } else if (check->parsed()) {
      report["command"] = "check";
      code = cmd_check(check_opt, common, report);
    } else if (search->parsed()) {
      report["command"] = "search";
      code = cmd_search(search_opt, common, report);
    } else {
      report["command"] = "gen";
      code = cmd_gen(gen_opt, common, report);
    }
  } catch (const CommandError& e) {
    fail(e.code, e.kind, e.message);
  } catch (const SyntaxError& e) {
    fail(kInvalidInput, "SyntaxError", e.what());
  } catch (const SchemaError& e) {
    fail(kInvalidInput, "SchemaError", e.what());
  } catch (const InvariantError& e) {
    fail(kInvalidInput, "InvariantError", e.what());
  } catch (const NonConvergence& e) {
    fail(kNonConvergence, "NonConvergence", e.what());
  } catch (const InstanceTooLarge& e) {
    fail(kTooLarge, "InstanceTooLarge", e.what());
  } catch (const InconclusiveSearch& e) {
    fail(kInconclusive, "Inconclusive", e.what());
  } catch (const NotBinary& e) {
    fail(kInvalidInput, "NotBinary", e.what());
  } catch (const NotIdentical& e) {
    fail(kInvalidInput, "NotIdentical", e.what());
  } catch (const InvalidReductionInput& e) {
    fail(kInvalidInput, "InvalidParameters", e.what());
  } catch (const Error& e) {
    fail(kInvalidInput, "InvalidInput", e.what());
  } catch (const std::invalid_argument& e) {
    fail(kInvalidInput, "InvalidParameters", e.what());
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report["timing"] = json{{"seconds", elapsed.count()}};
  out << report.dump(2) << '\n';
  return code;
}

}  // namespace ceei::cli
