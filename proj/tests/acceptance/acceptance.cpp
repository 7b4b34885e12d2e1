// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ceei/discrete_solve.hpp"
#include "ceei/eg_solver.hpp"
#include "ceei/fairness.hpp"
#include "ceei/generators.hpp"
#include "oracles.hpp"

using namespace ceei;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Rational q(const char* s) { return parse_rational(s); }

/// Shapes n <= 4, m <= 8 for the market criteria.
std::vector<Instance> market_instances() {
  std::vector<Instance> out;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t n = 2 + k % 3;
    const std::size_t m = 2 + (k * 3) % 7;
    out.push_back(gen_random(n, m, 100, false, 10'000 + k));
  }
  return out;
}

Check criterion_1() {
  Check c;
  const auto inst = separation_example();
  const DiscreteAssignment sep = DiscreteAssignment::from_bundles(4, {{0}, {1, 2, 3}});
  const DiscreteAssignment eq = DiscreteAssignment::from_bundles(4, {{0, 1}, {2, 3}});
  c.require(is_envy_free(inst, sep).holds, "separating assignment not envy-free");
  c.require(is_pareto_optimal_discrete(inst, sep).holds, "separating assignment not Pareto optimal");
  const auto bad = verify_ceei_frac(inst, sep);
  c.require(!bad.holds, "separating assignment passes the fractional test");
  c.require(certificate_rechecks(inst, sep, Notion::CeeiFrac, bad), "failure certificate rejected");
  const auto good = verify_ceei_frac(inst, eq);
  c.require(good.holds, "equilibrium assignment fails the fractional test");
  const auto* prices = std::get_if<PriceSupport>(&good.certificate);
  c.require(prices && prices->prices == PriceVector({q("19/20"), q("1/20"), q("1/20"), q("19/20")}),
            "prices differ from (19/20, 1/20, 1/20, 19/20)");
  return c;
}

Check criterion_2() {
  Check c;
  const auto inst = separation_example();
  const auto sol = solve_eg(inst);
  const std::vector<double> u{100, 100};
  const std::vector<double> p{0.95, 0.05, 0.05, 0.95};
  for (std::size_t i = 0; i < 2; ++i) c.require(std::abs(sol.utilities[i] - u[i]) <= 1e-6, "u_star off");
  for (std::size_t j = 0; j < 4; ++j) c.require(std::abs(sol.prices[j] - p[j]) <= 1e-6, "p_star off");
  c.require(sol.kkt_residual <= 1e-8, "kkt residual " + std::to_string(sol.kkt_residual));
  c.require(kkt_residual(inst, sol).max() <= 1e-8, "recomputed kkt residual too large");
  return c;
}

Check criterion_3() {
  Check c;
  double spread = 0;
  for (const auto& inst : market_instances()) {
    std::vector<double> lo_u, hi_u, lo_p, hi_p;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SolverConfig cfg;
      cfg.seed = seed;
      const auto sol = solve_eg(inst, cfg);
      if (lo_u.empty()) {
        lo_u = hi_u = sol.utilities;
        lo_p = hi_p = sol.prices;
      }
      for (std::size_t i = 0; i < lo_u.size(); ++i) {
        lo_u[i] = std::min(lo_u[i], sol.utilities[i]);
        hi_u[i] = std::max(hi_u[i], sol.utilities[i]);
      }
      for (std::size_t j = 0; j < lo_p.size(); ++j) {
        lo_p[j] = std::min(lo_p[j], sol.prices[j]);
        hi_p[j] = std::max(hi_p[j], sol.prices[j]);
      }
    }
    for (std::size_t i = 0; i < lo_u.size(); ++i) spread = std::max(spread, hi_u[i] - lo_u[i]);
    for (std::size_t j = 0; j < lo_p.size(); ++j) spread = std::max(spread, hi_p[j] - lo_p[j]);
  }
  c.require(spread < 1e-8, "max componentwise spread " + std::to_string(spread));
  return c;
}

Check criterion_4() {
  Check c;
  std::mt19937_64 rng(4);
  for (const auto& inst : market_instances()) {
    const auto sol = solve_eg(inst);
    double eg = 1;
    for (double v : sol.utilities) eg *= v;
    const double slack = 1e-9 * eg;
    for (int k = 0; k < 1000; ++k) {
      const double w = oracle::random_fractional_welfare(inst, rng);
      c.require(eg + slack >= w, "random fractional assignment beats the solver");
    }
    const auto bf = brute_force_max_nash(inst);
    c.require(eg + slack >= to_double(bf.welfare), "discrete optimum beats the solver");
    if (sol.exact) {
      c.require(nash_welfare(inst, sol.exact->allocation) >= bf.welfare,
                "exact welfare below discrete optimum");
    }
  }
  return c;
}

Check criterion_5() {
  Check c;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 3;
    const std::size_t m = 1 + (k * 5) % 7;
    const auto inst = gen_random(n, m, 30, false, 20'000 + k);
    const auto bb = max_nash_discrete(inst);
    c.require(bb.optimal, "search did not finish");
    c.require(bb.welfare == brute_force_max_nash(inst).welfare,
              "welfare mismatch on instance " + std::to_string(k));
  }
  return c;
}

Check criterion_6() {
  Check c;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 4;
    const std::size_t m = 1 + (k * 3) % 10;
    const auto inst = gen_random(n, m, 1, true, 30'000 + k);
    c.require(binary_max_nash(inst).welfare == brute_force_max_nash(inst).welfare,
              "welfare mismatch on instance " + std::to_string(k));
  }
  return c;
}

Check criterion_7() {
  Check c;
  std::mt19937_64 rng(7);
  int yes = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t size = 1 + rng() % 14;
    PartitionInput in;
    for (std::size_t j = 0; j < size; ++j) in.values.push_back(1 + rng() % 40);
    const auto found = find_ceei_disc_identical(from_partition(in));
    const bool expected = oracle::has_equal_bipartition(in.values);
    yes += expected;
    c.require(found.has_value() == expected, "partition disagreement on multiset " + std::to_string(k));
    if (found) {
      const auto u = agent_utilities(from_partition(in), *found);
      c.require(u[0] == u[1], "returned halves differ");
    }
  }
  c.require(yes > 0 && yes < 50, "partition sample is one-sided");
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto in = planted_three_partition(2 + k % 4, 100 + 10 * k, 40'000 + k);
    const auto inst = from_three_partition(in);
    const auto found = find_ceei_disc_identical(inst);
    c.require(found.has_value(), "planted 3-partition not found");
    if (found) {
      for (const auto& v : agent_utilities(inst, *found)) {
        c.require(v == Rational(BigInt(std::to_string(in.bound))), "group sum differs from bound");
      }
    }
  }
  return c;
}

Check criterion_8() {
  Check c;
  int frac_count = 0, identical_count = 0;
  for (std::uint64_t k = 0; k < 30; ++k) {
    const std::size_t n = 2 + k % 2;
    const std::size_t m = 3 + k % 4;
    Instance inst = gen_random(n, m, 9, false, 50'000 + k);
    const bool identical = k % 3 == 0;
    if (identical) {
      Matrix<Rational> u(n, m);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) u(i, j) = inst.utility(0, j) + 1;
      }
      inst = Instance(std::move(u));
    }
    oracle::for_each_assignment(n, m, [&](const std::vector<AgentIndex>& owner) {
      const DiscreteAssignment y(n, owner);
      const bool frac = verify_ceei_frac(inst, y).holds;
      const bool disc = verify_ceei_disc(inst, y).holds;
      frac_count += frac;
      if (frac) {
        c.require(disc, "fractional equilibrium is not a discrete equilibrium");
        c.require(is_envy_free(inst, y).holds, "fractional equilibrium has envy");
        c.require(is_pareto_optimal_discrete(inst, y).holds, "fractional equilibrium is dominated");
      }
      if (identical) {
        const auto u = agent_utilities(inst, y);
        const bool equal = std::all_of(u.begin(), u.end(), [&](const Rational& v) { return v == u[0]; });
        identical_count += equal;
        c.require(disc == equal, "identical rows: discrete test disagrees with equal utilities");
      }
    });
  }
  c.require(frac_count > 0 && identical_count > 0, "no positive cases exercised");
  return c;
}

Check criterion_9() {
  Check c;
  const auto inst = binary_gap_example();
  c.require(!exists_ceei_frac_discrete(inst).has_value(), "a discrete fractional equilibrium was found");
  c.require(max_nash_discrete(inst).welfare == 2, "discrete optimum is not 2");
  const auto sol = solve_eg(inst);
  const double w = sol.utilities[0] * sol.utilities[1];
  c.require(std::abs(w - 2.25) <= 1e-6, "fractional welfare " + std::to_string(w));
  c.require(w > 2, "fractional welfare does not exceed 2");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double seconds;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "separating example: EF and PO but not a fractional equilibrium", 1, criterion_1},
      {2, "solver certifies the separating example", 1, criterion_2},
      {3, "equilibrium is independent of the starting bids", 30, criterion_3},
      {4, "equilibrium maximizes fractional Nash welfare", 60, criterion_4},
      {5, "branch and bound equals exhaustive search", 60, criterion_5},
      {6, "binary flow algorithm equals exhaustive search", 60, criterion_6},
      {7, "identical-row search decides PARTITION and planted 3-PARTITION", 30, criterion_7},
      {8, "implications between the fairness notions", 120, criterion_8},
      {9, "binary instance with no discrete fractional equilibrium", 1, criterion_9},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.ok && elapsed >= cr.seconds) {
      c.ok = false;
      c.detail = "took " + std::to_string(elapsed) + " s, limit " + std::to_string(cr.seconds) + " s";
    }
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, elapsed,
                c.ok ? "" : " - ", c.detail.c_str());
    failures += !c.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
