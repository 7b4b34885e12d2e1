#include "doctest.h"

#include "ceei/discrete_solve.hpp"
#include "ceei/error.hpp"
#include "ceei/fairness.hpp"
#include "ceei/generators.hpp"
#include "oracles.hpp"

using namespace ceei;

TEST_CASE("brute force on the separating instance") {
  const auto r = brute_force_max_nash(separation_example());
  CHECK(r.welfare == 10000);
  CHECK(r.best == DiscreteAssignment(2, {0, 0, 1, 1}));
  CHECK(r.optimal);
  CHECK_THROWS_AS(brute_force_max_nash(separation_example(), 10), InstanceTooLarge);
}

TEST_CASE("branch and bound matches the enumerator") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto inst = gen_random(2 + s % 2, 3 + s % 4, 12, false, 900 + s);
    const auto bf = brute_force_max_nash(inst);
    const auto bb = max_nash_discrete(inst);
    CHECK(bb.welfare == bf.welfare);
    CHECK(bb.welfare == oracle::max_nash_welfare(inst));
    // Both report the lexicographically first maximizer.
    CHECK(bb.best == bf.best);
  }
}

TEST_CASE("zero welfare frontier") {
  // Three agents, two objects: someone always gets nothing.
  const auto inst = Instance::from_rows({{1, 2}, {3, 1}, {1, 1}});
  const auto r = max_nash_discrete(inst);
  CHECK(r.welfare == 0);
  CHECK(r.best == DiscreteAssignment(3, {0, 0}));
  CHECK(brute_force_max_nash(inst).best == r.best);
}

TEST_CASE("budget exhaustion") {
  const auto inst = gen_random(4, 10, 50, false, 3);
  SearchBudget budget;
  budget.max_nodes = 5;
  const auto r = max_nash_discrete(inst, budget);
  CHECK_FALSE(r.optimal);
  CHECK_THROWS_AS(exists_ceei_frac_discrete(inst, budget), InconclusiveSearch);
}

TEST_CASE("fractional equilibrium among discrete assignments") {
  const auto found = exists_ceei_frac_discrete(separation_example());
  REQUIRE(found);
  CHECK(*found == DiscreteAssignment(2, {0, 0, 1, 1}));
  CHECK_FALSE(exists_ceei_frac_discrete(binary_gap_example()));
}

TEST_CASE("binary utilities") {
  CHECK(binary_max_nash(binary_gap_example()).welfare == 2);
  CHECK_THROWS_AS(binary_max_nash(separation_example()), NotBinary);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto inst = gen_random(2 + s % 3, 4 + s % 5, 1, true, 70 + s);
    const auto r = binary_max_nash(inst);
    CHECK(r.welfare == oracle::max_nash_welfare(inst));
    CHECK(nash_welfare(inst, r.best) == r.welfare);
  }
}

TEST_CASE("identical rows") {
  const auto yes = find_ceei_disc_identical(from_partition({{3, 1, 1, 2, 5}}));
  REQUIRE(yes);
  const auto inst = from_partition({{3, 1, 1, 2, 5}});
  const auto u = agent_utilities(inst, *yes);
  CHECK(u[0] == u[1]);
  CHECK(verify_ceei_disc(inst, *yes).holds);

  CHECK_FALSE(find_ceei_disc_identical(from_partition({{2, 2, 3}})));
  CHECK_FALSE(find_ceei_disc_identical(from_partition({{10, 1, 1}})));
  CHECK_THROWS_AS(find_ceei_disc_identical(separation_example()), NotIdentical);
}

TEST_CASE("discrete equilibrium by enumeration") {
  const auto w = exists_ceei_disc_bruteforce(separation_example());
  REQUIRE(w);
  // Lexicographically first: agent 1 keeps only its favourite object.
  CHECK(w->assignment == DiscreteAssignment(2, {0, 0, 0, 1}));
  CHECK(verify_ceei_disc(separation_example(), w->assignment).holds);
  for (AgentIndex i = 0; i < 2; ++i) CHECK(w->prices.cost(w->assignment.bundle(i)) <= 1);

  // Odd total with identical rows: nothing works.
  CHECK_FALSE(exists_ceei_disc_bruteforce(from_partition({{2, 2, 3}})));
  CHECK_THROWS_AS(exists_ceei_disc_bruteforce(separation_example(), 8), InstanceTooLarge);
}
