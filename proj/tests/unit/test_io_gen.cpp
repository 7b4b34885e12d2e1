#include <cstdio>
#include <numeric>

#include "doctest.h"

#include "ceei/error.hpp"
#include "ceei/generators.hpp"
#include "ceei/instance_io.hpp"
#include "oracles.hpp"

using namespace ceei;

namespace {

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

TEST_CASE("instance round trip") {
  const auto text = R"({"agents":2,"objects":4,"utilities":[[95,5,2,1],[1,2,5,95]]})";
  const auto inst = parse_instance(text);
  CHECK(inst == separation_example());
  CHECK(serialize_instance(inst) == text);
  CHECK(instance_digest(inst) == fnv1a(text));

  const auto frac = parse_instance(R"({"agents":1,"objects":2,"utilities":[["2/4","123456789012345678901234567890"]]})");
  CHECK(frac.utility(0, 0) == Rational(1, 2));
  CHECK(parse_instance(serialize_instance(frac)) == frac);
  CHECK(serialize_instance(frac) ==
        R"({"agents":1,"objects":2,"utilities":[["1/2","123456789012345678901234567890"]]})");
}

TEST_CASE("instance parse errors") {
  try {
    parse_instance("{\"agents\": 2,\n  \"objects\": }");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_instance("[]"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":1,"objects":1})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":-1,"objects":1,"utilities":[]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":2,"objects":1,"utilities":[[1]]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":1,"objects":2,"utilities":[[1]]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":1,"objects":1,"utilities":[[1.5]]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":1,"objects":1,"utilities":[[-1]]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":1,"objects":1,"utilities":[["1/0"]]})"), SchemaError);
  try {
    parse_instance(R"({"agents":1,"objects":1,"utilities":[["x"]]})");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "utilities[0][0]");
  }
  CHECK_THROWS_AS(parse_instance(R"({"agents":2,"objects":2,"utilities":[[1,0],[1,0]]})"), InvariantError);
  CHECK_THROWS_AS(parse_instance(R"({"agents":0,"objects":0,"utilities":[]})"), InvariantError);
}

TEST_CASE("assignment round trip") {
  const auto inst = separation_example();
  const auto y = parse_assignment(R"({"owner":[0,1,1,1]})", inst);
  CHECK(y == DiscreteAssignment(2, {0, 1, 1, 1}));
  CHECK(serialize_assignment(y) == R"({"owner":[0,1,1,1]})");
  CHECK_THROWS_AS(parse_assignment(R"({"owner":[0,1]})", inst), DimensionMismatch);
  CHECK_THROWS_AS(parse_assignment(R"({"owner":[0,1,2,1]})", inst), SchemaError);
  CHECK_THROWS_AS(parse_assignment(R"({"owner":[0,1,-1,1]})", inst), SchemaError);
  CHECK_THROWS_AS(parse_assignment(R"({"own":[0]})", inst), SchemaError);
}

TEST_CASE("partition reduction") {
  const auto inst = from_partition({{4, 7, 1}});
  CHECK(inst.agents() == 2);
  CHECK(inst.row(0)[1] == 7);
  CHECK(inst.row(1)[1] == 7);
  CHECK_THROWS_AS(from_partition({{}}), EmptyMultiset);
  CHECK_THROWS_AS(from_partition({{3, 0}}), InvalidReductionInput);
}

TEST_CASE("3-partition reduction") {
  const auto inst = from_three_partition({{26, 33, 41, 30, 35, 35}, 100});
  CHECK(inst.agents() == 2);
  CHECK(inst.objects() == 6);
  CHECK_THROWS_AS(from_three_partition({{}, 100}), EmptyMultiset);
  CHECK_THROWS_AS(from_three_partition({{30, 30}, 100}), InvalidReductionInput);
  try {
    from_three_partition({{25, 33, 42, 30, 35, 35}, 100});
    FAIL("expected a window violation");
  } catch (const WindowViolation& e) {
    CHECK(e.element() == 0);
  }
  CHECK_THROWS_AS(from_three_partition({{26, 33, 41, 30, 35, 36}, 100}), SumMismatch);
}

TEST_CASE("planted 3-partition fixtures") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = planted_three_partition(4, 1000, seed);
    CHECK(in.weights.size() == 12);
    CHECK(std::accumulate(in.weights.begin(), in.weights.end(), std::uint64_t{0}) == 4000);
    CHECK_NOTHROW(from_three_partition(in));
    CHECK(planted_three_partition(4, 1000, seed).weights == in.weights);
  }
  CHECK_THROWS_AS(planted_three_partition(2, 5, 0), std::invalid_argument);
}

TEST_CASE("random instances are valid and reproducible") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = gen_random(3, 5, seed % 2 ? 1 : 20, seed % 2 == 1, seed);
    CHECK(validate_instance(inst).empty());
    CHECK(gen_random(3, 5, seed % 2 ? 1 : 20, seed % 2 == 1, seed) == inst);
    if (seed % 2) {
      for (AgentIndex i = 0; i < 3; ++i) {
        for (const auto& v : inst.row(i)) CHECK((v == 0 || v == 1));
      }
    }
  }
  CHECK(gen_random(3, 5, 20, false, 1) != gen_random(3, 5, 20, false, 2));
  CHECK_THROWS_AS(gen_random(0, 5, 20, false, 1), std::invalid_argument);
}

TEST_CASE("subset-sum oracle") {
  CHECK(oracle::has_equal_bipartition({3, 1, 1, 2, 5}));
  CHECK_FALSE(oracle::has_equal_bipartition({10, 1, 1}));
  CHECK_FALSE(oracle::has_equal_bipartition({2, 2, 3}));
  CHECK(oracle::has_equal_bipartition({7, 7}));
}
