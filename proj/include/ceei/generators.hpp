#pragma once

#include <cstdint>
#include <vector>

#include "ceei/model.hpp"

namespace ceei {

class InvalidReductionInput : public Error {
 public:
  using Error::Error;
};

class EmptyMultiset : public InvalidReductionInput {
 public:
  EmptyMultiset() : InvalidReductionInput("multiset must not be empty") {}
};

class WindowViolation : public InvalidReductionInput {
 public:
  explicit WindowViolation(std::size_t element);
  std::size_t element() const noexcept { return element_; }

 private:
  std::size_t element_;
};

class SumMismatch : public InvalidReductionInput {
 public:
  SumMismatch(std::uint64_t sum, std::uint64_t expected);
};

/// Multiset of positive integers whose total is 2W.
struct PartitionInput {
  std::vector<std::uint64_t> values;
};

/// 3n weights with bound W: W/4 < w_j < W/2 and sum = nW.
struct ThreePartitionInput {
  std::vector<std::uint64_t> weights;
  std::uint64_t bound = 0;

  std::size_t groups() const noexcept { return weights.size() / 3; }
};

/// Two agents with identical rows equal to the multiset. An odd total is
/// allowed and simply yields an instance with no equal split.
Instance from_partition(const PartitionInput& input);

/// n agents with identical rows equal to the 3n weights. Throws
/// WindowViolation for the first weight outside (W/4, W/2) and SumMismatch
/// when the weights do not total nW.
Instance from_three_partition(const ThreePartitionInput& input);

/// Seeded instance with integer utilities in [0, max_utility] ({0,1} when
/// `binary`). Whole rows, then whole columns, are redrawn until every agent
/// and every object has a positive entry.
Instance gen_random(std::size_t agents, std::size_t objects, std::uint64_t max_utility,
                    bool binary, std::uint64_t seed);

/// Yes-instance of 3-PARTITION: `groups` triples drawn inside the window and
/// summing to `bound`, shuffled. Throws std::invalid_argument if the window
/// (bound/4, bound/2) cannot hold such a triple.
ThreePartitionInput planted_three_partition(std::size_t groups, std::uint64_t bound,
                                            std::uint64_t seed);

/// Two agents, four objects; rows (95,5,2,1) and (1,2,5,95). Giving agent 0
/// only object 0 is envy-free and Pareto optimal but not an equilibrium.
Instance separation_example();

/// Binary rows (1,1,0) and (0,1,1): the fractional optimum (3/2)^2 is not
/// reachable by any discrete assignment.
Instance binary_gap_example();

}  // namespace ceei
