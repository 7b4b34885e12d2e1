#include "ceei/generators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ceei {

WindowViolation::WindowViolation(std::size_t element)
    : InvalidReductionInput("weight " + std::to_string(element) +
                            " lies outside the open window (W/4, W/2)"),
      element_(element) {}

SumMismatch::SumMismatch(std::uint64_t sum, std::uint64_t expected)
    : InvalidReductionInput("weights sum to " + std::to_string(sum) + ", expected " +
                            std::to_string(expected)) {}

namespace {

Instance identical_rows(std::size_t agents, const std::vector<std::uint64_t>& values) {
  Matrix<Rational> u(agents, values.size());
  for (AgentIndex i = 0; i < agents; ++i) {
    for (ObjectIndex j = 0; j < values.size(); ++j) u(i, j) = Rational(BigInt(std::to_string(values[j])));
  }
  return Instance(std::move(u));
}

/// Uniform draw in [0, bound] independent of the standard library's
/// distribution implementation.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == std::numeric_limits<std::uint64_t>::max()) return rng();
  const std::uint64_t span = bound + 1;
  const std::uint64_t cutoff = std::numeric_limits<std::uint64_t>::max() -
                               std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= cutoff);
  return x % span;
}

}  // namespace

Instance from_partition(const PartitionInput& input) {
  if (input.values.empty()) throw EmptyMultiset();
  for (std::size_t j = 0; j < input.values.size(); ++j) {
    if (input.values[j] == 0) {
      throw InvalidReductionInput("element " + std::to_string(j) + " is not positive");
    }
  }
  return identical_rows(2, input.values);
}

Instance from_three_partition(const ThreePartitionInput& input) {
  if (input.weights.empty()) throw EmptyMultiset();
  if (input.weights.size() % 3 != 0) {
    throw InvalidReductionInput("need 3n weights, got " + std::to_string(input.weights.size()));
  }
  const std::uint64_t bound = input.bound;
  for (std::size_t j = 0; j < input.weights.size(); ++j) {
    // W/4 < w < W/2  <=>  W < 4w  and  2w < W
    const std::uint64_t w = input.weights[j];
    if (!(bound < 4 * w) || !(2 * w < bound)) throw WindowViolation(j);
  }
  const std::uint64_t sum = std::accumulate(input.weights.begin(), input.weights.end(), std::uint64_t{0});
  const std::uint64_t expected = input.groups() * bound;
  if (sum != expected) throw SumMismatch(sum, expected);
  return identical_rows(input.groups(), input.weights);
}

Instance gen_random(std::size_t agents, std::size_t objects, std::uint64_t max_utility, bool binary,
                    std::uint64_t seed) {
  if (agents == 0 || objects == 0) throw std::invalid_argument("need at least one agent and object");
  if (max_utility == 0) throw std::invalid_argument("max_utility must be at least 1");
  const std::uint64_t top = binary ? 1 : max_utility;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint64_t>> u(agents, std::vector<std::uint64_t>(objects));
  for (auto& row : u) {
    for (auto& v : row) v = draw(rng, top);
  }
  while (true) {
    bool changed = false;
    for (auto& row : u) {
      while (std::all_of(row.begin(), row.end(), [](std::uint64_t v) { return v == 0; })) {
        for (auto& v : row) v = draw(rng, top);
        changed = true;
      }
    }
    for (ObjectIndex j = 0; j < objects; ++j) {
      auto column_zero = [&] {
        return std::all_of(u.begin(), u.end(), [&](const auto& row) { return row[j] == 0; });
      };
      while (column_zero()) {
        for (auto& row : u) row[j] = draw(rng, top);
        changed = true;
      }
    }
    if (!changed) break;
  }
  Matrix<Rational> out(agents, objects);
  for (AgentIndex i = 0; i < agents; ++i) {
    for (ObjectIndex j = 0; j < objects; ++j) out(i, j) = Rational(BigInt(std::to_string(u[i][j])));
  }
  return Instance(std::move(out));
}

ThreePartitionInput planted_three_partition(std::size_t groups, std::uint64_t bound,
                                            std::uint64_t seed) {
  if (groups == 0) throw std::invalid_argument("need at least one group");
  // Integers strictly inside (W/4, W/2).
  const std::uint64_t lo = bound / 4 + 1;
  const std::uint64_t hi = (bound - 1) / 2;
  if (lo > hi || 3 * lo > bound || 3 * hi < bound) {
    throw std::invalid_argument("bound " + std::to_string(bound) + " admits no valid triple");
  }
  std::mt19937_64 rng(seed);
  ThreePartitionInput out;
  out.bound = bound;
  for (std::size_t g = 0; g < groups; ++g) {
    while (true) {
      const std::uint64_t a = lo + draw(rng, hi - lo);
      const std::uint64_t b = lo + draw(rng, hi - lo);
      if (a + b >= bound) continue;
      const std::uint64_t c = bound - a - b;
      if (c < lo || c > hi) continue;
      out.weights.insert(out.weights.end(), {a, b, c});
      break;
    }
  }
  for (std::size_t k = out.weights.size(); k > 1; --k) {
    std::swap(out.weights[k - 1], out.weights[draw(rng, k - 1)]);
  }
  return out;
}

Instance separation_example() {
  return Instance::from_rows({{95, 5, 2, 1}, {1, 2, 5, 95}});
}

Instance binary_gap_example() {
  return Instance::from_rows({{1, 1, 0}, {0, 1, 1}});
}

}  // namespace ceei
