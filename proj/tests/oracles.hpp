#pragma once

// Reference implementations used to check the library. They share no code
// with src/ beyond the model types and favour the most direct formulation.

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ceei/model.hpp"

namespace ceei::oracle {

/// Calls fn(owner) for every owner vector in {0..n-1}^m, last object fastest.
template <class Fn>
void for_each_assignment(std::size_t agents, std::size_t objects, Fn&& fn) {
  std::vector<AgentIndex> owner(objects, 0);
  while (true) {
    fn(owner);
    std::size_t k = objects;
    while (k > 0) {
      if (++owner[k - 1] < agents) break;
      owner[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

inline std::vector<Rational> utilities_of(const Instance& inst, const std::vector<AgentIndex>& owner) {
  std::vector<Rational> v(inst.agents(), Rational(0));
  for (std::size_t j = 0; j < owner.size(); ++j) v[owner[j]] += inst.utility(owner[j], j);
  return v;
}

inline Rational product(const std::vector<Rational>& v) {
  Rational p(1);
  for (const auto& x : v) p *= x;
  return p;
}

/// Maximum Nash welfare over all discrete assignments.
inline Rational max_nash_welfare(const Instance& inst) {
  Rational best(0);
  for_each_assignment(inst.agents(), inst.objects(), [&](const std::vector<AgentIndex>& owner) {
    const Rational w = product(utilities_of(inst, owner));
    if (w > best) best = w;
  });
  return best;
}

/// Fractional equilibrium test for a discrete assignment written directly
/// from the first-order conditions: with v_i = u_i(y_i) > 0, for every pair
/// (i, j) owned by k, u_ij / v_i <= u_kj / v_k.
inline bool is_fractional_equilibrium(const Instance& inst, const std::vector<AgentIndex>& owner) {
  const auto v = utilities_of(inst, owner);
  for (const auto& x : v) {
    if (x <= 0) return false;
  }
  for (std::size_t j = 0; j < owner.size(); ++j) {
    const AgentIndex k = owner[j];
    for (AgentIndex i = 0; i < inst.agents(); ++i) {
      if (inst.utility(i, j) * v[k] > inst.utility(k, j) * v[i]) return false;
    }
  }
  return true;
}

inline bool is_envy_free(const Instance& inst, const std::vector<AgentIndex>& owner) {
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    std::vector<Rational> value(inst.agents(), Rational(0));
    for (std::size_t j = 0; j < owner.size(); ++j) value[owner[j]] += inst.utility(i, j);
    for (const auto& other : value) {
      if (other > value[i]) return false;
    }
  }
  return true;
}

/// Pareto optimality by comparing against every other assignment.
inline bool is_pareto_optimal(const Instance& inst, const std::vector<AgentIndex>& owner) {
  const auto base = utilities_of(inst, owner);
  bool dominated = false;
  for_each_assignment(inst.agents(), inst.objects(), [&](const std::vector<AgentIndex>& other) {
    if (dominated) return;
    const auto v = utilities_of(inst, other);
    bool weak = true, strict = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < base[i]) weak = false;
      if (v[i] > base[i]) strict = true;
    }
    dominated = weak && strict;
  });
  return !dominated;
}

/// Whether the positive integers split into two halves of equal sum.
inline bool has_equal_bipartition(const std::vector<std::uint64_t>& values) {
  std::uint64_t total = 0;
  for (auto v : values) total += v;
  if (total % 2 != 0) return false;
  const std::uint64_t half = total / 2;
  std::vector<char> reach(half + 1, 0);
  reach[0] = 1;
  for (auto v : values) {
    if (v > half) continue;
    for (std::uint64_t s = half; s >= v; --s) {
      if (reach[s - v]) reach[s] = 1;
      if (s == v) break;
    }
  }
  return reach[half] != 0;
}

/// Nash welfare of a random complete fractional assignment; each column is
/// an exponential-weight split across agents.
inline double random_fractional_welfare(const Instance& inst, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(inst.agents(), 0.0);
  std::vector<double> w(inst.agents());
  for (std::size_t j = 0; j < inst.objects(); ++j) {
    double total = 0;
    for (auto& x : w) total += (x = expo(rng));
    for (AgentIndex i = 0; i < inst.agents(); ++i) v[i] += w[i] / total * to_double(inst.utility(i, j));
  }
  double p = 1;
  for (auto x : v) p *= x;
  return p;
}

}  // namespace ceei::oracle
