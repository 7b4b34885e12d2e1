#pragma once

#include <cstdint>
#include <optional>

#include "ceei/model.hpp"

namespace ceei {

struct SearchResult {
  DiscreteAssignment best;
  Rational welfare;
  std::uint64_t nodes_explored = 0;
  /// False when a node or time budget cut the search short.
  bool optimal = true;
};

struct SearchBudget {
  std::uint64_t max_nodes = 200'000'000;
  /// Wall-clock limit; zero disables it.
  double max_seconds = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 20'000'000;

class NotBinary : public Error {
 public:
  NotBinary(AgentIndex agent, ObjectIndex object);
  AgentIndex agent() const noexcept { return agent_; }
  ObjectIndex object() const noexcept { return object_; }

 private:
  AgentIndex agent_;
  ObjectIndex object_;
};

class NotIdentical : public Error {
 public:
  explicit NotIdentical(AgentIndex agent);
  AgentIndex agent() const noexcept { return agent_; }

 private:
  AgentIndex agent_;
};

class InconclusiveSearch : public Error {
 public:
  explicit InconclusiveSearch(std::uint64_t nodes);
  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  std::uint64_t nodes_;
};

/// Exhaustive enumeration of all n^m complete assignments. Returns the
/// welfare maximum, ties broken by the lexicographically smallest owner
/// vector. Throws InstanceTooLarge when n^m exceeds `limit`.
SearchResult brute_force_max_nash(const Instance& inst,
                                  std::uint64_t limit = kDefaultEnumerationLimit);

/// Branch and bound for the maximum Nash welfare discrete assignment.
///
/// Objects are branched in decreasing order of their largest utility; a node
/// is pruned when the product of (current utility + utility of all
/// unassigned objects) over agents cannot beat the incumbent. A second
/// bounded pass in natural object order recovers the canonical
/// (lexicographically smallest) optimal owner vector. When no assignment
/// gives every agent positive utility the result is welfare 0 with every
/// object on agent 0.
SearchResult max_nash_discrete(const Instance& inst, const SearchBudget& budget = {});

/// A discrete assignment that is a fractional-market equilibrium, if any.
/// Such an assignment exists iff a maximum Nash welfare discrete assignment
/// attains the fractional optimum, so the canonical optimum is tested
/// exactly. Throws InconclusiveSearch if the budget truncated the search.
std::optional<DiscreteAssignment> exists_ceei_frac_discrete(const Instance& inst,
                                                            const SearchBudget& budget = {});

/// Maximum Nash welfare for 0/1 utilities in polynomial time.
///
/// Grows agent quotas one unit at a time on a bipartite flow network
/// (agent -> liked object -> sink), raising the lowest level first and
/// freezing an agent once its quota cannot grow. The result admits no
/// improving unit transfer, which for 0/1 utilities is the leximin and
/// maximum Nash welfare allocation. Throws NotBinary for the first entry
/// outside {0, 1}.
SearchResult binary_max_nash(const Instance& inst);

/// For identical utility rows: an assignment giving every agent the same
/// utility, found by largest-first depth-first partitioning with symmetric
/// bin pruning. Throws NotIdentical naming the first row that differs from
/// row 0.
std::optional<DiscreteAssignment> find_ceei_disc_identical(const Instance& inst);

struct CeeiDiscWitness {
  DiscreteAssignment assignment;
  PriceVector prices;
};

/// First assignment in owner-vector order that passes verify_ceei_disc,
/// with its price certificate. Throws InstanceTooLarge when n^m or 2^m
/// exceeds `limit`.
std::optional<CeeiDiscWitness> exists_ceei_disc_bruteforce(
    const Instance& inst, std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace ceei
