#pragma once

#include <cstdint>

#include "ceei/model.hpp"

namespace ceei {

/// Outcome of a fairness test. `certificate` holds supporting prices when the
/// property holds (CEEI notions only) and a violation witness otherwise.
struct Verdict {
  bool holds = false;
  Certificate certificate;
};

enum class Notion { EnvyFree, ParetoOptimal, CeeiFrac, CeeiDisc };

/// Upper bound on n^m for the exhaustive Pareto test.
inline constexpr std::uint64_t kDefaultParetoLimit = 20'000'000;
/// Upper bound on 2^m for bundle enumeration in the CEEI-DISC test.
inline constexpr std::uint64_t kDefaultBundleLimit = std::uint64_t{1} << 16;

/// No agent strictly prefers another agent's bundle. On failure the
/// certificate is the first EnvyPair in (envious, envied) order.
Verdict is_envy_free(const Instance& inst, const DiscreteAssignment& y);

/// No discrete assignment weakly improves every agent and strictly improves
/// one. Exhaustive (with feasibility pruning) over all n^m assignments;
/// throws InstanceTooLarge when n^m exceeds `limit`. On failure the
/// certificate is the lexicographically first dominating assignment.
Verdict is_pareto_optimal_discrete(const Instance& inst, const DiscreteAssignment& y,
                                   std::uint64_t limit = kDefaultParetoLimit);

/// Exact test of whether y is a fractional-market equilibrium allocation.
///
/// With v_i = u_i(y_i) > 0 and p_j = max_k u_kj / v_k, y is an equilibrium
/// iff every owner attains the maximum on each object it holds. Holds with
/// PriceSupport(p); fails with the first KktViolation (by agent, then object).
Verdict verify_ceei_frac(const Instance& inst, const DiscreteAssignment& y);

/// Whether some price vector p >= 0 makes every own bundle affordable
/// (cost <= 1) while every strictly preferred bundle costs more than 1.
///
/// Only inclusion-minimal strictly preferred bundles constrain p. The
/// uniform slack t in p(B) >= 1 + t is maximized exactly; the test holds iff
/// t > 0. Throws InstanceTooLarge when 2^m exceeds `limit`.
Verdict verify_ceei_disc(const Instance& inst, const DiscreteAssignment& y,
                         std::uint64_t limit = kDefaultBundleLimit);

/// Independently re-validates a verdict's certificate against its notion.
/// Verdicts that carry no certificate (a positive envy-free or Pareto
/// verdict) re-check trivially.
bool certificate_rechecks(const Instance& inst, const DiscreteAssignment& y, Notion notion,
                          const Verdict& verdict, std::uint64_t limit = kDefaultBundleLimit);

}  // namespace ceei
