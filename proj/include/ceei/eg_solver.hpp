#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ceei/model.hpp"

namespace ceei {

struct SolverConfig {
  /// Stop once the largest relative change of any agent utility between two
  /// iterations drops below this value.
  double convergence_tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  double kkt_tolerance = 1e-8;
  /// When set, initial bids are drawn at random from this seed instead of
  /// the uniform split.
  std::optional<std::uint64_t> seed;

  /// Throws std::invalid_argument on non-positive tolerances.
  void validate() const;
};

/// Maximum violation of each equilibrium condition.
template <class T>
struct KktReport {
  T clearing{0};        ///< max_j |sum_i x_ij - 1|
  T spending{0};        ///< max_i |sum_j x_ij p_j - 1|
  T bang_per_buck{0};   ///< max relative shortfall of u_ij/p_j below agent i's best ratio, over held objects
  T negative_price{0};  ///< max_j max(0, -p_j)
  std::optional<std::pair<AgentIndex, ObjectIndex>> worst_bang_per_buck;

  T max() const {
    T out = clearing;
    for (const T* v : {&spending, &bang_per_buck, &negative_price}) {
      if (*v > out) out = *v;
    }
    return out;
  }
};

/// Equilibrium reconstructed in exact arithmetic; every condition holds with
/// equality.
struct ExactEquilibrium {
  FractionalAssignment allocation;
  std::vector<Rational> utilities;
  PriceVector prices;
};

struct EquilibriumSolution {
  Matrix<double> allocation;
  std::vector<double> utilities;
  std::vector<double> prices;
  std::size_t iterations = 0;
  double kkt_residual = 0;
  /// Present when the iterate's support was certified as an exact equilibrium.
  std::optional<ExactEquilibrium> exact;
};

class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t iterations, double residual);
  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

class ZeroUtility : public Error {
 public:
  explicit ZeroUtility(AgentIndex agent);
  AgentIndex agent() const noexcept { return agent_; }

 private:
  AgentIndex agent_;
};

/// Fisher-market equilibrium with unit budgets (the Eisenberg-Gale optimum).
///
/// Runs proportional-response bidding: each agent splits its budget over
/// objects in proportion to the utility each contributed in the previous
/// round, prices are bid totals, and shares are bid fractions. Periodically
/// the iterate's near-tight bang-per-buck edges are handed to
/// certify_equilibrium(); when that succeeds the exact equilibrium replaces
/// the floating-point iterate.
///
/// Throws NonConvergence when max_iterations is hit, or when the utility
/// vector stalls while the equilibrium residual still exceeds kkt_tolerance.
EquilibriumSolution solve_eg(const Instance& inst, const SolverConfig& cfg = {});

/// Closed-form dual prices p_j = max_i u_ij / u_i for candidate equilibrium
/// utilities. Throws ZeroUtility for the first non-positive entry.
PriceVector equilibrium_prices_from_utilities(const Instance& inst,
                                              std::span<const Rational> utilities);

/// Residuals of a floating-point solution. Shares at or below
/// `support_threshold` are ignored by the bang-per-buck check.
KktReport<double> kkt_residual(const Instance& inst, const EquilibriumSolution& sol,
                               double support_threshold = 1e-8);

/// Exact residuals; any strictly positive share counts as support.
KktReport<Rational> kkt_residual(const Instance& inst, const FractionalAssignment& x,
                                 const PriceVector& prices);

/// Attempts to recover the exact equilibrium from approximate utilities.
///
/// Edges whose bang-per-buck is within a relative window of the best are
/// treated as the spending graph; ratios are propagated exactly through each
/// connected component and scaled so that the component's prices sum to its
/// number of agents. The candidate is accepted only if the closed-form prices
/// agree and an exact money flow spends every budget on tight edges.
std::optional<ExactEquilibrium> certify_equilibrium(const Instance& inst,
                                                    std::span<const double> approx_utilities);

}  // namespace ceei
