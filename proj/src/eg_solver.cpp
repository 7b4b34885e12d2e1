#include "ceei/eg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include "ceei/max_flow.hpp"

namespace ceei {

void SolverConfig::validate() const {
  if (!(convergence_tolerance > 0) || !(kkt_tolerance > 0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
}

NonConvergence::NonConvergence(std::size_t iterations, double residual)
    : Error("equilibrium solver did not converge after " + std::to_string(iterations) +
            " iterations (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

ZeroUtility::ZeroUtility(AgentIndex agent)
    : Error("agent " + std::to_string(agent) + " has zero utility"), agent_(agent) {}

PriceVector equilibrium_prices_from_utilities(const Instance& inst,
                                              std::span<const Rational> utilities) {
  if (utilities.size() != inst.agents()) {
    throw DimensionMismatch("utility vector", inst.agents(), utilities.size());
  }
  for (AgentIndex i = 0; i < utilities.size(); ++i) {
    if (sgn(utilities[i]) <= 0) throw ZeroUtility(i);
  }
  std::vector<Rational> prices(inst.objects(), Rational(0));
  for (ObjectIndex j = 0; j < inst.objects(); ++j) {
    for (AgentIndex i = 0; i < inst.agents(); ++i) {
      Rational ratio = inst.utility(i, j) / utilities[i];
      if (ratio > prices[j]) prices[j] = std::move(ratio);
    }
  }
  return PriceVector(std::move(prices));
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

namespace {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

// `x(i,j)`, `price(j)`, `util(i,j)` return T. `supported(i,j)` decides which
// shares are held for the bang-per-buck check.
template <class T, class X, class P, class U, class S>
KktReport<T> compute_kkt(std::size_t n, std::size_t m, X&& x, P&& price, U&& util,
                         S&& supported) {
  KktReport<T> report;
  for (ObjectIndex j = 0; j < m; ++j) {
    T column(0);
    for (AgentIndex i = 0; i < n; ++i) column += x(i, j);
    report.clearing = std::max(report.clearing, abs_value(T(column - T(1))));
    if (price(j) < T(0)) report.negative_price = std::max(report.negative_price, T(-price(j)));
  }
  for (AgentIndex i = 0; i < n; ++i) {
    T spent(0);
    for (ObjectIndex j = 0; j < m; ++j) spent += x(i, j) * price(j);
    report.spending = std::max(report.spending, abs_value(T(spent - T(1))));

    // Best ratio; an object the agent values at a non-positive price makes
    // the best ratio unbounded.
    bool unbounded = false;
    T best(0);
    for (ObjectIndex j = 0; j < m; ++j) {
      if (!(util(i, j) > T(0))) continue;
      if (!(price(j) > T(0))) {
        unbounded = true;
        continue;
      }
      T ratio = util(i, j) / price(j);
      if (ratio > best) best = ratio;
    }
    for (ObjectIndex j = 0; j < m; ++j) {
      if (!supported(i, j)) continue;
      T shortfall(0);
      if (unbounded) {
        shortfall = T(1);
      } else if (best > T(0)) {
        T ratio = price(j) > T(0) ? T(util(i, j) / price(j)) : T(0);
        shortfall = (best - ratio) / best;
      }
      if (shortfall > report.bang_per_buck) {
        report.bang_per_buck = shortfall;
        report.worst_bang_per_buck = std::make_pair(i, j);
      }
    }
  }
  return report;
}

}  // namespace

KktReport<double> kkt_residual(const Instance& inst, const EquilibriumSolution& sol,
                               double support_threshold) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (sol.allocation.rows() != n) throw DimensionMismatch("allocation rows", n, sol.allocation.rows());
  if (sol.allocation.cols() != m) throw DimensionMismatch("allocation cols", m, sol.allocation.cols());
  if (sol.prices.size() != m) throw DimensionMismatch("price vector", m, sol.prices.size());
  Matrix<double> u(n, m);
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) u(i, j) = to_double(inst.utility(i, j));
  }
  return compute_kkt<double>(
      n, m, [&](AgentIndex i, ObjectIndex j) { return sol.allocation(i, j); },
      [&](ObjectIndex j) { return sol.prices[j]; },
      [&](AgentIndex i, ObjectIndex j) { return u(i, j); },
      [&](AgentIndex i, ObjectIndex j) { return sol.allocation(i, j) > support_threshold; });
}

KktReport<Rational> kkt_residual(const Instance& inst, const FractionalAssignment& x,
                                 const PriceVector& prices) {
  check_dimensions(inst, x);
  if (prices.size() != inst.objects()) {
    throw DimensionMismatch("price vector", inst.objects(), prices.size());
  }
  return compute_kkt<Rational>(
      inst.agents(), inst.objects(), [&](AgentIndex i, ObjectIndex j) { return x(i, j); },
      [&](ObjectIndex j) { return prices[j]; },
      [&](AgentIndex i, ObjectIndex j) { return inst.utility(i, j); },
      [&](AgentIndex i, ObjectIndex j) { return sgn(x(i, j)) > 0; });
}

// ---------------------------------------------------------------------------
// Exact certification
// ---------------------------------------------------------------------------

namespace {

std::optional<ExactEquilibrium> certify_with_window(const Instance& inst,
                                                    std::span<const double> approx,
                                                    double window) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();

  // Candidate spending graph from the approximate ratios.
  std::vector<std::vector<ObjectIndex>> agent_edges(n);
  std::vector<std::vector<AgentIndex>> object_edges(m);
  for (ObjectIndex j = 0; j < m; ++j) {
    double best = 0;
    for (AgentIndex i = 0; i < n; ++i) best = std::max(best, to_double(inst.utility(i, j)) / approx[i]);
    for (AgentIndex i = 0; i < n; ++i) {
      const double uij = to_double(inst.utility(i, j));
      if (uij > 0 && uij / approx[i] >= best * (1 - window)) {
        agent_edges[i].push_back(j);
        object_edges[j].push_back(i);
      }
    }
  }

  // Propagate exact ratios per component: u_k = u_kj / p_j, p_j = u_ij / u_i.
  std::vector<std::optional<Rational>> util(n);
  std::vector<std::optional<Rational>> price(m);
  for (AgentIndex root = 0; root < n; ++root) {
    if (util[root]) continue;
    std::vector<AgentIndex> comp_agents{root};
    std::vector<ObjectIndex> comp_objects;
    util[root] = Rational(1);
    std::queue<AgentIndex> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const AgentIndex i = frontier.front();
      frontier.pop();
      for (ObjectIndex j : agent_edges[i]) {
        Rational pj = inst.utility(i, j) / *util[i];
        if (price[j]) {
          if (*price[j] != pj) return std::nullopt;
          continue;
        }
        price[j] = pj;
        comp_objects.push_back(j);
        for (AgentIndex k : object_edges[j]) {
          Rational uk = inst.utility(k, j) / pj;
          if (util[k]) {
            if (*util[k] != uk) return std::nullopt;
            continue;
          }
          util[k] = std::move(uk);
          comp_agents.push_back(k);
          frontier.push(k);
        }
      }
    }
    // Component prices must sum to the number of its agents.
    Rational mass = 0;
    for (ObjectIndex j : comp_objects) mass += *price[j];
    if (sgn(mass) == 0) return std::nullopt;
    const Rational scale = mass / static_cast<unsigned long>(comp_agents.size());
    for (AgentIndex i : comp_agents) *util[i] *= scale;
    for (ObjectIndex j : comp_objects) *price[j] /= scale;
  }
  for (ObjectIndex j = 0; j < m; ++j) {
    if (!price[j]) return std::nullopt;
  }

  std::vector<Rational> utilities;
  utilities.reserve(n);
  for (auto& u : util) utilities.push_back(std::move(*u));
  PriceVector closed = equilibrium_prices_from_utilities(inst, utilities);
  for (ObjectIndex j = 0; j < m; ++j) {
    if (closed[j] != *price[j]) return std::nullopt;
  }

  // Money flow: source -> agent (budget 1) -> tight object -> sink (price).
  const std::size_t source = n + m;
  const std::size_t sink = source + 1;
  MaxFlow<Rational> flow(n + m + 2);
  for (AgentIndex i = 0; i < n; ++i) flow.add_edge(source, i, Rational(1));
  Matrix<std::size_t> edge_id(n, m, static_cast<std::size_t>(-1));
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (sgn(inst.utility(i, j)) > 0 && inst.utility(i, j) / utilities[i] == closed[j]) {
        edge_id(i, j) = flow.add_edge(i, n + j, Rational(1));
      }
    }
  }
  for (ObjectIndex j = 0; j < m; ++j) flow.add_edge(n + j, sink, closed[j]);
  if (flow.run(source, sink) != static_cast<unsigned long>(n)) return std::nullopt;

  Matrix<Rational> shares(n, m, Rational(0));
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (edge_id(i, j) != static_cast<std::size_t>(-1)) {
        shares(i, j) = flow.flow(edge_id(i, j)) / closed[j];
      }
    }
  }
  return ExactEquilibrium{FractionalAssignment(std::move(shares)), std::move(utilities),
                          std::move(closed)};
}

}  // namespace

std::optional<ExactEquilibrium> certify_equilibrium(const Instance& inst,
                                                    std::span<const double> approx_utilities) {
  require_valid(inst);
  if (approx_utilities.size() != inst.agents()) {
    throw DimensionMismatch("approximate utilities", inst.agents(), approx_utilities.size());
  }
  for (double u : approx_utilities) {
    if (!(u > 0) || !std::isfinite(u)) return std::nullopt;
  }
  for (double window : {1e-9, 1e-6, 1e-3}) {
    if (auto eq = certify_with_window(inst, approx_utilities, window)) return eq;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proportional response
// ---------------------------------------------------------------------------

namespace {

EquilibriumSolution from_exact(const Instance& inst, ExactEquilibrium eq, std::size_t iterations,
                               double support_threshold) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  EquilibriumSolution sol;
  sol.allocation = Matrix<double>(n, m);
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) sol.allocation(i, j) = to_double(eq.allocation(i, j));
  }
  for (const auto& u : eq.utilities) sol.utilities.push_back(to_double(u));
  for (const auto& p : eq.prices.values()) sol.prices.push_back(to_double(p));
  sol.iterations = iterations;
  sol.exact = std::move(eq);
  sol.kkt_residual = kkt_residual(inst, sol, support_threshold).max();
  return sol;
}

}  // namespace

EquilibriumSolution solve_eg(const Instance& inst, const SolverConfig& cfg) {
  cfg.validate();
  require_valid(inst);
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();

  Matrix<double> u(n, m);
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) u(i, j) = to_double(inst.utility(i, j));
  }

  Matrix<double> bids(n, m, 1.0 / static_cast<double>(m));
  if (cfg.seed) {
    std::mt19937_64 rng(*cfg.seed);
    for (AgentIndex i = 0; i < n; ++i) {
      double total = 0;
      for (ObjectIndex j = 0; j < m; ++j) {
        // Uniform in (0, 1].
        bids(i, j) = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
        total += bids(i, j);
      }
      for (ObjectIndex j = 0; j < m; ++j) bids(i, j) /= total;
    }
  }

  Matrix<double> shares(n, m);
  std::vector<double> prices(m);
  std::vector<double> utilities(n, 0.0);
  std::vector<double> previous(n, 0.0);
  std::size_t next_certification = 8;

  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    for (ObjectIndex j = 0; j < m; ++j) {
      double total = 0;
      for (AgentIndex i = 0; i < n; ++i) total += bids(i, j);
      prices[j] = total;
      for (AgentIndex i = 0; i < n; ++i) shares(i, j) = total > 0 ? bids(i, j) / total : 0.0;
    }
    double change = 0;
    for (AgentIndex i = 0; i < n; ++i) {
      double ui = 0;
      for (ObjectIndex j = 0; j < m; ++j) ui += u(i, j) * shares(i, j);
      if (iter > 1) change = std::max(change, std::abs(ui - previous[i]) / ui);
      utilities[i] = ui;
    }
    previous = utilities;
    const bool converged = iter > 1 && change < cfg.convergence_tolerance;

    if (converged || iter == next_certification || iter == cfg.max_iterations) {
      if (auto eq = certify_equilibrium(inst, utilities)) {
        return from_exact(inst, std::move(*eq), iter, cfg.kkt_tolerance);
      }
      next_certification = iter + std::max<std::size_t>(8, iter / 4);
    }

    if (converged || iter == cfg.max_iterations) {
      EquilibriumSolution sol;
      sol.allocation = shares;
      sol.utilities = utilities;
      sol.prices = prices;
      sol.iterations = iter;
      sol.kkt_residual = kkt_residual(inst, sol, cfg.kkt_tolerance).max();
      if (converged && sol.kkt_residual <= cfg.kkt_tolerance) return sol;
      throw NonConvergence(iter, sol.kkt_residual);
    }

    for (AgentIndex i = 0; i < n; ++i) {
      for (ObjectIndex j = 0; j < m; ++j) bids(i, j) = u(i, j) * shares(i, j) / utilities[i];
    }
  }
  throw NonConvergence(cfg.max_iterations, std::numeric_limits<double>::infinity());
}

}  // namespace ceei
