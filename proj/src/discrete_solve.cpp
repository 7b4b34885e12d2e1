#include "ceei/discrete_solve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "ceei/fairness.hpp"
#include "ceei/max_flow.hpp"
#include "integer_rows.hpp"

namespace ceei {

NotBinary::NotBinary(AgentIndex agent, ObjectIndex object)
    : Error("utility of agent " + std::to_string(agent) + " for object " + std::to_string(object) +
            " is not 0 or 1"),
      agent_(agent),
      object_(object) {}

NotIdentical::NotIdentical(AgentIndex agent)
    : Error("utility row of agent " + std::to_string(agent) + " differs from agent 0"),
      agent_(agent) {}

InconclusiveSearch::InconclusiveSearch(std::uint64_t nodes)
    : Error("search budget exhausted after " + std::to_string(nodes) + " nodes"), nodes_(nodes) {}

namespace {

template <class Product, class Sum>
Product product_of(const std::vector<Sum>& values) {
  Product out = 1;
  for (const auto& v : values) out *= Product(v);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

template <class Sum, class Product>
class Enumerator {
 public:
  explicit Enumerator(std::vector<std::vector<Sum>> w, std::size_t m)
      : w_(std::move(w)), n_(w_.size()), m_(m), owner_(m, 0), best_owner_(m, 0),
        current_(n_, Sum(0)) {}

  std::vector<AgentIndex> run() {
    descend(0);
    return best_owner_;
  }
  std::uint64_t leaves() const { return leaves_; }

 private:
  void descend(ObjectIndex j) {
    if (j == m_) {
      ++leaves_;
      Product welfare = product_of<Product>(current_);
      if (welfare > best_) {
        best_ = welfare;
        best_owner_ = owner_;
      }
      return;
    }
    for (AgentIndex a = 0; a < n_; ++a) {
      owner_[j] = a;
      current_[a] += w_[a][j];
      descend(j + 1);
      current_[a] -= w_[a][j];
    }
  }

  std::vector<std::vector<Sum>> w_;
  std::size_t n_;
  std::size_t m_;
  std::vector<AgentIndex> owner_;
  std::vector<AgentIndex> best_owner_;
  std::vector<Sum> current_;
  Product best_ = 0;
  std::uint64_t leaves_ = 0;
};

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

class Budget {
 public:
  explicit Budget(const SearchBudget& limits)
      : limits_(limits), start_(std::chrono::steady_clock::now()) {}

  /// Counts one node; false once any limit is exceeded.
  bool tick() {
    if (exhausted_) return false;
    ++nodes_;
    if (nodes_ > limits_.max_nodes) exhausted_ = true;
    if (limits_.max_seconds > 0 && (nodes_ & 1023) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > limits_.max_seconds) exhausted_ = true;
    }
    return !exhausted_;
  }
  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  SearchBudget limits_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

template <class Sum, class Product>
class BranchAndBound {
 public:
  BranchAndBound(std::vector<std::vector<Sum>> w, std::size_t m, Budget& budget)
      : w_(std::move(w)), n_(w_.size()), m_(m), budget_(budget) {}

  /// Best welfare found with decreasing-max-utility branching; `owner` holds
  /// the incumbent in natural object indexing.
  Product maximize(const std::vector<ObjectIndex>& order, std::vector<AgentIndex>& owner) {
    order_ = order;
    reset();
    best_ = 0;
    best_owner_.assign(m_, 0);
    improve(0);
    owner = best_owner_;
    return best_;
  }

  /// Lexicographically smallest owner vector reaching `target`, branching in
  /// natural object order.
  std::optional<std::vector<AgentIndex>> first_reaching(const Product& target) {
    order_.resize(m_);
    std::iota(order_.begin(), order_.end(), ObjectIndex{0});
    reset();
    target_ = target;
    if (reach(0)) return owner_;
    return std::nullopt;
  }

 private:
  void reset() {
    owner_.assign(m_, 0);
    current_.assign(n_, Sum(0));
    remaining_.assign(n_, Sum(0));
    for (AgentIndex i = 0; i < n_; ++i) {
      for (ObjectIndex j = 0; j < m_; ++j) remaining_[i] += w_[i][j];
    }
  }

  Product bound() const {
    Product out = 1;
    for (AgentIndex i = 0; i < n_; ++i) out *= Product(current_[i] + remaining_[i]);
    return out;
  }

  void improve(std::size_t depth) {
    if (!budget_.tick()) return;
    if (depth == m_) {
      Product welfare = product_of<Product>(current_);
      if (welfare > best_) {
        best_ = welfare;
        best_owner_ = owner_;
      }
      return;
    }
    const ObjectIndex j = order_[depth];
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] -= w_[i][j];
    // Most-valuing agent first so strong incumbents appear early.
    std::vector<AgentIndex> agents(n_);
    std::iota(agents.begin(), agents.end(), AgentIndex{0});
    std::stable_sort(agents.begin(), agents.end(),
                     [&](AgentIndex a, AgentIndex b) { return w_[a][j] > w_[b][j]; });
    for (AgentIndex a : agents) {
      owner_[j] = a;
      current_[a] += w_[a][j];
      if (bound() > best_) improve(depth + 1);
      current_[a] -= w_[a][j];
      if (budget_.exhausted()) break;
    }
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] += w_[i][j];
  }

  bool reach(std::size_t depth) {
    if (!budget_.tick()) return false;
    if (depth == m_) return product_of<Product>(current_) == target_;
    const ObjectIndex j = order_[depth];
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] -= w_[i][j];
    for (AgentIndex a = 0; a < n_; ++a) {
      owner_[j] = a;
      current_[a] += w_[a][j];
      if (!(bound() < target_) && reach(depth + 1)) return true;
      current_[a] -= w_[a][j];
      if (budget_.exhausted()) break;
    }
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] += w_[i][j];
    return false;
  }

  std::vector<std::vector<Sum>> w_;
  std::size_t n_;
  std::size_t m_;
  Budget& budget_;
  std::vector<ObjectIndex> order_;
  std::vector<AgentIndex> owner_;
  std::vector<Sum> current_;
  std::vector<Sum> remaining_;
  Product best_ = 0;
  std::vector<AgentIndex> best_owner_;
  Product target_ = 0;
};

/// Whether some assignment gives every agent a positively valued object.
bool positive_welfare_possible(const Instance& inst) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (n > m) return false;
  const std::size_t source = n + m;
  const std::size_t sink = source + 1;
  MaxFlow<std::int64_t> flow(n + m + 2);
  for (AgentIndex i = 0; i < n; ++i) flow.add_edge(source, i, 1);
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (sgn(inst.utility(i, j)) > 0) flow.add_edge(i, n + j, 1);
    }
  }
  for (ObjectIndex j = 0; j < m; ++j) flow.add_edge(n + j, sink, 1);
  return flow.run(source, sink) == static_cast<std::int64_t>(n);
}

}  // namespace

SearchResult brute_force_max_nash(const Instance& inst, std::uint64_t limit) {
  require_valid(inst);
  if (detail::saturating_pow(inst.agents(), inst.objects()) > limit) {
    throw InstanceTooLarge(inst.agents(), inst.objects(), limit);
  }
  return detail::with_integer_rows(inst, [&](auto tag, auto rows) {
    using Tag = decltype(tag);
    Enumerator<typename Tag::Sum, typename Tag::Product> search(std::move(rows), inst.objects());
    DiscreteAssignment best(inst.agents(), search.run());
    Rational welfare = nash_welfare(inst, best);
    return SearchResult{std::move(best), std::move(welfare), search.leaves(), true};
  });
}

SearchResult max_nash_discrete(const Instance& inst, const SearchBudget& limits) {
  require_valid(inst);
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (!positive_welfare_possible(inst)) {
    return SearchResult{DiscreteAssignment(n, std::vector<AgentIndex>(m, 0)), Rational(0), 0, true};
  }

  std::vector<ObjectIndex> order(m);
  std::iota(order.begin(), order.end(), ObjectIndex{0});
  std::vector<Rational> column_max(m, Rational(0));
  for (ObjectIndex j = 0; j < m; ++j) {
    for (AgentIndex i = 0; i < n; ++i) column_max[j] = std::max(column_max[j], inst.utility(i, j));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](ObjectIndex a, ObjectIndex b) { return column_max[a] > column_max[b]; });

  Budget budget(limits);
  return detail::with_integer_rows(inst, [&](auto tag, auto rows) {
    using Tag = decltype(tag);
    BranchAndBound<typename Tag::Sum, typename Tag::Product> search(std::move(rows), m, budget);
    std::vector<AgentIndex> incumbent;
    const auto best = search.maximize(order, incumbent);
    bool optimal = !budget.exhausted();
    if (optimal) {
      if (auto canonical = search.first_reaching(best)) {
        incumbent = std::move(*canonical);
      } else {
        optimal = false;
      }
    }
    DiscreteAssignment assignment(n, std::move(incumbent));
    Rational welfare = nash_welfare(inst, assignment);
    return SearchResult{std::move(assignment), std::move(welfare), budget.nodes(), optimal};
  });
}

std::optional<DiscreteAssignment> exists_ceei_frac_discrete(const Instance& inst,
                                                            const SearchBudget& budget) {
  SearchResult result = max_nash_discrete(inst, budget);
  if (!result.optimal) throw InconclusiveSearch(result.nodes_explored);
  if (sgn(result.welfare) == 0) return std::nullopt;
  if (!verify_ceei_frac(inst, result.best).holds) return std::nullopt;
  return std::move(result.best);
}

SearchResult binary_max_nash(const Instance& inst) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (inst.utility(i, j) != 0 && inst.utility(i, j) != 1) throw NotBinary(i, j);
    }
  }
  require_valid(inst);

  const std::size_t source = n + m;
  const std::size_t sink = source + 1;
  MaxFlow<std::int64_t> flow(n + m + 2);
  std::vector<std::size_t> quota_edge(n);
  for (AgentIndex i = 0; i < n; ++i) quota_edge[i] = flow.add_edge(source, i, 0);
  Matrix<std::size_t> like_edge(n, m, static_cast<std::size_t>(-1));
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (inst.utility(i, j) == 1) like_edge(i, j) = flow.add_edge(i, n + j, 1);
    }
  }
  for (ObjectIndex j = 0; j < m; ++j) flow.add_edge(n + j, sink, 1);

  // Every pass tries to lift each active agent (all at the same or adjacent
  // level) by one unit; an agent that cannot be lifted sits in a tight set
  // and never moves again.
  std::vector<std::int64_t> quota(n, 0);
  std::vector<bool> active(n, true);
  std::int64_t routed = 0;
  std::uint64_t tests = 0;
  std::size_t remaining = n;
  while (remaining > 0) {
    for (AgentIndex i = 0; i < n; ++i) {
      if (!active[i]) continue;
      ++tests;
      flow.set_capacity(quota_edge[i], quota[i] + 1);
      const std::int64_t total = flow.run(source, sink);
      if (total == routed + 1) {
        routed = total;
        ++quota[i];
      } else {
        flow.set_capacity(quota_edge[i], quota[i]);
        active[i] = false;
        --remaining;
      }
    }
  }

  std::vector<AgentIndex> owner(m, 0);
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (like_edge(i, j) != static_cast<std::size_t>(-1) && flow.flow(like_edge(i, j)) > 0) {
        owner[j] = i;
      }
    }
  }
  DiscreteAssignment best(n, std::move(owner));
  Rational welfare = nash_welfare(inst, best);
  return SearchResult{std::move(best), std::move(welfare), tests, true};
}

// ---------------------------------------------------------------------------
// Identical utilities
// ---------------------------------------------------------------------------

namespace {

class EqualPartition {
 public:
  EqualPartition(std::vector<BigInt> weights, std::size_t bins, BigInt target)
      : weights_(std::move(weights)), target_(std::move(target)), load_(bins, BigInt(0)),
        bin_of_(weights_.size(), 0) {
    order_.resize(weights_.size());
    std::iota(order_.begin(), order_.end(), ObjectIndex{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](ObjectIndex a, ObjectIndex b) { return weights_[a] > weights_[b]; });
  }

  std::optional<std::vector<AgentIndex>> run() {
    if (place(0)) return bin_of_;
    return std::nullopt;
  }

 private:
  bool place(std::size_t k) {
    if (k == order_.size()) return true;
    const ObjectIndex item = order_[k];
    const BigInt& w = weights_[item];
    for (std::size_t b = 0; b < load_.size(); ++b) {
      if (load_[b] + w > target_) continue;
      // Bins with equal load are interchangeable; only the first is tried.
      bool seen = false;
      for (std::size_t e = 0; e < b && !seen; ++e) seen = load_[e] == load_[b];
      if (seen) continue;
      load_[b] += w;
      bin_of_[item] = b;
      if (place(k + 1)) return true;
      load_[b] -= w;
    }
    return false;
  }

  std::vector<BigInt> weights_;
  BigInt target_;
  std::vector<BigInt> load_;
  std::vector<AgentIndex> bin_of_;
  std::vector<ObjectIndex> order_;
};

}  // namespace

std::optional<DiscreteAssignment> find_ceei_disc_identical(const Instance& inst) {
  require_valid(inst);
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  for (AgentIndex i = 1; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (inst.utility(i, j) != inst.utility(0, j)) throw NotIdentical(i);
    }
  }
  const detail::ScaledRows scaled = detail::scale_rows(inst);
  const std::vector<BigInt>& weights = scaled.rows.front();
  const BigInt total = std::accumulate(weights.begin(), weights.end(), BigInt(0));
  if (total % n != 0) return std::nullopt;
  auto bins = EqualPartition(weights, n, total / n).run();
  if (!bins) return std::nullopt;
  return DiscreteAssignment(n, std::move(*bins));
}

std::optional<CeeiDiscWitness> exists_ceei_disc_bruteforce(const Instance& inst,
                                                           std::uint64_t limit) {
  require_valid(inst);
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (detail::saturating_pow(n, m) > limit || detail::saturating_pow(2, m) > limit) {
    throw InstanceTooLarge(n, m, limit);
  }
  std::vector<AgentIndex> owner(m, 0);
  while (true) {
    DiscreteAssignment y(n, owner);
    // A CEEI-DISC assignment is envy-free: an envied bundle is affordable to
    // its owner, so it cannot be strictly preferred by anyone else.
    if (is_envy_free(inst, y).holds) {
      Verdict verdict = verify_ceei_disc(inst, y, limit);
      if (verdict.holds) {
        return CeeiDiscWitness{std::move(y), std::get<PriceSupport>(verdict.certificate).prices};
      }
    }
    // Next owner vector in lexicographic order (last object fastest).
    std::size_t j = m;
    while (j > 0 && owner[j - 1] + 1 == n) owner[--j] = 0;
    if (j == 0) break;
    ++owner[j - 1];
  }
  return std::nullopt;
}

}  // namespace ceei
