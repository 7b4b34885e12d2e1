#include "ceei/fairness.hpp"

#include <algorithm>

#include "ceei/eg_solver.hpp"
#include "ceei/exact_lp.hpp"
#include "integer_rows.hpp"

namespace ceei {

// ---------------------------------------------------------------------------
// Envy-freeness
// ---------------------------------------------------------------------------

Verdict is_envy_free(const Instance& inst, const DiscreteAssignment& y) {
  check_dimensions(inst, y);
  const std::size_t n = inst.agents();
  std::vector<std::vector<ObjectIndex>> bundles(n);
  for (AgentIndex k = 0; k < n; ++k) bundles[k] = y.bundle(k);
  for (AgentIndex i = 0; i < n; ++i) {
    const Rational own = set_utility(inst, i, bundles[i]);
    for (AgentIndex k = 0; k < n; ++k) {
      if (k != i && set_utility(inst, i, bundles[k]) > own) return {false, EnvyPair{i, k}};
    }
  }
  return {true, std::monostate{}};
}

// ---------------------------------------------------------------------------
// Pareto optimality
// ---------------------------------------------------------------------------

namespace {

template <class Int>
class DominationSearch {
 public:
  DominationSearch(std::vector<std::vector<Int>> weights, const DiscreteAssignment& y)
      : w_(std::move(weights)), n_(w_.size()), m_(y.objects()), owner_(m_, 0) {
    target_.assign(n_, Int(0));
    current_.assign(n_, Int(0));
    remaining_.assign(n_, Int(0));
    for (ObjectIndex j = 0; j < m_; ++j) target_[y.owner(j)] += w_[y.owner(j)][j];
    for (AgentIndex i = 0; i < n_; ++i) {
      for (ObjectIndex j = 0; j < m_; ++j) remaining_[i] += w_[i][j];
    }
  }

  std::optional<std::vector<AgentIndex>> run() {
    if (descend(0)) return owner_;
    return std::nullopt;
  }

 private:
  bool reachable() const {
    for (AgentIndex i = 0; i < n_; ++i) {
      if (current_[i] + remaining_[i] < target_[i]) return false;
    }
    return true;
  }

  bool descend(ObjectIndex j) {
    if (j == m_) {
      bool strict = false;
      for (AgentIndex i = 0; i < n_; ++i) strict = strict || current_[i] > target_[i];
      return strict;
    }
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] -= w_[i][j];
    for (AgentIndex a = 0; a < n_; ++a) {
      owner_[j] = a;
      current_[a] += w_[a][j];
      if (reachable() && descend(j + 1)) return true;
      current_[a] -= w_[a][j];
    }
    for (AgentIndex i = 0; i < n_; ++i) remaining_[i] += w_[i][j];
    return false;
  }

  std::vector<std::vector<Int>> w_;
  std::size_t n_;
  std::size_t m_;
  std::vector<AgentIndex> owner_;
  std::vector<Int> target_;
  std::vector<Int> current_;
  std::vector<Int> remaining_;
};

}  // namespace

Verdict is_pareto_optimal_discrete(const Instance& inst, const DiscreteAssignment& y,
                                   std::uint64_t limit) {
  check_dimensions(inst, y);
  if (detail::saturating_pow(inst.agents(), inst.objects()) > limit) {
    throw InstanceTooLarge(inst.agents(), inst.objects(), limit);
  }
  auto dominating = detail::with_integer_rows(inst, [&](auto tag, auto rows) {
    using Sum = typename decltype(tag)::Sum;
    return DominationSearch<Sum>(std::move(rows), y).run();
  });
  if (dominating) {
    return {false, DominatingAssignment{DiscreteAssignment(inst.agents(), std::move(*dominating))}};
  }
  return {true, std::monostate{}};
}

// ---------------------------------------------------------------------------
// CEEI-FRAC
// ---------------------------------------------------------------------------

Verdict verify_ceei_frac(const Instance& inst, const DiscreteAssignment& y) {
  check_dimensions(inst, y);
  const std::vector<Rational> v = agent_utilities(inst, y);
  for (AgentIndex i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) == 0) return {false, KktViolation{i, std::nullopt, Rational(0)}};
  }
  PriceVector prices = equilibrium_prices_from_utilities(inst, v);
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    for (ObjectIndex j = 0; j < inst.objects(); ++j) {
      if (y.owner(j) != i) continue;
      Rational gap = prices[j] - inst.utility(i, j) / v[i];
      if (sgn(gap) > 0) return {false, KktViolation{i, j, std::move(gap)}};
    }
  }
  return {true, PriceSupport{std::move(prices)}};
}

// ---------------------------------------------------------------------------
// CEEI-DISC
// ---------------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

std::vector<ObjectIndex> mask_objects(Mask mask, std::size_t m) {
  std::vector<ObjectIndex> out;
  for (ObjectIndex j = 0; j < m; ++j) {
    if (mask >> j & 1) out.push_back(j);
  }
  return out;
}

/// Inclusion-minimal bundles agent `i` strictly prefers to `own`, sorted
/// lexicographically by object list.
std::vector<std::vector<ObjectIndex>> minimal_better_bundles(const std::vector<BigInt>& w,
                                                             const BigInt& own) {
  const std::size_t m = w.size();
  const Mask full = Mask{1} << m;
  std::vector<BigInt> sum(full);
  std::vector<bool> better(full, false);
  sum[0] = 0;
  for (Mask mask = 1; mask < full; ++mask) {
    const Mask low = mask & (~mask + 1);
    sum[mask] = sum[mask ^ low] + w[static_cast<std::size_t>(__builtin_ctzll(low))];
    better[mask] = sum[mask] > own;
  }
  std::vector<std::vector<ObjectIndex>> out;
  for (Mask mask = 1; mask < full; ++mask) {
    if (!better[mask]) continue;
    bool minimal = true;
    for (Mask rest = mask; rest != 0 && minimal; rest &= rest - 1) {
      const Mask low = rest & (~rest + 1);
      if (better[mask ^ low]) minimal = false;
    }
    if (minimal) out.push_back(mask_objects(mask, m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Verdict verify_ceei_disc(const Instance& inst, const DiscreteAssignment& y, std::uint64_t limit) {
  check_dimensions(inst, y);
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (m >= 63 || (std::uint64_t{1} << m) > limit) throw InstanceTooLarge(n, m, limit);

  const detail::ScaledRows scaled = detail::scale_rows(inst);
  struct BundleRow {
    AgentIndex agent;
    std::vector<ObjectIndex> objects;
  };
  std::vector<BundleRow> bundle_rows;
  for (AgentIndex i = 0; i < n; ++i) {
    BigInt own = 0;
    for (ObjectIndex j = 0; j < m; ++j) {
      if (y.owner(j) == i) own += scaled.rows[i][j];
    }
    for (auto& objects : minimal_better_bundles(scaled.rows[i], own)) {
      bundle_rows.push_back({i, std::move(objects)});
    }
  }

  // Variables: p_0..p_{m-1}, s = 1 + t.  maximize s
  //   s - p(B) <= 0   for every minimal strictly preferred bundle B
  //   p(y_i)   <= 1   for every agent with a nonempty bundle
  //   s        <= 2
  std::vector<std::vector<ObjectIndex>> own_bundles;
  for (AgentIndex i = 0; i < n; ++i) {
    auto b = y.bundle(i);
    if (!b.empty()) own_bundles.push_back(std::move(b));
  }
  const std::size_t rows = bundle_rows.size() + own_bundles.size() + 1;
  Matrix<Rational> a(rows, m + 1, Rational(0));
  std::vector<Rational> b(rows, Rational(0));
  std::size_t r = 0;
  for (const auto& row : bundle_rows) {
    a(r, m) = 1;
    for (ObjectIndex j : row.objects) a(r, j) = -1;
    ++r;
  }
  for (const auto& own : own_bundles) {
    for (ObjectIndex j : own) a(r, j) = 1;
    b[r] = 1;
    ++r;
  }
  a(r, m) = 1;
  b[r] = 2;

  std::vector<Rational> c(m + 1, Rational(0));
  c[m] = 1;
  const LpSolution lp = maximize_exact(a, b, c);

  if (lp.objective > 1) {
    std::vector<Rational> prices(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(m));
    return {true, PriceSupport{PriceVector(std::move(prices))}};
  }
  for (std::size_t k = 0; k < bundle_rows.size(); ++k) {
    if (sgn(lp.duals[k]) > 0) return {false, ViolatingBundle{bundle_rows[k].agent, bundle_rows[k].objects}};
  }
  // Unreachable for a correct LP optimum: s <= 1 requires a binding bundle row.
  return {false, std::monostate{}};
}

// ---------------------------------------------------------------------------
// Certificate re-checks
// ---------------------------------------------------------------------------

namespace {

bool recheck_frac_prices(const Instance& inst, const DiscreteAssignment& y, const PriceVector& p) {
  if (p.size() != inst.objects()) return false;
  const auto v = agent_utilities(inst, y);
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    if (sgn(v[i]) <= 0) return false;
    if (p.cost(y.bundle(i)) != 1) return false;
    for (ObjectIndex j = 0; j < inst.objects(); ++j) {
      if (inst.utility(i, j) > v[i] * p[j]) return false;
    }
  }
  return true;
}

bool recheck_disc_prices(const Instance& inst, const DiscreteAssignment& y, const PriceVector& p,
                         std::uint64_t limit) {
  const std::size_t m = inst.objects();
  if (p.size() != m) return false;
  if (m >= 63 || (std::uint64_t{1} << m) > limit) throw InstanceTooLarge(inst.agents(), m, limit);
  const auto v = agent_utilities(inst, y);
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    if (p.cost(y.bundle(i)) > 1) return false;
  }
  for (Mask mask = 0; mask < (Mask{1} << m); ++mask) {
    const auto objects = mask_objects(mask, m);
    const Rational cost = p.cost(objects);
    for (AgentIndex i = 0; i < inst.agents(); ++i) {
      if (set_utility(inst, i, objects) > v[i] && cost <= 1) return false;
    }
  }
  return true;
}

}  // namespace

bool certificate_rechecks(const Instance& inst, const DiscreteAssignment& y, Notion notion,
                          const Verdict& verdict, std::uint64_t limit) {
  check_dimensions(inst, y);
  const auto& cert = verdict.certificate;
  switch (notion) {
    case Notion::EnvyFree: {
      if (verdict.holds) return std::holds_alternative<std::monostate>(cert);
      const auto* pair = std::get_if<EnvyPair>(&cert);
      if (pair == nullptr || pair->envious == pair->envied) return false;
      return set_utility(inst, pair->envious, y.bundle(pair->envied)) >
             set_utility(inst, pair->envious, y.bundle(pair->envious));
    }
    case Notion::ParetoOptimal: {
      if (verdict.holds) return std::holds_alternative<std::monostate>(cert);
      const auto* dom = std::get_if<DominatingAssignment>(&cert);
      if (dom == nullptr) return false;
      const auto before = agent_utilities(inst, y);
      const auto after = agent_utilities(inst, dom->assignment);
      bool strict = false;
      for (AgentIndex i = 0; i < before.size(); ++i) {
        if (after[i] < before[i]) return false;
        strict = strict || after[i] > before[i];
      }
      return strict;
    }
    case Notion::CeeiFrac: {
      if (verdict.holds) {
        const auto* support = std::get_if<PriceSupport>(&cert);
        return support != nullptr && recheck_frac_prices(inst, y, support->prices);
      }
      const auto* kkt = std::get_if<KktViolation>(&cert);
      if (kkt == nullptr) return false;
      const auto v = agent_utilities(inst, y);
      if (!kkt->object) return sgn(v[kkt->agent]) == 0;
      const ObjectIndex j = *kkt->object;
      if (y.owner(j) != kkt->agent || sgn(kkt->gap) <= 0) return false;
      // Some agent must value j strictly more per unit of its own utility.
      for (AgentIndex k = 0; k < inst.agents(); ++k) {
        if (sgn(v[k]) > 0 &&
            inst.utility(k, j) / v[k] - inst.utility(kkt->agent, j) / v[kkt->agent] == kkt->gap) {
          return true;
        }
      }
      return false;
    }
    case Notion::CeeiDisc: {
      if (verdict.holds) {
        const auto* support = std::get_if<PriceSupport>(&cert);
        return support != nullptr && recheck_disc_prices(inst, y, support->prices, limit);
      }
      const auto* bundle = std::get_if<ViolatingBundle>(&cert);
      if (bundle == nullptr) return false;
      if (set_utility(inst, bundle->agent, bundle->objects) <=
          set_utility(inst, bundle->agent, y.bundle(bundle->agent))) {
        return false;
      }
      return !verify_ceei_disc(inst, y, limit).holds;
    }
  }
  return false;
}

}  // namespace ceei
