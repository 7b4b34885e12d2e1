#include "ceei/model.hpp"

#include <numeric>

namespace ceei {

std::string InstanceViolation::describe() const {
  switch (kind) {
    case Kind::Empty:
      return "instance must have at least one agent and one object";
    case Kind::NegativeEntry:
      return "negative utility for agent " + std::to_string(*agent) + " on object " +
             std::to_string(*object);
    case Kind::ZeroRow:
      return "agent " + std::to_string(*agent) + " values no object";
    case Kind::ZeroColumn:
      return "object " + std::to_string(*object) + " is valued by no agent";
  }
  return "unknown violation";
}

namespace {

std::string join_violations(const std::vector<InstanceViolation>& violations) {
  std::string out = "invalid instance";
  for (const auto& v : violations) out += "; " + v.describe();
  return out;
}

}  // namespace

InvariantError::InvariantError(std::vector<InstanceViolation> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<InstanceViolation> validate_instance(const Instance& inst) {
  using Kind = InstanceViolation::Kind;
  std::vector<InstanceViolation> out;
  const std::size_t n = inst.agents();
  const std::size_t m = inst.objects();
  if (n == 0 || m == 0) {
    out.push_back({Kind::Empty, std::nullopt, std::nullopt});
    return out;
  }
  for (AgentIndex i = 0; i < n; ++i) {
    for (ObjectIndex j = 0; j < m; ++j) {
      if (sgn(inst.utility(i, j)) < 0) out.push_back({Kind::NegativeEntry, i, j});
    }
  }
  for (AgentIndex i = 0; i < n; ++i) {
    bool positive = false;
    for (const auto& u : inst.row(i)) positive = positive || sgn(u) > 0;
    if (!positive) out.push_back({Kind::ZeroRow, i, std::nullopt});
  }
  for (ObjectIndex j = 0; j < m; ++j) {
    bool positive = false;
    for (AgentIndex i = 0; i < n; ++i) positive = positive || sgn(inst.utility(i, j)) > 0;
    if (!positive) out.push_back({Kind::ZeroColumn, std::nullopt, j});
  }
  return out;
}

void require_valid(const Instance& inst) {
  auto violations = validate_instance(inst);
  if (!violations.empty()) throw InvariantError(std::move(violations));
}

// ---------------------------------------------------------------------------

FractionalAssignment::FractionalAssignment(Matrix<Rational> shares) : shares_(std::move(shares)) {
  for (ObjectIndex j = 0; j < shares_.cols(); ++j) {
    Rational column = 0;
    for (AgentIndex i = 0; i < shares_.rows(); ++i) {
      const Rational& v = shares_(i, j);
      if (sgn(v) < 0 || v > 1) {
        throw InvalidAssignment("share of object " + std::to_string(j) + " for agent " +
                                std::to_string(i) + " outside [0,1]");
      }
      column += v;
    }
    if (column != 1) {
      throw InvalidAssignment("object " + std::to_string(j) + " is allocated " +
                              to_string(column) + " instead of 1");
    }
  }
}

DiscreteAssignment::DiscreteAssignment(std::size_t agents, std::vector<AgentIndex> owner)
    : agents_(agents), owner_(std::move(owner)) {
  for (ObjectIndex j = 0; j < owner_.size(); ++j) {
    if (owner_[j] >= agents_) {
      throw InvalidAssignment("object " + std::to_string(j) + " owned by unknown agent " +
                              std::to_string(owner_[j]));
    }
  }
}

DiscreteAssignment DiscreteAssignment::from_bundles(
    std::size_t objects, const std::vector<std::vector<ObjectIndex>>& bundles) {
  constexpr AgentIndex unset = static_cast<AgentIndex>(-1);
  std::vector<AgentIndex> owner(objects, unset);
  for (AgentIndex i = 0; i < bundles.size(); ++i) {
    for (ObjectIndex j : bundles[i]) {
      if (j >= objects) throw InvalidAssignment("object " + std::to_string(j) + " out of range");
      if (owner[j] != unset) {
        throw InvalidAssignment("object " + std::to_string(j) + " assigned twice");
      }
      owner[j] = i;
    }
  }
  for (ObjectIndex j = 0; j < objects; ++j) {
    if (owner[j] == unset) throw InvalidAssignment("object " + std::to_string(j) + " unassigned");
  }
  return DiscreteAssignment(bundles.size(), std::move(owner));
}

DiscreteAssignment DiscreteAssignment::from_fractional(const FractionalAssignment& x) {
  std::vector<AgentIndex> owner(x.objects());
  for (ObjectIndex j = 0; j < x.objects(); ++j) {
    for (AgentIndex i = 0; i < x.agents(); ++i) {
      if (x(i, j) == 1) {
        owner[j] = i;
      } else if (sgn(x(i, j)) != 0) {
        throw InvalidAssignment("fractional share for object " + std::to_string(j));
      }
    }
  }
  return DiscreteAssignment(x.agents(), std::move(owner));
}

std::vector<ObjectIndex> DiscreteAssignment::bundle(AgentIndex i) const {
  std::vector<ObjectIndex> out;
  for (ObjectIndex j = 0; j < owner_.size(); ++j) {
    if (owner_[j] == i) out.push_back(j);
  }
  return out;
}

FractionalAssignment DiscreteAssignment::to_fractional() const {
  Matrix<Rational> x(agents_, owner_.size(), Rational(0));
  for (ObjectIndex j = 0; j < owner_.size(); ++j) x(owner_[j], j) = 1;
  return FractionalAssignment(std::move(x));
}

PriceVector::PriceVector(std::vector<Rational> prices) : prices_(std::move(prices)) {
  for (ObjectIndex j = 0; j < prices_.size(); ++j) {
    if (sgn(prices_[j]) < 0) {
      throw InvalidAssignment("negative price for object " + std::to_string(j));
    }
  }
}

Rational PriceVector::total() const {
  return std::accumulate(prices_.begin(), prices_.end(), Rational(0));
}

Rational PriceVector::cost(std::span<const ObjectIndex> bundle) const {
  Rational out = 0;
  for (ObjectIndex j : bundle) out += prices_.at(j);
  return out;
}

// ---------------------------------------------------------------------------

void check_dimensions(const Instance& inst, const FractionalAssignment& x) {
  if (x.agents() != inst.agents()) {
    throw DimensionMismatch("assignment agent count", inst.agents(), x.agents());
  }
  if (x.objects() != inst.objects()) {
    throw DimensionMismatch("assignment object count", inst.objects(), x.objects());
  }
}

void check_dimensions(const Instance& inst, const DiscreteAssignment& y) {
  if (y.agents() != inst.agents()) {
    throw DimensionMismatch("assignment agent count", inst.agents(), y.agents());
  }
  if (y.objects() != inst.objects()) {
    throw DimensionMismatch("assignment object count", inst.objects(), y.objects());
  }
}

Rational bundle_utility(const Instance& inst, AgentIndex i, std::span<const Rational> row) {
  if (row.size() != inst.objects()) {
    throw DimensionMismatch("allocation row", inst.objects(), row.size());
  }
  Rational total = 0;
  const auto utilities = inst.row(i);
  for (ObjectIndex j = 0; j < row.size(); ++j) {
    if (sgn(row[j]) != 0) total += row[j] * utilities[j];
  }
  return total;
}

Rational set_utility(const Instance& inst, AgentIndex i, std::span<const ObjectIndex> objects) {
  Rational total = 0;
  for (ObjectIndex j : objects) total += inst.utility(i, j);
  return total;
}

std::vector<Rational> agent_utilities(const Instance& inst, const FractionalAssignment& x) {
  check_dimensions(inst, x);
  std::vector<Rational> out;
  out.reserve(inst.agents());
  for (AgentIndex i = 0; i < inst.agents(); ++i) out.push_back(bundle_utility(inst, i, x.row(i)));
  return out;
}

std::vector<Rational> agent_utilities(const Instance& inst, const DiscreteAssignment& y) {
  check_dimensions(inst, y);
  std::vector<Rational> out(inst.agents(), Rational(0));
  for (ObjectIndex j = 0; j < y.objects(); ++j) out[y.owner(j)] += inst.utility(y.owner(j), j);
  return out;
}

namespace {

Rational product(const std::vector<Rational>& values) {
  Rational out = 1;
  for (const auto& v : values) {
    if (sgn(v) == 0) return Rational(0);
    out *= v;
  }
  return out;
}

}  // namespace

Rational nash_welfare(const Instance& inst, const FractionalAssignment& x) {
  return product(agent_utilities(inst, x));
}

Rational nash_welfare(const Instance& inst, const DiscreteAssignment& y) {
  return product(agent_utilities(inst, y));
}

}  // namespace ceei
