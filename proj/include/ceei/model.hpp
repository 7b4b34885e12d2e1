#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ceei/error.hpp"
#include "ceei/matrix.hpp"
#include "ceei/rational.hpp"

namespace ceei {

using AgentIndex = std::size_t;
using ObjectIndex = std::size_t;

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

/// One broken instance invariant. `agent` / `object` are set according to kind.
struct InstanceViolation {
  enum class Kind { Empty, NegativeEntry, ZeroRow, ZeroColumn };

  Kind kind;
  std::optional<AgentIndex> agent;
  std::optional<ObjectIndex> object;

  std::string describe() const;
  bool operator==(const InstanceViolation&) const = default;
};

class InvariantError : public Error {
 public:
  explicit InvariantError(std::vector<InstanceViolation> violations);
  const std::vector<InstanceViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<InstanceViolation> violations_;
};

/// Assignment problem: n agents, m objects, additive nonnegative utilities.
///
/// Construction only enforces a rectangular shape; the positivity invariants
/// are reported by validate_instance() so that broken inputs can be inspected.
/// Every solver calls require_valid() on entry.
class Instance {
 public:
  Instance() = default;
  explicit Instance(Matrix<Rational> utilities) : utilities_(std::move(utilities)) {}

  static Instance from_rows(const std::vector<std::vector<Rational>>& rows) {
    return Instance(Matrix<Rational>::from_rows(rows));
  }

  std::size_t agents() const noexcept { return utilities_.rows(); }
  std::size_t objects() const noexcept { return utilities_.cols(); }

  const Rational& utility(AgentIndex i, ObjectIndex j) const { return utilities_(i, j); }
  std::span<const Rational> row(AgentIndex i) const { return utilities_.row(i); }
  const Matrix<Rational>& utilities() const noexcept { return utilities_; }

  bool operator==(const Instance&) const = default;

 private:
  Matrix<Rational> utilities_;
};

/// Every violated invariant, in row-major discovery order. Empty means valid.
std::vector<InstanceViolation> validate_instance(const Instance& inst);

/// Throws InvariantError listing every violation.
void require_valid(const Instance& inst);

// ---------------------------------------------------------------------------
// Assignments and prices
// ---------------------------------------------------------------------------

class InvalidAssignment : public Error {
 public:
  using Error::Error;
};

/// Complete fractional assignment: entries in [0,1], every column sums to 1.
class FractionalAssignment {
 public:
  explicit FractionalAssignment(Matrix<Rational> shares);

  std::size_t agents() const noexcept { return shares_.rows(); }
  std::size_t objects() const noexcept { return shares_.cols(); }
  const Rational& operator()(AgentIndex i, ObjectIndex j) const { return shares_(i, j); }
  std::span<const Rational> row(AgentIndex i) const { return shares_.row(i); }
  const Matrix<Rational>& shares() const noexcept { return shares_; }

  bool operator==(const FractionalAssignment&) const = default;

 private:
  Matrix<Rational> shares_;
};

/// Complete discrete assignment stored as the owner of each object.
/// Ordering is lexicographic on the owner vector, which is the canonical
/// tie-break used by every search in the library.
class DiscreteAssignment {
 public:
  DiscreteAssignment() = default;
  DiscreteAssignment(std::size_t agents, std::vector<AgentIndex> owner);

  /// Builds from explicit bundles; every object in [0, objects) must appear once.
  static DiscreteAssignment from_bundles(std::size_t objects,
                                         const std::vector<std::vector<ObjectIndex>>& bundles);
  /// Throws InvalidAssignment unless every entry is 0 or 1.
  static DiscreteAssignment from_fractional(const FractionalAssignment& x);

  std::size_t agents() const noexcept { return agents_; }
  std::size_t objects() const noexcept { return owner_.size(); }
  AgentIndex owner(ObjectIndex j) const { return owner_.at(j); }
  std::span<const AgentIndex> owners() const noexcept { return owner_; }
  std::vector<ObjectIndex> bundle(AgentIndex i) const;

  FractionalAssignment to_fractional() const;

  bool operator==(const DiscreteAssignment&) const = default;
  auto operator<=>(const DiscreteAssignment& other) const { return owner_ <=> other.owner_; }

 private:
  std::size_t agents_ = 0;
  std::vector<AgentIndex> owner_;
};

/// One nonnegative price per object; every agent holds a budget of 1.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(std::vector<Rational> prices);

  std::size_t size() const noexcept { return prices_.size(); }
  const Rational& operator[](ObjectIndex j) const { return prices_[j]; }
  std::span<const Rational> values() const noexcept { return prices_; }

  Rational total() const;
  Rational cost(std::span<const ObjectIndex> bundle) const;

  bool operator==(const PriceVector&) const = default;

 private:
  std::vector<Rational> prices_;
};

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct EnvyPair {
  AgentIndex envious;
  AgentIndex envied;
  bool operator==(const EnvyPair&) const = default;
};

struct DominatingAssignment {
  DiscreteAssignment assignment;
  bool operator==(const DominatingAssignment&) const = default;
};

struct PriceSupport {
  PriceVector prices;
  bool operator==(const PriceSupport&) const = default;
};

/// A bundle the agent strictly prefers to its own and that no admissible
/// price vector can make unaffordable.
struct ViolatingBundle {
  AgentIndex agent;
  std::vector<ObjectIndex> objects;
  bool operator==(const ViolatingBundle&) const = default;
};

/// Equilibrium condition failure. With `object` set: the agent owns the
/// object but its ratio u_ij/v_i falls short of the price by `gap`.
/// Without `object`: the agent's utility is zero.
struct KktViolation {
  AgentIndex agent;
  std::optional<ObjectIndex> object;
  Rational gap;
  bool operator==(const KktViolation&) const = default;
};

using Certificate = std::variant<std::monostate, EnvyPair, DominatingAssignment, PriceSupport,
                                 ViolatingBundle, KktViolation>;

// ---------------------------------------------------------------------------
// Utility and welfare
// ---------------------------------------------------------------------------

/// Additive utility u_i(row) = sum_j row_j * u_ij.
Rational bundle_utility(const Instance& inst, AgentIndex i, std::span<const Rational> row);

/// Utility of agent i for an explicit set of objects.
Rational set_utility(const Instance& inst, AgentIndex i, std::span<const ObjectIndex> objects);

std::vector<Rational> agent_utilities(const Instance& inst, const FractionalAssignment& x);
std::vector<Rational> agent_utilities(const Instance& inst, const DiscreteAssignment& y);

/// Product of agent utilities.
Rational nash_welfare(const Instance& inst, const FractionalAssignment& x);
Rational nash_welfare(const Instance& inst, const DiscreteAssignment& y);

/// Throws DimensionMismatch unless the assignment matches the instance shape.
void check_dimensions(const Instance& inst, const FractionalAssignment& x);
void check_dimensions(const Instance& inst, const DiscreteAssignment& y);

}  // namespace ceei
