#pragma once

#include <span>
#include <vector>

#include "ceei/matrix.hpp"
#include "ceei/rational.hpp"

namespace ceei {

struct LpSolution {
  enum class Status { Optimal, Unbounded };

  Status status = Status::Optimal;
  Rational objective;
  std::vector<Rational> x;
  /// Shadow price of each row constraint at the optimum.
  std::vector<Rational> duals;
};

/// Exact primal simplex with Bland's rule for
///   maximize c'x  subject to  A x <= b,  x >= 0,
/// where b >= 0 so the origin is feasible (throws std::invalid_argument
/// otherwise). Uses a compact dictionary of size rows x (cols + 1), so a large
/// number of constraints over few variables stays cheap.
LpSolution maximize_exact(const Matrix<Rational>& a, std::span<const Rational> b,
                          std::span<const Rational> c);

}  // namespace ceei
