#include "ceei/exact_lp.hpp"

#include <stdexcept>

namespace ceei {

LpSolution maximize_exact(const Matrix<Rational>& a, std::span<const Rational> b,
                          std::span<const Rational> c) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (b.size() != rows || c.size() != cols) {
    throw std::invalid_argument("maximize_exact: inconsistent dimensions");
  }
  for (const auto& rhs : b) {
    if (sgn(rhs) < 0) throw std::invalid_argument("maximize_exact: origin must be feasible");
  }

  // Dictionary: x_B[r] + sum_k tab(r,k) x_N[k] = rhs[r];  z = z0 + sum_k d[k] x_N[k].
  Matrix<Rational> tab = a;
  std::vector<Rational> rhs(b.begin(), b.end());
  std::vector<Rational> d(c.begin(), c.end());
  Rational z0 = 0;
  std::vector<std::size_t> basic(rows);
  std::vector<std::size_t> nonbasic(cols);
  for (std::size_t r = 0; r < rows; ++r) basic[r] = cols + r;
  for (std::size_t k = 0; k < cols; ++k) nonbasic[k] = k;

  LpSolution out;
  while (true) {
    // Bland: entering variable with the smallest index among improving ones.
    std::size_t enter = cols;
    for (std::size_t k = 0; k < cols; ++k) {
      if (sgn(d[k]) > 0 && (enter == cols || nonbasic[k] < nonbasic[enter])) enter = k;
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (sgn(tab(r, enter)) <= 0) continue;
      Rational ratio = rhs[r] / tab(r, enter);
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basic[r] < basic[leave])) {
        leave = r;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == rows) {
      out.status = LpSolution::Status::Unbounded;
      return out;
    }

    const Rational pivot = tab(leave, enter);
    for (std::size_t k = 0; k < cols; ++k) {
      if (k != enter) tab(leave, k) /= pivot;
    }
    tab(leave, enter) = 1 / pivot;
    rhs[leave] /= pivot;

    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const Rational factor = tab(r, enter);
      if (sgn(factor) == 0) continue;
      for (std::size_t k = 0; k < cols; ++k) {
        if (k != enter) tab(r, k) -= factor * tab(leave, k);
      }
      tab(r, enter) = -factor * tab(leave, enter);
      rhs[r] -= factor * rhs[leave];
    }
    const Rational factor = d[enter];
    for (std::size_t k = 0; k < cols; ++k) {
      if (k != enter) d[k] -= factor * tab(leave, k);
    }
    d[enter] = -factor * tab(leave, enter);
    z0 += factor * rhs[leave];

    std::swap(basic[leave], nonbasic[enter]);
  }

  out.objective = z0;
  out.x.assign(cols, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (basic[r] < cols) out.x[basic[r]] = rhs[r];
  }
  out.duals.assign(rows, Rational(0));
  for (std::size_t k = 0; k < cols; ++k) {
    if (nonbasic[k] >= cols) out.duals[nonbasic[k] - cols] = -d[k];
  }
  return out;
}

}  // namespace ceei
