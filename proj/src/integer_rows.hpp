#pragma once

// Internal helpers shared by the enumeration-heavy modules.

#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "ceei/model.hpp"

namespace ceei::detail {

/// Each agent's utilities multiplied by the LCM of that row's denominators.
/// Per-agent positive scaling preserves every within-agent comparison and
/// multiplies every Nash product by the same constant.
struct ScaledRows {
  std::vector<std::vector<BigInt>> rows;
  std::vector<BigInt> scale;  ///< row i was multiplied by scale[i]
};

inline ScaledRows scale_rows(const Instance& inst) {
  ScaledRows out;
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    BigInt lcm = 1;
    for (const auto& u : inst.row(i)) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), u.get_den_mpz_t());
    std::vector<BigInt> row;
    row.reserve(inst.objects());
    for (const auto& u : inst.row(i)) row.push_back(u.get_num() * (lcm / u.get_den()));
    out.rows.push_back(std::move(row));
    out.scale.push_back(lcm);
  }
  return out;
}

/// Whether every row sum fits comfortably in int64 and the product of all
/// row sums fits in a signed 128-bit integer.
inline bool fits_machine_integers(const ScaledRows& scaled) {
  std::size_t bits = 0;
  for (const auto& row : scaled.rows) {
    BigInt sum = 0;
    for (const auto& v : row) sum += v;
    const std::size_t width = mpz_sizeinbase(sum.get_mpz_t(), 2);
    if (width > 61) return false;
    bits += width;
  }
  return bits <= 125;
}

template <class Int>
std::vector<std::vector<Int>> convert_rows(const ScaledRows& scaled) {
  std::vector<std::vector<Int>> out;
  for (const auto& row : scaled.rows) {
    std::vector<Int> converted;
    for (const auto& v : row) {
      if constexpr (std::is_same_v<Int, BigInt>) converted.push_back(v);
      else converted.push_back(static_cast<Int>(v.get_si()));
    }
    out.push_back(std::move(converted));
  }
  return out;
}

/// Integer families used by the search templates.
struct MachineInts {
  using Sum = std::int64_t;
  using Product = __int128;
};
struct BigInts {
  using Sum = BigInt;
  using Product = BigInt;
};

/// Calls fn(tag, rows) with the cheapest integer family that cannot overflow.
template <class Fn>
decltype(auto) with_integer_rows(const Instance& inst, Fn&& fn) {
  const ScaledRows scaled = scale_rows(inst);
  if (fits_machine_integers(scaled)) {
    return fn(MachineInts{}, convert_rows<std::int64_t>(scaled));
  }
  return fn(BigInts{}, convert_rows<BigInt>(scaled));
}

/// base^exp saturating at uint64 max.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exp; ++k) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

}  // namespace ceei::detail
