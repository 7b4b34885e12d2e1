#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ceei {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::string what, std::size_t expected, std::size_t actual)
      : Error(what + ": expected length " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// An exhaustive enumeration would exceed its configured size guard.
class InstanceTooLarge : public Error {
 public:
  InstanceTooLarge(std::size_t agents, std::size_t objects, std::uint64_t limit)
      : Error("instance too large for exhaustive enumeration (n=" + std::to_string(agents) +
              ", m=" + std::to_string(objects) + ", limit=" + std::to_string(limit) + ")"),
        agents_(agents),
        objects_(objects),
        limit_(limit) {}

  std::size_t agents() const noexcept { return agents_; }
  std::size_t objects() const noexcept { return objects_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::size_t agents_;
  std::size_t objects_;
  std::uint64_t limit_;
};

}  // namespace ceei
