#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ramseylab {

inline constexpr const char* kEngineVersion = "0.1.0";

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotRelatedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BackendMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// No transversal exists on the nonsmooth backend; asking for one is an error.
struct NoTransversalError : std::logic_error {
  using std::logic_error::logic_error;
};

// Order operations reject classes whose tail is constant (the odometer walks
// out of them).
struct ConstantTailError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown by fuel-bounded helpers that run inside pure call chains (coloring
// evaluation); engines catch it and turn it into a fuel_exhausted status.
struct FuelExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step budget for unbounded searches. Exhaustion is a distinct, non-fatal
// outcome; nothing in the engines ever converts it into a claim of
// nonexistence.
class Fuel {
 public:
  explicit Fuel(std::uint64_t budget) : remaining_(budget) {}

  bool take(std::uint64_t n = 1) {
    if (remaining_ < n) {
      remaining_ = 0;
      return false;
    }
    remaining_ -= n;
    used_ += n;
    return true;
  }

  bool exhausted() const { return remaining_ == 0; }
  std::uint64_t remaining() const { return remaining_; }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t remaining_;
  std::uint64_t used_ = 0;
};

}  // namespace ramseylab
