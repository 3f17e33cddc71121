#pragma once

#include "trni/syntax.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace trni {

/// Base of every evaluation failure.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed non-value with no applicable rule (only reachable from ill-typed input).
class StuckTerm : public EvalError {
 public:
  explicit StuckTerm(const TermPtr& at);
  TermPtr term;
};

class DivisionByZero : public EvalError {
 public:
  explicit DivisionByZero(const TermPtr& at);
  TermPtr term;
};

class FuelExhausted : public EvalError {
 public:
  explicit FuelExhausted(std::uint64_t fuel);
  std::uint64_t fuel;
};

/// One call-by-value, left-to-right reduction step; nullopt iff `e` is a value.
std::optional<TermPtr> step(const TermPtr& e);

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Steps `e` to a value, spending at most `fuel` steps.
TermPtr evaluate(const TermPtr& e, std::uint64_t fuel = kDefaultFuel);

/// Floored integer division and modulo: the remainder takes the divisor's sign.
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt floor_mod(const BigInt& a, const BigInt& b);

}  // namespace trni
