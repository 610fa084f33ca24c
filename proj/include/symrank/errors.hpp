#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace symrank {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
  DivisionByZero() : Error("division by the zero polynomial") {}
};

class NonzeroRemainder : public Error {
public:
  explicit NonzeroRemainder(const std::string& what) : Error(what) {}
};

class ZeroBase : public Error {
public:
  ZeroBase() : Error("cannot evaluate a negative power at 0") {}
};

class InvalidRange : public Error {
public:
  InvalidRange(long long lo, long long hi)
      : Error("invalid rank range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]") {}
};

class NegativeExponent : public Error {
public:
  explicit NegativeExponent(long long exp)
      : Error("class has a term with negative exponent " + std::to_string(exp)) {}
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// Raised for moduli that the enumerator does not support (even, composite,
/// or outside [3, 97]).
class OddPrimeRequired : public Error {
public:
  explicit OddPrimeRequired(long long q)
      : Error("brute-force enumeration needs an odd prime 3 <= p <= 97, got " + std::to_string(q)),
        modulus_(q) {}
  long long modulus() const noexcept { return modulus_; }

private:
  long long modulus_;
};

/// An enumeration would visit more matrices than the caller allows.
class BudgetExceeded : public Error {
public:
  BudgetExceeded(const mpz_class& required, unsigned long long budget)
      : Error("enumeration needs " + required.get_str() + " visits, budget is " +
              std::to_string(budget)),
        required_(required), budget_(budget) {}
  const mpz_class& required() const noexcept { return required_; }
  unsigned long long budget() const noexcept { return budget_; }

private:
  mpz_class required_;
  unsigned long long budget_;
};

class NonintegralQuotient : public Error {
public:
  explicit NonintegralQuotient(const std::string& what) : Error(what) {}
};

/// A recursion identity that must hold by construction failed to hold.
class IdentityViolation : public Error {
public:
  explicit IdentityViolation(const std::string& what) : Error(what) {}
};

} // namespace symrank
