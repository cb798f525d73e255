#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace klow {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  ok = 0,
  verification_failed = 2,
  budget_exceeded = 3,
  bad_input = 4,
};

/// Base class of every error raised by the library. Each error knows the
/// exit code it maps to and a short machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, ExitCode code)
      : std::runtime_error(what), kind_(std::move(kind)), code_(code) {}

  const std::string& kind() const noexcept { return kind_; }
  ExitCode exit_code() const noexcept { return code_; }

 private:
  std::string kind_;
  ExitCode code_;
};

class BadInput : public Error {
 public:
  explicit BadInput(const std::string& what, std::string kind = "BadInput")
      : Error(std::move(kind), what, ExitCode::bad_input) {}
};

/// A ring table fails an axiom; `witness` names the offending triple.
class AxiomViolation : public BadInput {
 public:
  AxiomViolation(const std::string& axiom, std::uint32_t x, std::uint32_t y, std::uint32_t z)
      : BadInput("axiom '" + axiom + "' fails at (" + std::to_string(x) + "," +
                     std::to_string(y) + "," + std::to_string(z) + ")",
                 "AxiomViolation"),
        axiom_(axiom),
        witness_{x, y, z} {}

  const std::string& axiom() const noexcept { return axiom_; }
  const std::uint32_t* witness() const noexcept { return witness_; }

 private:
  std::string axiom_;
  std::uint32_t witness_[3];
};

class NotIrreducible : public BadInput {
 public:
  explicit NotIrreducible(const std::string& what) : BadInput(what, "NotIrreducible") {}
};

class NotUnital : public BadInput {
 public:
  explicit NotUnital(const std::string& ring) : BadInput("ring '" + ring + "' has no unit", "NotUnital") {}
};

class RingMismatch : public BadInput {
 public:
  explicit RingMismatch(const std::string& what) : BadInput(what, "RingMismatch") {}
};

class NotInvertible : public BadInput {
 public:
  explicit NotInvertible(const std::string& what) : BadInput(what, "NotInvertible") {}
};

class LiftMismatch : public BadInput {
 public:
  explicit LiftMismatch(const std::string& what) : BadInput(what, "LiftMismatch") {}
};

class FieldTooSmall : public BadInput {
 public:
  explicit FieldTooSmall(const std::string& what) : BadInput(what, "FieldTooSmall") {}
};

class UnitalInput : public BadInput {
 public:
  explicit UnitalInput(const std::string& what) : BadInput(what, "UnitalInput") {}
};

class NotFiniteSupport : public BadInput {
 public:
  explicit NotFiniteSupport(const std::string& what) : BadInput(what, "NotFiniteSupport") {}
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double estimate)
      : Error("BudgetExceeded", what + " (estimated " + std::to_string(static_cast<long double>(estimate)) + ")",
              ExitCode::budget_exceeded),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// An identity that must hold exactly was violated.
class IdentityFailed : public Error {
 public:
  IdentityFailed(const std::string& which, const std::string& witness)
      : Error("IdentityFailed", which + ": " + witness, ExitCode::verification_failed),
        which_(which),
        witness_(witness) {}

  const std::string& which() const noexcept { return which_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string which_;
  std::string witness_;
};

/// The difference h p h^-1 - p escaped the ideal.
class NotInIdeal : public Error {
 public:
  explicit NotInIdeal(const std::string& what)
      : Error("NotInIdeal", what, ExitCode::verification_failed) {}
};

}  // namespace klow
