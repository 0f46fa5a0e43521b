#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace safeplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed LTL text. `offset` is the byte offset of the offending token.
class LtlSyntaxError : public Error {
 public:
  LtlSyntaxError(std::size_t offset, std::set<std::string> expected, const std::string& found);

  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

/// Raised by the automaton-based operations when the combined atom count
/// exceeds kMaxAlphabetAtoms.
class AlphabetTooLarge : public Error {
 public:
  AlphabetTooLarge(std::size_t atoms, std::size_t cap);
  std::size_t atoms() const { return atoms_; }

 private:
  std::size_t atoms_;
};

class PddlSyntaxError : public Error {
 public:
  PddlSyntaxError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedRequirement : public Error {
 public:
  explicit UnsupportedRequirement(const std::string& requirement);
  const std::string& requirement() const { return requirement_; }

 private:
  std::string requirement_;
};

/// Semantically invalid PDDL: undeclared names, arity or type mismatches,
/// missing requirement flags.
class PddlValidationError : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class UnknownAction : public Error {
 public:
  UnknownAction(std::size_t step, const std::string& name);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class AllCandidatesInvalid : public Error {
 public:
  using Error::Error;
};

class UnknownRelationEndpoint : public Error {
 public:
  using Error::Error;
};

}  // namespace safeplan
