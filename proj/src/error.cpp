#include "safeplan/error.hpp"

namespace safeplan {

namespace {

std::string syntax_message(std::size_t offset, const std::set<std::string>& expected, const std::string& found) {
  std::string msg = "LTL syntax error at byte " + std::to_string(offset) + ": found " + found + ", expected ";
  if (expected.size() > 1) msg += "one of ";
  bool first = true;
  for (const auto& e : expected) {
    if (!first) msg += ", ";
    first = false;
    msg += e;
  }
  return msg;
}

}  // namespace

LtlSyntaxError::LtlSyntaxError(std::size_t offset, std::set<std::string> expected, const std::string& found)
    : Error(syntax_message(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

AlphabetTooLarge::AlphabetTooLarge(std::size_t atoms, std::size_t cap)
    : Error("alphabet too large: " + std::to_string(atoms) + " atoms (limit " + std::to_string(cap) + ")"),
      atoms_(atoms) {}

PddlSyntaxError::PddlSyntaxError(std::size_t offset, const std::string& message)
    : Error("PDDL syntax error at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

UnsupportedRequirement::UnsupportedRequirement(const std::string& requirement)
    : Error("unsupported requirement " + requirement), requirement_(requirement) {}

UnknownAction::UnknownAction(std::size_t step, const std::string& name)
    : Error("unknown action at step " + std::to_string(step) + ": " + name), step_(step) {}

}  // namespace safeplan
