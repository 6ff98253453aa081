/* Error taxonomy shared by the library and the CLI exit-code mapping. */
#pragma once

#include <stdexcept>
#include <string>

namespace ghzforge {

// Violated precondition, invalid argument, or shape mismatch. CLI exit 2.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A configured budget (enumeration, memory, sweep size) would be exceeded.
// CLI exit 3.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text or JSON. CLI exit 4.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A constructed object failed its own self-check; signals a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ghzforge
