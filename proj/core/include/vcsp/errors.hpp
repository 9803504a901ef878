#pragma once

#include <stdexcept>
#include <string>

namespace vcsp {

// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Arity/scope/domain mismatches and other ill-formed inputs.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured enumeration or size cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vcsp
