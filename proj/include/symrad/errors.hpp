#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace symrad {

// Every failure carries a stable machine-readable name (e.g. "RankDeficient")
// plus a human-readable detail.  Validation errors mean the inputs were bad;
// guard errors mean the computation refused to proceed because a numerical
// safety condition (aliasing, resolution, bracketing) was violated.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Rejected input: malformed matrices, incompatible dimensions, bad files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Tripped numerical guard: the request was well-formed but cannot be
// answered reliably at the given resolution or state.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace symrad
