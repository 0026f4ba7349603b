#pragma once

#include <stdexcept>
#include <string>

namespace perclab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NotATree : public Error {
 public:
  using Error::Error;
};

// A vertex or node-visit budget was exhausted. `completed` is the largest
// radius / depth / walk length that was fully processed before the cap hit.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int completed)
      : Error(what), completed_(completed) {}

  int completed() const { return completed_; }

 private:
  int completed_;
};

}  // namespace perclab
