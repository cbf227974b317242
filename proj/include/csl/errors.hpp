#pragma once

#include <stdexcept>
#include <string>

namespace csl {

// Input points span a lower-dimensional flat than requested.
class DegenerateFlat : public std::runtime_error {
 public:
  explicit DegenerateFlat(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its accuracy target.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csl
