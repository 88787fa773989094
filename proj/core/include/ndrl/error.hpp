#pragma once

#include <stdexcept>
#include <string>

namespace ndrl {

// Bad input data: unreadable or malformed files, inconsistent fixtures.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Child network training produced a non-finite or exploding loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ndrl
