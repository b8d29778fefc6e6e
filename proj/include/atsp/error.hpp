#pragma once

#include <stdexcept>
#include <string>

namespace atsp {

// Malformed input text (TSPLIB, CSV, solver solution files, tour files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace atsp
