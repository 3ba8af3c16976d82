#pragma once

#include <stdexcept>
#include <string>

namespace patg {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by attention when the persona memory has no rows; the decoder
// catches this condition up front and falls back to pure generation.
class EmptyMemoryError : public Error {
 public:
  EmptyMemoryError() : Error("persona memory is empty") {}
};

}  // namespace patg
