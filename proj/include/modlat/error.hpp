#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modlat {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when a size cap (element count, enumeration bound) is hit.
class BoundExceeded : public Error {
 public:
  BoundExceeded(const std::string& what, std::size_t reached)
      : Error(what + " (reached " + std::to_string(reached) + ")"), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

// Reads MODLAT_BOUND if set, otherwise returns fallback.
std::size_t size_bound(std::size_t fallback);

}  // namespace modlat
