#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vqain {

// Bad configuration: missing template bank, empty mixture, unknown metric.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or missing input file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data encountered while reading records.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry that violates the bbox invariants (negative size, out of frame).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text that does not match the expected grammar; carries the byte offset
// of the first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Syntactically valid value outside its allowed range.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vqain
