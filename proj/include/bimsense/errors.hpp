#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bimsense {

/// Invalid tunables, mismatched grid metadata or a malformed scenario.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query outside the domain of the grid (e.g. a point off the map).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed map or config file. Carries the byte offset where parsing
/// stopped when it is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit ParseError(const std::string& what)
      : std::runtime_error(what), offset_(0) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace bimsense
