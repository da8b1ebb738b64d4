#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadsect {

// Base for every hard failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Polygon that cannot be normalized into a valid geometry.
class TopologyError : public Error {
public:
  using Error::Error;
};

// Bad caller input: malformed files, violated preconditions, unknown ids.
class InputError : public Error {
public:
  using Error::Error;
};

// A junction edge that never leaves its buffer circle.
class SeedingError : public Error {
public:
  using Error::Error;
};

// Non-fatal finding attached to a run (unseeded edge, crossing, odd area...).
struct Warning {
  std::string kind;
  std::vector<std::int64_t> edges;
  std::string message;

  friend bool operator==(const Warning&, const Warning&) = default;
};

} // namespace roadsect
