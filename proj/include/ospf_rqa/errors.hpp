#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ospf_rqa {

// Input is too short for the requested embedding/window.
class SizingError : public std::invalid_argument {
 public:
  SizingError(const std::string& what, std::size_t required)
      : std::invalid_argument(what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

// Malformed file or record. `location` is a line number or byte offset
// depending on the source format.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t location)
      : std::runtime_error(what), location_(location) {}
  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

class UnsupportedFormat : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Topology or scenario fails validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ospf_rqa
