#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbopt {

// Error in a textual input format, carrying the 1-based source line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sbopt
