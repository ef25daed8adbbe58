#pragma once

#include <stdexcept>
#include <string>

#include "tsa/syntax.hpp"

namespace tsa {

struct ParseError : std::runtime_error {
  Span span;
  std::string expected;
  ParseError(const std::string& msg, Span s, std::string exp)
      : std::runtime_error(msg), span(s), expected(std::move(exp)) {}
};

SurfaceProgram parse_program(const std::string& source);

// Reassigns labels in pre-order starting at 0; returns the next free label.
int renumber(Stmt& s, int next = 0);

}  // namespace tsa
