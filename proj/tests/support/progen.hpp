#pragma once

#include <cstdint>
#include <string>

namespace tsa::testing {

struct GenConfig {
  int functions = 3;   // top-level declarations
  int main_stmts = 7;
  int body_stmts = 4;
  int expr_depth = 3;
  int loop_trips = 3;  // counted loops run at most this many times
  bool recursion = true;
};

// Random surface program in concrete syntax. Variables keep one value shape
// (int, string, object, array, int closure) so most runs finish; division,
// reads of `input` and bounded recursion still leave room for runtime errors.
std::string random_program(uint64_t seed, const GenConfig& cfg = {});

}  // namespace tsa::testing
