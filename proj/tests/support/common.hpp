#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tsa/closure_conv.hpp"
#include "tsa/parser.hpp"
#include "tsa/syntax.hpp"

namespace tsa::testing {

struct Compiled {
  SurfaceProgram surface;
  IrProgram ir;
  ProgramIndex idx;
};

// Parse, convert, index. The index points into ir, so the result stays on the heap.
std::unique_ptr<Compiled> compile(const std::string& source, bool extract_loops = false);

std::string read_file(const std::string& path);
std::string program_path(const std::string& name);  // tests/programs/<name>
std::string load_program(const std::string& name);

// Labels of expressions whose source text is exactly text, optionally inside function fn.
std::vector<LabelId> labels_at(const Compiled& c, const std::string& text, const std::string& fn = {});
// Call-site labels whose source text is exactly text.
LabelId call_at(const Compiled& c, const std::string& text);

}  // namespace tsa::testing
