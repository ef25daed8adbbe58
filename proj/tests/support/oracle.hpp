#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsa/csa.hpp"
#include "tsa/interp.hpp"
#include "tsa/naive.hpp"

namespace tsa::testing {

// Path naming, at the current stack, an object allocated under the frames in alloc.
struct ConcretePath {
  AllocSite site;
  std::vector<CallSite> escapes;  // earliest exit first
  size_t depth = 0;
};

ConcretePath concrete_path(AllocSite site, const std::vector<Frame>& alloc, const std::vector<Frame>& now);
bool path_covers(const AllocPath& q, const ConcretePath& c);

// Stack relative to the running function, direct caller first.
Stack stack_of(const RunView& view);

bool naive_covers(const RawVal& r, const CValue& v, const RunView& view, const ProgramIndex& idx);
bool cs_covers(const CtxVal& cv, const CValue& v, const RunView& view, const ProgramIndex& idx);

struct SoundnessStats {
  size_t runs = 0;
  size_t finished = 0;
  size_t observations = 0;
  std::vector<std::string> violations;
};

// Runs ir concretely on every input and checks every observed value against both
// analyses at the recorded call stack.
void check_soundness(const IrProgram& ir, const ProgramIndex& idx, const NaiveAnalysis& naive, const CsAnalysis& cs,
                     const std::vector<std::string>& inputs, uint64_t fuel, SoundnessStats& stats);

std::string describe(const CValue& v);

}  // namespace tsa::testing
