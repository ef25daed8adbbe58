#pragma once

#include <set>
#include <string>

#include "tsa/syntax.hpp"

namespace tsa {

using BoundVarSet = std::set<std::string>;

// var-declared names (plus for-in variables and function declaration names) of s,
// not looking inside nested function bodies.
BoundVarSet bound_vars(const Stmt& s);

// R_S / R_E: rewrite uses of names in bv into closure.<name>. Returns fresh trees;
// new nodes draw labels from lg and inherit the span of the node they replace.
StmtPtr rewrite_stmt(const StmtPtr& s, const BoundVarSet& bv, LabelGen& lg);
ExprPtr rewrite_expr(const ExprPtr& e, const BoundVarSet& bv, LabelGen& lg);

// Throws MalformedProgram for programs that bind the reserved name `closure` or
// shadow a top-level function declaration.
IrProgram closure_convert(const SurfaceProgram& p);

// Moves every loop body into an immediately called lambda so that allocations in the
// body happen in a fresh frame per iteration. Variables declared in the body are
// redeclared before the loop so they stay in the enclosing scope.
SurfaceProgram extract_loops(const SurfaceProgram& p);

}  // namespace tsa
