#pragma once

#include "snel/ast.hpp"
#include "snel/error.hpp"

namespace snel {

// Enforces the static type discipline: arithmetic over Number, logical
// operators over Boolean, comparisons over Number, ==/!= over matching
// Number or Boolean operands, function arities. Annotates every Expr node
// with Number or Boolean in place (idempotent). Prompt ==/!= is rejected:
// no combination semantics is defined for it.
//
// Throws TypeError naming the operator, the expected operand types and the
// source span.
void typecheck(Query& q);

// Returns the annotated type of a top-level expression query; Select/Get
// queries have no expression type.
ExprType root_type(const Query& q);

}  // namespace snel
