#pragma once

#include <string_view>

#include "smcedp/formula.hpp"

namespace smcedp {

/* Parse the textual formula grammar into a core-fragment Formula.
 *
 * Grammar (precedence loosest to tightest: | , & , U , unary):
 *
 *   formula  := or
 *   or       := and ('|' and)*
 *   and      := until ('&' until)*
 *   until    := unary ['U' interval until]            (right associative)
 *   unary    := '!' unary | 'F' interval unary | 'G' interval unary | primary
 *   primary  := '(' formula ')' | 'true' | 'false' | atom
 *   atom     := expr ('>=' | '<=' | '>' | '<') const
 *   expr     := ['-'] term (('+' | '-') term)*        affine in the channels
 *   term     := number ['*' channel] | channel
 *   interval := '[' number ',' (number | 'inf') ']'
 *
 * Channels are identifiers (x0, x1, ..., e); U, F, G, true, false and inf
 * are reserved. Inequalities other than '>=' are desugared: 'expr <= c'
 * becomes '-expr + c >= 0' and the strict forms negate their non-strict
 * complements, so the result only ever contains '>=' atoms.
 *
 * Throws ParseError (with 1-based line/column) on malformed input and
 * BoundError when an interval has lower >= upper or a negative endpoint. */
Formula parse_formula(std::string_view text);

}  // namespace smcedp
