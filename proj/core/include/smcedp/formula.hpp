#pragma once

#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "smcedp/signal.hpp"

namespace smcedp {

struct FormulaNode;

/* One summand of an atomic proposition's affine expression. */
struct AtomTerm {
  std::string channel;
  double coefficient = 1.0;
};

/* Immutable STL formula over sampled signals.
 *
 * The core grammar is atoms, negation, conjunction and bounded Until; the
 * remaining connectives (disjunction, Eventually, Always, the constants) are
 * provided as rewrites into that core, so the evaluator and every algorithm
 * downstream only ever see four node kinds. Formulas share subterms through
 * shared_ptr and are cheap to copy. */
class Formula {
 public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  /* Atomic proposition: sum(coefficient * channel) + constant >= 0. */
  static Formula atom(std::vector<AtomTerm> terms, double constant);

  static Formula negation(Formula operand);
  static Formula conjunction(Formula left, Formula right);

  /* left U[lower, upper] right; requires 0 <= lower < upper. upper may be
   * kUnbounded, in which case the window runs to the signal horizon. */
  static Formula until(double lower, double upper, Formula left, Formula right);

  /* Rewrites into the core fragment. */
  static Formula truth();                                   /* 0 >= 0        */
  static Formula falsity();                                 /* !(0 >= 0)     */
  static Formula disjunction(Formula left, Formula right);  /* !(!l & !r)    */
  static Formula eventually(double lower, double upper, Formula operand);
  static Formula always(double lower, double upper, Formula operand);

  const FormulaNode& node() const { return *node_; }

  /* Canonical text form; parses back to a structurally equal formula. */
  std::string to_text() const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const FormulaNode> node_;
};

struct AtomNode {
  std::vector<AtomTerm> terms;
  double constant = 0.0;
};

struct NotNode {
  Formula operand;
};

struct AndNode {
  Formula left;
  Formula right;
};

struct UntilNode {
  double lower = 0.0;
  double upper = 0.0;
  Formula left;
  Formula right;
};

struct FormulaNode {
  std::variant<AtomNode, NotNode, AndNode, UntilNode> kind;
};

/* Structural equality (exact coefficient/bound comparison). */
bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

/* Boolean satisfaction of the formula by the signal at time 0.
 *
 * Until windows are intersected with the remaining horizon; an empty window
 * makes Until (and hence Eventually) false and Always vacuously true.
 * Atoms referencing channels the signal lacks raise DomainError. */
bool satisfies(const Formula& formula, const Signal& signal);

}  // namespace smcedp
