#include "smcedp/formula.hpp"

#include <cmath>
#include <utility>

#include "number_format.hpp"
#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::shared_ptr<const FormulaNode> make_node(
    std::variant<AtomNode, NotNode, AndNode, UntilNode> kind) {
  return std::make_shared<const FormulaNode>(FormulaNode{std::move(kind)});
}

}  // namespace

Formula Formula::atom(std::vector<AtomTerm> terms, double constant) {
  for (const auto& term : terms) {
    if (term.channel.empty()) {
      throw DomainError("atom term must name a channel");
    }
    if (!std::isfinite(term.coefficient)) {
      throw DomainError("atom coefficient must be finite");
    }
  }
  if (!std::isfinite(constant)) {
    throw DomainError("atom constant must be finite");
  }
  return Formula(make_node(AtomNode{std::move(terms), constant}));
}

Formula Formula::negation(Formula operand) {
  return Formula(make_node(NotNode{std::move(operand)}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(make_node(AndNode{std::move(left), std::move(right)}));
}

Formula Formula::until(double lower, double upper, Formula left,
                       Formula right) {
  if (!(lower >= 0.0) || std::isnan(upper) || !(lower < upper)) {
    throw DomainError("until interval requires 0 <= lower < upper");
  }
  return Formula(
      make_node(UntilNode{lower, upper, std::move(left), std::move(right)}));
}

Formula Formula::truth() { return atom({}, 0.0); }

Formula Formula::falsity() { return negation(truth()); }

Formula Formula::disjunction(Formula left, Formula right) {
  return negation(
      conjunction(negation(std::move(left)), negation(std::move(right))));
}

Formula Formula::eventually(double lower, double upper, Formula operand) {
  return until(lower, upper, truth(), std::move(operand));
}

Formula Formula::always(double lower, double upper, Formula operand) {
  return negation(
      until(lower, upper, truth(), negation(std::move(operand))));
}

bool operator==(const Formula& a, const Formula& b) {
  if (&a.node() == &b.node()) return true;
  return std::visit(
      Overloaded{
          [](const AtomNode& x, const AtomNode& y) {
            if (x.terms.size() != y.terms.size()) return false;
            for (std::size_t i = 0; i < x.terms.size(); ++i) {
              if (x.terms[i].channel != y.terms[i].channel ||
                  x.terms[i].coefficient != y.terms[i].coefficient) {
                return false;
              }
            }
            return x.constant == y.constant;
          },
          [](const NotNode& x, const NotNode& y) {
            return x.operand == y.operand;
          },
          [](const AndNode& x, const AndNode& y) {
            return x.left == y.left && x.right == y.right;
          },
          [](const UntilNode& x, const UntilNode& y) {
            return x.lower == y.lower && x.upper == y.upper &&
                   x.left == y.left && x.right == y.right;
          },
          [](const auto&, const auto&) { return false; },
      },
      a.node().kind, b.node().kind);
}

namespace {

bool is_truth_atom(const FormulaNode& node) {
  const auto* atom = std::get_if<AtomNode>(&node.kind);
  return atom != nullptr && atom->terms.empty() && atom->constant == 0.0;
}

std::string bound_text(double bound) {
  if (std::isinf(bound)) return "inf";
  return detail::format_double(bound);
}

std::string atom_text(const AtomNode& atom) {
  std::string out = "(";
  bool first = true;
  for (const auto& term : atom.terms) {
    double coeff = term.coefficient;
    if (first) {
      if (coeff < 0.0) {
        out += "-";
        coeff = -coeff;
      }
    } else {
      out += coeff < 0.0 ? " - " : " + ";
      if (coeff < 0.0) coeff = -coeff;
    }
    if (coeff != 1.0) {
      out += detail::format_double(coeff);
      out += "*";
    }
    out += term.channel;
    first = false;
  }
  if (atom.constant != 0.0 || first) {
    double constant = atom.constant;
    if (!first) {
      out += constant < 0.0 ? " - " : " + ";
      if (constant < 0.0) constant = -constant;
    } else if (constant < 0.0) {
      out += "-";
      constant = -constant;
    }
    out += detail::format_double(constant);
  }
  out += " >= 0)";
  return out;
}

std::string node_text(const FormulaNode& node) {
  return std::visit(
      Overloaded{
          [&](const AtomNode& atom) {
            return is_truth_atom(node) ? std::string("true") : atom_text(atom);
          },
          [](const NotNode& n) { return "!" + node_text(n.operand.node()); },
          [](const AndNode& n) {
            return "(" + node_text(n.left.node()) + " & " +
                   node_text(n.right.node()) + ")";
          },
          [](const UntilNode& n) {
            return "(" + node_text(n.left.node()) + " U[" +
                   bound_text(n.lower) + "," + bound_text(n.upper) + "] " +
                   node_text(n.right.node()) + ")";
          },
      },
      node.kind);
}

}  // namespace

std::string Formula::to_text() const { return node_text(node()); }

namespace {

/* Recursive evaluator. `offset` is the grid index playing the role of
 * time 0 for the current subformula; shifting is done by index arithmetic
 * instead of materializing signal suffixes. */
class Evaluator {
 public:
  explicit Evaluator(const Signal& signal) : signal_(signal) {}

  bool eval(const FormulaNode& node, std::size_t offset) const {
    return std::visit(
        Overloaded{
            [&](const AtomNode& atom) { return eval_atom(atom, offset); },
            [&](const NotNode& n) { return !eval(n.operand.node(), offset); },
            [&](const AndNode& n) {
              return eval(n.left.node(), offset) &&
                     eval(n.right.node(), offset);
            },
            [&](const UntilNode& n) { return eval_until(n, offset); },
        },
        node.kind);
  }

 private:
  bool eval_atom(const AtomNode& atom, std::size_t offset) const {
    double value = atom.constant;
    for (const auto& term : atom.terms) {
      value += term.coefficient *
               signal_.value(offset, signal_.channel_index(term.channel));
    }
    return value >= 0.0;
  }

  bool eval_until(const UntilNode& until, std::size_t offset) const {
    /* Steps still available after the current shift. */
    const std::size_t remaining = signal_.sample_count() - 1 - offset;
    /* Compare in continuous time first so absurdly large bounds cannot
     * overflow the index space. */
    const double dt = signal_.sample_period();
    if (until.lower / dt > static_cast<double>(remaining) + 0.5) {
      return false; /* window entirely beyond the horizon */
    }
    const std::size_t window_lo = signal_.snap_to_grid(until.lower);
    if (window_lo > remaining) return false;
    std::size_t window_hi = remaining;
    if (!std::isinf(until.upper) &&
        until.upper / dt < static_cast<double>(remaining)) {
      window_hi = std::min(signal_.snap_to_grid(until.upper), remaining);
    }

    /* Scan candidate witness times left to right, tracking whether the left
     * operand has held at every strictly earlier step. */
    bool left_prefix = true;
    for (std::size_t k = 0; k <= window_hi; ++k) {
      if (k >= window_lo && left_prefix &&
          eval(until.right.node(), offset + k)) {
        return true;
      }
      left_prefix = left_prefix && eval(until.left.node(), offset + k);
      if (!left_prefix && k >= window_lo) return false;
    }
    return false;
  }

  const Signal& signal_;
};

}  // namespace

bool satisfies(const Formula& formula, const Signal& signal) {
  return Evaluator(signal).eval(formula.node(), 0);
}

}  // namespace smcedp
