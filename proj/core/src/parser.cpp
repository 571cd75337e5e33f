#include "smcedp/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <utility>
#include <vector>

#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

enum class TokenKind {
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kNot,
  kAnd,
  kOr,
  kUntil,
  kFinally,
  kGlobally,
  kPlus,
  kMinus,
  kStar,
  kGe,
  kLe,
  kGt,
  kLt,
  kNumber,
  kIdent,
  kTrue,
  kFalse,
  kInf,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      Token token = next();
      const bool done = token.kind == TokenKind::kEnd;
      tokens.push_back(std::move(token));
      if (done) return tokens;
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++column_;
        ++pos_;
      } else {
        return;
      }
    }
  }

  Token next() {
    if (pos_ >= text_.size()) return make(TokenKind::kEnd, "");
    const char c = text_[pos_];
    switch (c) {
      case '(':
        return take(TokenKind::kLParen);
      case ')':
        return take(TokenKind::kRParen);
      case '[':
        return take(TokenKind::kLBracket);
      case ']':
        return take(TokenKind::kRBracket);
      case ',':
        return take(TokenKind::kComma);
      case '!':
        return take(TokenKind::kNot);
      case '&':
        return take(TokenKind::kAnd);
      case '|':
        return take(TokenKind::kOr);
      case '+':
        return take(TokenKind::kPlus);
      case '-':
        return take(TokenKind::kMinus);
      case '*':
        return take(TokenKind::kStar);
      case '>':
        return take_relop(TokenKind::kGt, TokenKind::kGe);
      case '<':
        return take_relop(TokenKind::kLt, TokenKind::kLe);
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return take_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return take_ident();
    }
    throw ParseError(line_, column_,
                     std::string("unexpected character '") + c + "'");
  }

  Token make(TokenKind kind, std::string text) {
    return Token{kind, std::move(text), 0.0, line_, column_};
  }

  Token take(TokenKind kind) {
    Token token = make(kind, std::string(1, text_[pos_]));
    advance(1);
    return token;
  }

  Token take_relop(TokenKind strict, TokenKind with_equal) {
    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      Token token = make(with_equal, std::string(text_.substr(pos_, 2)));
      advance(2);
      return token;
    }
    return take(strict);
  }

  Token take_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() &&
          (text_[probe] == '+' || text_[probe] == '-')) {
        ++probe;
      }
      if (probe < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
    }
    const std::string_view span = text_.substr(start, pos_ - start);
    Token token{TokenKind::kNumber, std::string(span), 0.0, line_, column_};
    const auto result = std::from_chars(span.data(), span.data() + span.size(),
                                        token.number);
    if (result.ec != std::errc() || result.ptr != span.data() + span.size()) {
      throw ParseError(line_, column_, "malformed number '" + token.text + "'");
    }
    column_ += span.size();
    return token;
  }

  Token take_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    std::string word(text_.substr(start, pos_ - start));
    Token token{TokenKind::kIdent, word, 0.0, line_, column_};
    if (word == "U") token.kind = TokenKind::kUntil;
    else if (word == "F") token.kind = TokenKind::kFinally;
    else if (word == "G") token.kind = TokenKind::kGlobally;
    else if (word == "true") token.kind = TokenKind::kTrue;
    else if (word == "false") token.kind = TokenKind::kFalse;
    else if (word == "inf") token.kind = TokenKind::kInf;
    column_ += word.size();
    return token;
  }

  void advance(std::size_t n) {
    pos_ += n;
    column_ += n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

/* An affine expression accumulated while parsing one atom. */
struct Affine {
  std::vector<AtomTerm> terms;
  double constant = 0.0;

  void add_term(std::string channel, double coefficient) {
    /* Merge repeated mentions of a channel so 'x0 + x0 >= 1' behaves. */
    for (auto& term : terms) {
      if (term.channel == channel) {
        term.coefficient += coefficient;
        return;
      }
    }
    terms.push_back(AtomTerm{std::move(channel), coefficient});
  }

  void negate() {
    for (auto& term : terms) term.coefficient = -term.coefficient;
    constant = -constant;
  }
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula run() {
    Formula result = parse_or();
    expect(TokenKind::kEnd, "end of input");
    return result;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }

  Token eat() { return tokens_[index_++]; }

  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    ++index_;
    return true;
  }

  Token expect(TokenKind kind, const std::string& what) {
    if (peek().kind != kind) {
      throw ParseError(peek().line, peek().column,
                       "expected " + what + ", found '" +
                           (peek().kind == TokenKind::kEnd ? "end of input"
                                                           : peek().text) +
                           "'");
    }
    return eat();
  }

  Formula parse_or() {
    Formula left = parse_and();
    while (accept(TokenKind::kOr)) {
      left = Formula::disjunction(std::move(left), parse_and());
    }
    return left;
  }

  Formula parse_and() {
    Formula left = parse_until();
    while (accept(TokenKind::kAnd)) {
      left = Formula::conjunction(std::move(left), parse_until());
    }
    return left;
  }

  Formula parse_until() {
    Formula left = parse_unary();
    if (peek().kind != TokenKind::kUntil) return left;
    const Token op = eat();
    const Interval window = parse_interval(op);
    Formula right = parse_until(); /* right associative */
    return checked(op, [&] {
      return Formula::until(window.lower, window.upper, std::move(left),
                            std::move(right));
    });
  }

  Formula parse_unary() {
    if (accept(TokenKind::kNot)) return Formula::negation(parse_unary());
    if (peek().kind == TokenKind::kFinally) {
      const Token op = eat();
      const Interval window = parse_interval(op);
      Formula operand = parse_unary();
      return checked(op, [&] {
        return Formula::eventually(window.lower, window.upper,
                                   std::move(operand));
      });
    }
    if (peek().kind == TokenKind::kGlobally) {
      const Token op = eat();
      const Interval window = parse_interval(op);
      Formula operand = parse_unary();
      return checked(op, [&] {
        return Formula::always(window.lower, window.upper, std::move(operand));
      });
    }
    return parse_primary();
  }

  Formula parse_primary() {
    /* Affine expressions cannot contain parentheses, so '(' always opens a
     * parenthesized formula; a parenthesized atom is just the special case
     * of a formula that happens to be atomic. */
    if (accept(TokenKind::kLParen)) {
      Formula inner = parse_or();
      expect(TokenKind::kRParen, "')'");
      return inner;
    }
    if (accept(TokenKind::kTrue)) return Formula::truth();
    if (accept(TokenKind::kFalse)) return Formula::falsity();
    return parse_atom();
  }

  Formula parse_atom() {
    const Token anchor = peek();
    Affine expr = parse_affine();
    const Token relop = eat();
    double rhs = 0.0;
    switch (relop.kind) {
      case TokenKind::kGe:
      case TokenKind::kLe:
      case TokenKind::kGt:
      case TokenKind::kLt:
        rhs = parse_signed_number();
        break;
      default:
        throw ParseError(relop.line, relop.column,
                         "expected a comparison operator after '" +
                             anchor.text + "...'");
    }
    /* Normalize to 'affine >= 0'; strict forms negate their non-strict
     * complements. */
    switch (relop.kind) {
      case TokenKind::kGe:
        expr.constant -= rhs;
        return Formula::atom(std::move(expr.terms), expr.constant);
      case TokenKind::kLe:
        expr.negate();
        expr.constant += rhs;
        return Formula::atom(std::move(expr.terms), expr.constant);
      case TokenKind::kGt:
        expr.negate();
        expr.constant += rhs;
        return Formula::negation(
            Formula::atom(std::move(expr.terms), expr.constant));
      case TokenKind::kLt:
      default:
        expr.constant -= rhs;
        return Formula::negation(
            Formula::atom(std::move(expr.terms), expr.constant));
    }
  }

  Affine parse_affine() {
    Affine expr;
    bool negative = accept(TokenKind::kMinus);
    while (true) {
      parse_affine_term(expr, negative);
      if (accept(TokenKind::kPlus)) {
        negative = false;
      } else if (accept(TokenKind::kMinus)) {
        negative = true;
      } else {
        return expr;
      }
    }
  }

  void parse_affine_term(Affine& expr, bool negative) {
    const double sign = negative ? -1.0 : 1.0;
    if (peek().kind == TokenKind::kNumber) {
      const Token number = eat();
      if (accept(TokenKind::kStar)) {
        const Token channel = expect(TokenKind::kIdent, "a channel name");
        expr.add_term(channel.text, sign * number.number);
      } else {
        expr.constant += sign * number.number;
      }
      return;
    }
    const Token channel = expect(TokenKind::kIdent, "a channel or number");
    expr.add_term(channel.text, sign);
  }

  double parse_signed_number() {
    const bool negative = accept(TokenKind::kMinus);
    const Token number = expect(TokenKind::kNumber, "a number");
    return negative ? -number.number : number.number;
  }

  Interval parse_interval(const Token& op) {
    expect(TokenKind::kLBracket, "'[' after '" + op.text + "'");
    Interval window;
    window.lower = parse_bound(false);
    expect(TokenKind::kComma, "','");
    window.upper = parse_bound(true);
    expect(TokenKind::kRBracket, "']'");
    return window;
  }

  double parse_bound(bool allow_inf) {
    if (peek().kind == TokenKind::kInf) {
      const Token token = eat();
      if (!allow_inf) {
        throw BoundError(token.line, token.column,
                         "interval lower bound must be finite");
      }
      return std::numeric_limits<double>::infinity();
    }
    const bool negative = accept(TokenKind::kMinus);
    const Token number = expect(TokenKind::kNumber, "an interval bound");
    return negative ? -number.number : number.number;
  }

  /* Run a formula factory, converting its domain complaints (bad interval)
   * into located BoundErrors. */
  template <typename Build>
  Formula checked(const Token& op, Build&& build) {
    try {
      return build();
    } catch (const DomainError& error) {
      throw BoundError(op.line, op.column, error.what());
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

}  // namespace smcedp
