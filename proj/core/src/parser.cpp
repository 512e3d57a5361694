#include <cctype>
#include <optional>

#include "metrika/condition.hpp"
#include "metrika/error.hpp"

namespace metrika {

namespace {

enum class Tok {
  Ident,
  Integer,
  Slash,
  Star,
  LParen,
  RParen,
  Comma,
  Dot,
  DotMinus,
  TruncPlus,
  LessEq,
  Less,
  Equal,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Integer: return "integer";
    case Tok::Slash: return "'/'";
    case Tok::Star: return "'*'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::DotMinus: return "'-.'";
    case Tok::TruncPlus: return "'+.'";
    case Tok::LessEq: return "'<='";
    case Tok::Less: return "'<'";
    case Tok::Equal: return "'='";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, "", start};
    const char c = text_[pos_];
    auto single = [&](Tok t) {
      ++pos_;
      return Token{t, std::string(1, c), start};
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '\''))
        ++pos_;
      return {Tok::Ident, std::string(text_.substr(start, pos_ - start)), start};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return {Tok::Integer, std::string(text_.substr(start, pos_ - start)), start};
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') {
      pos_ += 2;
      return {Tok::DotMinus, "-.", start};
    }
    if (c == '+' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') {
      pos_ += 2;
      return {Tok::TruncPlus, "+.", start};
    }
    if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      pos_ += 2;
      return {Tok::LessEq, "<=", start};
    }
    switch (c) {
      case '/': return single(Tok::Slash);
      case '*': return single(Tok::Star);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      case '<': return single(Tok::Less);
      case '=': return single(Tok::Equal);
      default: break;
    }
    throw ParseError(ErrorCode::SyntaxError, start, "unexpected character '" + std::string(1, c) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lexer_(text), sig_(sig) { advance(); }

  Formula formula() {
    if (peek_keyword("inf") || peek_keyword("sup")) {
      const bool is_sup = cur_.text == "sup";
      advance();
      const std::string var = expect(Tok::Ident, "bound variable").text;
      expect(Tok::Dot, "'.' after bound variable");
      Formula body = formula();
      return is_sup ? Formula::sup(var, std::move(body)) : Formula::inf(var, std::move(body));
    }
    return body();
  }

  Rational rational() {
    const Token num = expect(Tok::Integer, "rational literal");
    if (cur_.kind != Tok::Slash) return Rational::parse(num.text);
    advance();
    const Token den = expect(Tok::Integer, "positive denominator");
    if (den.text.front() == '-' || Rational::parse(den.text).is_zero())
      throw ParseError(ErrorCode::SyntaxError, den.pos, "expected positive denominator");
    return Rational::parse(num.text + "/" + den.text);
  }

  void expect_end() {
    if (cur_.kind != Tok::End)
      throw ParseError(ErrorCode::SyntaxError, cur_.pos, "expected end of input but found '" + cur_.text + "'");
  }

  const Token& current() const { return cur_; }
  void advance() { cur_ = lexer_.next(); }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind)
      throw ParseError(ErrorCode::SyntaxError, cur_.pos,
                       "expected " + what + " (" + describe(kind) + ") but found " +
                           (cur_.kind == Tok::End ? describe(Tok::End) : "'" + cur_.text + "'"));
    Token t = cur_;
    advance();
    return t;
  }

 private:
  bool peek_keyword(std::string_view word) const { return cur_.kind == Tok::Ident && cur_.text == word; }

  Formula body() {
    Formula acc = term();
    while (cur_.kind == Tok::DotMinus || cur_.kind == Tok::TruncPlus) {
      const bool minus = cur_.kind == Tok::DotMinus;
      advance();
      Formula rhs = term();
      acc = minus ? Formula::dot_minus(std::move(acc), std::move(rhs))
                  : Formula::trunc_plus(std::move(acc), std::move(rhs));
    }
    return acc;
  }

  Formula term() {
    if (cur_.kind == Tok::Integer) {
      const std::size_t pos = cur_.pos;
      const Rational q = rational();
      if (!in_unit_interval(q))
        throw ParseError(ErrorCode::ConstantOutOfRange, pos, "constant " + q.to_string() + " is outside [0,1]");
      if (cur_.kind == Tok::Star) {
        advance();
        return Formula::scale(q, atomic());
      }
      return Formula::constant(q);
    }
    return atomic();
  }

  Formula atomic() {
    if (cur_.kind == Tok::LParen) {
      advance();
      Formula f = formula();
      expect(Tok::RParen, "closing parenthesis");
      return f;
    }
    if (cur_.kind != Tok::Ident)
      throw ParseError(ErrorCode::SyntaxError, cur_.pos,
                       "expected formula but found " +
                           (cur_.kind == Tok::End ? describe(Tok::End) : "'" + cur_.text + "'"));
    const Token head = cur_;
    if (head.text == "inf" || head.text == "sup")
      throw ParseError(ErrorCode::SyntaxError, head.pos, "quantifier in operand position must be parenthesized");
    advance();
    if (head.text == "min" || head.text == "max" || head.text == "absdiff") {
      expect(Tok::LParen, "'(' after " + head.text);
      Formula a = formula();
      expect(Tok::Comma, "',' between operands");
      Formula b = formula();
      expect(Tok::RParen, "closing parenthesis");
      if (head.text == "min") return Formula::min(std::move(a), std::move(b));
      if (head.text == "max") return Formula::max(std::move(a), std::move(b));
      return Formula::abs_diff(std::move(a), std::move(b));
    }
    if (head.text == "not") {
      expect(Tok::LParen, "'(' after not");
      Formula a = formula();
      expect(Tok::RParen, "closing parenthesis");
      return Formula::neg(std::move(a));
    }
    const auto relation = sig_.find(head.text);
    if (!relation)
      throw ParseError(ErrorCode::UnknownRelation, head.pos, "relation '" + head.text + "' is not in the signature");
    expect(Tok::LParen, "'(' after relation name");
    std::vector<std::string> args;
    args.push_back(expect(Tok::Ident, "variable").text);
    while (cur_.kind == Tok::Comma) {
      advance();
      args.push_back(expect(Tok::Ident, "variable").text);
    }
    expect(Tok::RParen, "closing parenthesis");
    const std::size_t arity = sig_.relation(*relation).arity;
    if (args.size() != arity)
      throw ParseError(ErrorCode::ArityMismatch, head.pos,
                       "relation '" + head.text + "' expects " + std::to_string(arity) + " arguments, got " +
                           std::to_string(args.size()));
    for (const auto& a : args)
      if (is_reserved_word(a)) throw ParseError(ErrorCode::SyntaxError, head.pos, "reserved word used as variable");
    return Formula::atom(sig_, *relation, std::move(args));
  }

  Lexer lexer_;
  const Signature& sig_;
  Token cur_{Tok::End, "", 0};
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Condition parse_condition(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  Comparison rel;
  switch (p.current().kind) {
    case Tok::LessEq: rel = Comparison::LessEqual; break;
    case Tok::Less: rel = Comparison::Less; break;
    case Tok::Equal: rel = Comparison::Equal; break;
    default:
      throw ParseError(ErrorCode::SyntaxError, p.current().pos,
                       "expected '<=', '<' or '=' but found " +
                           (p.current().kind == Tok::End ? std::string("end of input") : "'" + p.current().text + "'"));
  }
  p.advance();
  const std::size_t bound_pos = p.current().pos;
  const Rational bound = p.rational();
  p.expect_end();
  if (!in_unit_interval(bound))
    throw ParseError(ErrorCode::ConstantOutOfRange, bound_pos, "bound " + bound.to_string() + " is outside [0,1]");
  const auto free = free_variables(f);
  if (!free.empty()) {
    std::string names;
    for (const auto& v : free) names += (names.empty() ? "" : ",") + v;
    throw ParseError(ErrorCode::FreeVariableInCondition, 0, "condition formula has free variables {" + names + "}");
  }
  return Condition(std::move(f), rel, bound);
}

}  // namespace metrika
