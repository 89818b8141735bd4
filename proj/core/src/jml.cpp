// Copyright 2026 The jmldoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jmldoc/jml.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace jmldoc {

std::vector<const SpecExpr*> SpecExpr::arguments() const {
  std::vector<const SpecExpr*> args;
  std::size_t first = (kind == ExprKind::kMethodCall && has_receiver) ? 1 : 0;
  for (std::size_t i = first; i < children.size(); ++i) {
    args.push_back(&children[i]);
  }
  return args;
}

bool structurally_equal(const SpecExpr& a, const SpecExpr& b) {
  if (a.kind != b.kind || a.symbol != b.symbol ||
      a.has_receiver != b.has_receiver ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

bool contains_pre_state_ref(const SpecExpr& expr, std::string* which) {
  if (expr.kind == ExprKind::kOldWrap) {
    if (which) *which = "\\old";
    return true;
  }
  if (expr.kind == ExprKind::kResultRef) {
    if (which) *which = "\\result";
    return true;
  }
  for (const SpecExpr& child : expr.children) {
    if (contains_pre_state_ref(child, which)) return true;
  }
  return false;
}

std::string_view clause_keyword(ClauseKind kind) {
  switch (kind) {
    case ClauseKind::kRequires:
      return "requires";
    case ClauseKind::kEnsures:
      return "ensures";
    case ClauseKind::kClassInvariant:
      return "invariant";
  }
  return "";
}

bool structurally_equal(const SpecClause& a, const SpecClause& b) {
  return a.kind == b.kind && structurally_equal(a.expr, b.expr);
}

bool structurally_equal(const SpecBlock& a, const SpecBlock& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (!structurally_equal(a.clauses[i], b.clauses[i])) return false;
  }
  return true;
}

std::size_t count_clauses(const SpecBlock& block) { return block.clauses.size(); }

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Logical clause text with a map back to byte offsets in the original
// comment, so errors can point into what the caller actually has.
struct LogicalText {
  std::string text;
  std::vector<std::size_t> offsets;

  void push(char c, std::size_t offset) {
    text.push_back(c);
    offsets.push_back(offset);
  }
};

// Strips the comment framing: "/*@ ... @*/" or a run of "//@" lines; interior
// lines may carry one leading '@' after whitespace.
LogicalText unwrap_comment(std::string_view raw) {
  std::size_t begin = 0;
  while (begin < raw.size() &&
         (raw[begin] == ' ' || raw[begin] == '\t' || raw[begin] == '\n' ||
          raw[begin] == '\r')) {
    ++begin;
  }
  LogicalText logical;

  auto push_line = [&](std::size_t start, std::size_t end, bool strip_at) {
    std::size_t i = start;
    while (i < end && (raw[i] == ' ' || raw[i] == '\t')) ++i;
    if (strip_at && i < end && raw[i] == '@') ++i;
    for (; i < end; ++i) logical.push(raw[i], i);
    logical.push('\n', end);
  };

  if (raw.substr(begin, 2) == "/*") {
    std::size_t close = raw.rfind("*/");
    if (close == std::string_view::npos || close < begin + 2) {
      throw ParseError("unterminated annotation comment",
                       SourcePos{1, begin + 1});
    }
    // The closer may be written "@*/"; that '@' is framing, not content.
    while (close > begin + 2 &&
           (raw[close - 1] == ' ' || raw[close - 1] == '\t')) {
      --close;
    }
    if (close > begin + 2 && raw[close - 1] == '@') --close;
    std::size_t i = begin + 2;
    std::size_t line_start = i;
    bool first = true;
    while (i <= close) {
      if (i == close || raw[i] == '\n') {
        if (first) {
          // The opener line: drop the '@' that follows "/*".
          std::size_t j = line_start;
          while (j < i && (raw[j] == ' ' || raw[j] == '\t')) ++j;
          if (j < i && raw[j] == '@') ++j;
          for (; j < i; ++j) logical.push(raw[j], j);
          logical.push('\n', i);
          first = false;
        } else {
          push_line(line_start, i, /*strip_at=*/true);
        }
        line_start = i + 1;
        if (i == close) break;
      }
      ++i;
    }
    return logical;
  }

  if (raw.substr(begin, 3) == "//@") {
    std::size_t i = begin;
    while (i < raw.size()) {
      std::size_t eol = raw.find('\n', i);
      if (eol == std::string_view::npos) eol = raw.size();
      std::size_t j = i;
      while (j < eol && (raw[j] == ' ' || raw[j] == '\t')) ++j;
      if (j < eol) {
        if (raw.substr(j, 3) != "//@") {
          throw ParseError("expected a \"//@\" line",
                           SourcePos{1, 1});
        }
        push_line(j + 3, eol, /*strip_at=*/false);
      }
      i = eol + 1;
    }
    return logical;
  }

  throw ParseError("not an annotation comment (expected \"/*@\" or \"//@\")");
}

enum class JmlTokKind {
  kWord,
  kBackslashWord,
  kNumber,
  kString,
  kChar,
  kOp,
  kEnd,
};

struct JmlToken {
  JmlTokKind kind = JmlTokKind::kEnd;
  std::string text;
  std::size_t offset = 0;  // into the original comment text
};

class JmlLexer {
 public:
  JmlLexer(const LogicalText& logical, std::string_view raw)
      : logical_(logical), raw_(raw) {
    scan();
  }

  const JmlToken& peek() const { return tokens_[index_]; }
  const JmlToken& next() {
    const JmlToken& t = tokens_[index_];
    if (index_ + 1 < tokens_.size()) ++index_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    throw ParseError(msg, pos_of(offset));
  }
  [[noreturn]] void fail_unsupported(const std::string& construct,
                                     std::size_t offset) const {
    throw UnsupportedConstructError(construct, pos_of(offset));
  }

  SourcePos pos_of(std::size_t offset) const {
    SourcePos pos;
    for (std::size_t i = 0; i < offset && i < raw_.size(); ++i) {
      if (raw_[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
    return pos;
  }

 private:
  void scan() {
    const std::string& s = logical_.text;
    std::size_t i = 0;
    auto orig = [&](std::size_t k) {
      return k < logical_.offsets.size() ? logical_.offsets[k]
                                         : (raw_.empty() ? 0 : raw_.size() - 1);
    };
    while (i < s.size()) {
      char c = s[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        continue;
      }
      JmlToken tok;
      tok.offset = orig(i);
      if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < s.size() && is_ident_char(s[j])) ++j;
        tok.kind = JmlTokKind::kWord;
        tok.text = s.substr(i, j - i);
        i = j;
      } else if (c == '\\') {
        std::size_t j = i + 1;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) {
          ++j;
        }
        if (j == i + 1) {
          throw ParseError("stray '\\'", pos_of(tok.offset));
        }
        tok.kind = JmlTokKind::kBackslashWord;
        tok.text = s.substr(i + 1, j - i - 1);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size()) {
          char d = s[j];
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
            ++j;
          } else if (d == '.' && j + 1 < s.size() &&
                     std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
            ++j;
          } else if ((d == '+' || d == '-') && j > i &&
                     (s[j - 1] == 'e' || s[j - 1] == 'E') && j + 1 < s.size() &&
                     std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
            ++j;
          } else {
            break;
          }
        }
        tok.kind = JmlTokKind::kNumber;
        tok.text = s.substr(i, j - i);
        i = j;
      } else if (c == '"' || c == '\'') {
        std::size_t j = i + 1;
        bool closed = false;
        while (j < s.size() && s[j] != '\n') {
          if (s[j] == '\\') {
            j += 2;
            continue;
          }
          if (s[j] == c) {
            closed = true;
            ++j;
            break;
          }
          ++j;
        }
        if (!closed) {
          throw ParseError(c == '"' ? "unterminated string literal"
                                    : "unterminated char literal",
                           pos_of(tok.offset));
        }
        tok.kind = c == '"' ? JmlTokKind::kString : JmlTokKind::kChar;
        tok.text = s.substr(i, j - i);
        i = j;
      } else {
        static const char* kTwoCharOps[] = {"==", "!=", "<=", ">=", "&&", "||"};
        std::string two = s.substr(i, 2);
        bool matched = false;
        for (const char* op : kTwoCharOps) {
          if (two == op) {
            tok.kind = JmlTokKind::kOp;
            tok.text = two;
            i += 2;
            matched = true;
            break;
          }
        }
        if (!matched) {
          static const std::string kSingles = "=<>+-*/%!(),.;";
          if (kSingles.find(c) == std::string::npos) {
            throw ParseError(std::string("unexpected character '") + c + "'",
                             pos_of(tok.offset));
          }
          tok.kind = JmlTokKind::kOp;
          tok.text = std::string(1, c);
          i += 1;
        }
      }
      tokens_.push_back(std::move(tok));
    }
    JmlToken end;
    end.kind = JmlTokKind::kEnd;
    end.offset = raw_.empty() ? 0 : raw_.size() - 1;
    tokens_.push_back(end);
  }

  const LogicalText& logical_;
  std::string_view raw_;
  std::vector<JmlToken> tokens_;
  std::size_t index_ = 0;
};

// JML clause keywords and backslash constructs that exist in the reference
// language but lie outside this subset.
const std::unordered_set<std::string>& unsupported_clause_keywords() {
  static const std::unordered_set<std::string> kSet = {
      "assignable",  "accessible",   "signals",        "signals_only",
      "diverges",    "measured_by",  "assert",         "assume",
      "ghost",       "model",        "set",            "pure",
      "helper",      "nullable",     "non_null",       "also",
      "behavior",    "behaviour",    "normal_behavior", "exceptional_behavior",
      "public",      "private",      "protected",      "spec_public",
      "spec_protected", "loop_invariant", "decreases",  "maintaining",
      "constraint",  "initially",    "axiom",          "represents",
      "modifies",    "callable",     "captures",       "when"};
  return kSet;
}

class ClauseParser {
 public:
  explicit ClauseParser(JmlLexer& lexer) : lex_(lexer) {}

  SpecExpr parse_expression() { return parse_or(); }

  const JmlToken& peek() const { return lex_.peek(); }
  const JmlToken& next() { return lex_.next(); }
  JmlLexer& lexer() { return lex_; }

 private:
  bool at_op(std::string_view text) const {
    return lex_.peek().kind == JmlTokKind::kOp && lex_.peek().text == text;
  }

  SpecExpr make_binary(std::string op, SpecExpr lhs, SpecExpr rhs) {
    SpecExpr e;
    e.kind = ExprKind::kBinaryOp;
    e.symbol = std::move(op);
    e.span = {lhs.span.start, rhs.span.end};
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
  }

  SpecExpr parse_or() {
    SpecExpr lhs = parse_and();
    while (at_op("||")) {
      lex_.next();
      lhs = make_binary("||", std::move(lhs), parse_and());
    }
    return lhs;
  }

  SpecExpr parse_and() {
    SpecExpr lhs = parse_equality();
    while (at_op("&&")) {
      lex_.next();
      lhs = make_binary("&&", std::move(lhs), parse_equality());
    }
    return lhs;
  }

  SpecExpr parse_equality() {
    SpecExpr lhs = parse_relational();
    while (at_op("==") || at_op("!=")) {
      std::string op = lex_.next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_relational());
    }
    return lhs;
  }

  SpecExpr parse_relational() {
    SpecExpr lhs = parse_additive();
    while (at_op("<") || at_op("<=") || at_op(">") || at_op(">=")) {
      std::string op = lex_.next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_additive());
    }
    return lhs;
  }

  SpecExpr parse_additive() {
    SpecExpr lhs = parse_multiplicative();
    while (at_op("+") || at_op("-")) {
      std::string op = lex_.next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  SpecExpr parse_multiplicative() {
    SpecExpr lhs = parse_unary();
    while (at_op("*") || at_op("/") || at_op("%")) {
      std::string op = lex_.next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_unary());
    }
    return lhs;
  }

  SpecExpr parse_unary() {
    if (at_op("!") || at_op("-")) {
      JmlToken op = lex_.next();
      SpecExpr operand = parse_unary();
      SpecExpr e;
      e.kind = ExprKind::kUnaryOp;
      e.symbol = op.text;
      e.span = {op.offset, operand.span.end};
      e.children.push_back(std::move(operand));
      return e;
    }
    return parse_postfix();
  }

  SpecExpr parse_postfix() {
    SpecExpr expr = parse_primary();
    while (at_op(".")) {
      lex_.next();
      const JmlToken& name = lex_.peek();
      if (name.kind != JmlTokKind::kWord) {
        lex_.fail("expected member name after '.'", name.offset);
      }
      lex_.next();
      if (at_op("(")) {
        lex_.next();
        SpecExpr call;
        call.kind = ExprKind::kMethodCall;
        call.symbol = name.text;
        call.has_receiver = true;
        call.span.start = expr.span.start;
        call.children.push_back(std::move(expr));
        parse_arguments(call);
        expr = std::move(call);
      } else {
        SpecExpr access;
        access.kind = ExprKind::kFieldAccess;
        access.symbol = name.text;
        access.span = {expr.span.start, name.offset + name.text.size()};
        access.children.push_back(std::move(expr));
        expr = std::move(access);
      }
    }
    return expr;
  }

  void parse_arguments(SpecExpr& call) {
    if (at_op(")")) {
      call.span.end = lex_.next().offset + 1;
      return;
    }
    while (true) {
      call.children.push_back(parse_expression());
      if (at_op(",")) {
        lex_.next();
        continue;
      }
      if (at_op(")")) {
        call.span.end = lex_.next().offset + 1;
        return;
      }
      lex_.fail("expected ',' or ')' in argument list", lex_.peek().offset);
    }
  }

  SpecExpr parse_primary() {
    const JmlToken& tok = lex_.peek();
    switch (tok.kind) {
      case JmlTokKind::kNumber:
      case JmlTokKind::kString:
      case JmlTokKind::kChar: {
        JmlToken t = lex_.next();
        SpecExpr e;
        e.kind = ExprKind::kLiteral;
        e.symbol = t.text;
        e.span = {t.offset, t.offset + t.text.size()};
        return e;
      }
      case JmlTokKind::kWord: {
        JmlToken t = lex_.next();
        SpecExpr e;
        e.span = {t.offset, t.offset + t.text.size()};
        if (t.text == "null" || t.text == "true" || t.text == "false") {
          e.kind = ExprKind::kLiteral;
          e.symbol = t.text;
          return e;
        }
        if (at_op("(")) {
          lex_.next();
          e.kind = ExprKind::kMethodCall;
          e.symbol = t.text;
          e.has_receiver = false;
          parse_arguments(e);
          return e;
        }
        e.kind = ExprKind::kIdentifier;
        e.symbol = t.text;
        return e;
      }
      case JmlTokKind::kBackslashWord: {
        JmlToken t = lex_.next();
        if (t.text == "result") {
          SpecExpr e;
          e.kind = ExprKind::kResultRef;
          e.span = {t.offset, t.offset + t.text.size() + 1};
          return e;
        }
        if (t.text == "old") {
          if (!at_op("(")) {
            lex_.fail("expected '(' after \\old", lex_.peek().offset);
          }
          lex_.next();
          SpecExpr inner = parse_expression();
          if (!at_op(")")) {
            lex_.fail("expected ')' closing \\old", lex_.peek().offset);
          }
          std::size_t end = lex_.next().offset + 1;
          SpecExpr e;
          e.kind = ExprKind::kOldWrap;
          e.span = {t.offset, end};
          e.children.push_back(std::move(inner));
          return e;
        }
        lex_.fail_unsupported("\\" + t.text, t.offset);
      }
      case JmlTokKind::kOp:
        if (tok.text == "(") {
          lex_.next();
          SpecExpr inner = parse_expression();
          if (!at_op(")")) {
            lex_.fail("expected ')'", lex_.peek().offset);
          }
          lex_.next();
          return inner;
        }
        lex_.fail("malformed expression: unexpected '" + tok.text + "'",
                  tok.offset);
      case JmlTokKind::kEnd:
        lex_.fail("malformed expression: unexpected end of clause", tok.offset);
    }
    lex_.fail("malformed expression", tok.offset);
  }

  JmlLexer& lex_;
};

void validate_clause(const SpecClause& clause, const JmlLexer& lexer) {
  if (clause.kind == ClauseKind::kEnsures) return;
  std::string which;
  if (contains_pre_state_ref(clause.expr, &which)) {
    throw ParseError(which + " not allowed in " +
                         std::string(clause_keyword(clause.kind)) + " clause",
                     lexer.pos_of(clause.span.start));
  }
}

SpecBlock parse_block_tokens(JmlLexer& lexer) {
  SpecBlock block;
  ClauseParser parser(lexer);
  while (parser.peek().kind != JmlTokKind::kEnd) {
    const JmlToken& kw = parser.peek();
    if (kw.kind != JmlTokKind::kWord) {
      lexer.fail("expected clause keyword, got '" + kw.text + "'", kw.offset);
    }
    SpecClause clause;
    if (kw.text == "requires") {
      clause.kind = ClauseKind::kRequires;
    } else if (kw.text == "ensures") {
      clause.kind = ClauseKind::kEnsures;
    } else if (kw.text == "invariant") {
      clause.kind = ClauseKind::kClassInvariant;
    } else if (unsupported_clause_keywords().count(kw.text)) {
      lexer.fail_unsupported(kw.text, kw.offset);
    } else {
      lexer.fail("unknown clause keyword: " + kw.text, kw.offset);
    }
    std::size_t start = kw.offset;
    parser.next();
    clause.expr = parser.parse_expression();
    const JmlToken& term = parser.peek();
    if (term.kind != JmlTokKind::kOp || term.text != ";") {
      lexer.fail("unterminated clause (missing ';')", term.offset);
    }
    parser.next();
    clause.span = {start, term.offset + 1};
    validate_clause(clause, lexer);
    block.clauses.push_back(std::move(clause));
  }
  if (block.clauses.empty()) {
    throw ParseError("empty specification block");
  }
  return block;
}

}  // namespace

SpecBlock parse_spec_block(std::string_view comment_text) {
  LogicalText logical = unwrap_comment(comment_text);
  JmlLexer lexer(logical, comment_text);
  return parse_block_tokens(lexer);
}

SpecClause parse_clause(std::string_view clause_text) {
  LogicalText logical;
  for (std::size_t i = 0; i < clause_text.size(); ++i) {
    logical.push(clause_text[i], i);
  }
  JmlLexer lexer(logical, clause_text);
  SpecBlock block = parse_block_tokens(lexer);
  if (block.clauses.size() != 1) {
    throw ParseError("expected exactly one clause");
  }
  return std::move(block.clauses[0]);
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Higher binds tighter. kPostfix is used for receivers of '.' chains.
constexpr int kPostfixPrec = 8;
constexpr int kUnaryPrec = 7;

int binary_prec(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  return 6;  // * / %
}

void print_expr_prec(const SpecExpr& expr, int min_prec, std::string& out) {
  switch (expr.kind) {
    case ExprKind::kLiteral:
    case ExprKind::kIdentifier:
      out += expr.symbol;
      return;
    case ExprKind::kResultRef:
      out += "\\result";
      return;
    case ExprKind::kOldWrap:
      out += "\\old(";
      print_expr_prec(expr.children[0], 0, out);
      out += ")";
      return;
    case ExprKind::kFieldAccess:
      print_expr_prec(expr.children[0], kPostfixPrec, out);
      out += ".";
      out += expr.symbol;
      return;
    case ExprKind::kMethodCall: {
      std::size_t arg_start = 0;
      if (expr.has_receiver) {
        print_expr_prec(expr.children[0], kPostfixPrec, out);
        out += ".";
        arg_start = 1;
      }
      out += expr.symbol;
      out += "(";
      for (std::size_t i = arg_start; i < expr.children.size(); ++i) {
        if (i > arg_start) out += ", ";
        print_expr_prec(expr.children[i], 0, out);
      }
      out += ")";
      return;
    }
    case ExprKind::kUnaryOp: {
      bool parens = kUnaryPrec < min_prec;
      if (parens) out += "(";
      out += expr.symbol;
      print_expr_prec(expr.children[0], kUnaryPrec, out);
      if (parens) out += ")";
      return;
    }
    case ExprKind::kBinaryOp: {
      int p = binary_prec(expr.symbol);
      bool parens = p < min_prec;
      if (parens) out += "(";
      print_expr_prec(expr.children[0], p, out);
      out += " ";
      out += expr.symbol;
      out += " ";
      print_expr_prec(expr.children[1], p + 1, out);
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

std::string print_expr(const SpecExpr& expr) {
  std::string out;
  print_expr_prec(expr, 0, out);
  return out;
}

std::string print_clause(const SpecClause& clause) {
  std::string out(clause_keyword(clause.kind));
  out += " ";
  out += print_expr(clause.expr);
  out += ";";
  return out;
}

std::string print_spec_block(const SpecBlock& block, std::size_t indent) {
  std::string pad(indent, ' ');
  std::string out = pad + "/*@";
  for (const SpecClause& clause : block.clauses) {
    out += "\n" + pad + "  @ " + print_clause(clause);
  }
  out += "\n" + pad + "  @*/";
  return out;
}

}  // namespace jmldoc
