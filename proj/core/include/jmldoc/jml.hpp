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
//
// AST, parser, and pretty-printer for the JML subset this pipeline works
// with: requires/ensures/invariant clauses over boolean and arithmetic
// expressions, field access and method call chains, \old(...) and \result.
// The printer is a normal form: print(parse(print(b))) == print(b).

#ifndef JMLDOC_JML_HPP
#define JMLDOC_JML_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/error.hpp"
#include "jmldoc/source_model.hpp"

namespace jmldoc {

enum class ExprKind {
  kLiteral,      // null, true, false, numbers, string/char literals
  kIdentifier,   // bare name
  kFieldAccess,  // receiver.name
  kMethodCall,   // receiver.name(args...) or name(args...)
  kUnaryOp,      // !e, -e
  kBinaryOp,     // e op e
  kOldWrap,      // \old(e)
  kResultRef,    // \result
};

struct SpecExpr {
  ExprKind kind = ExprKind::kLiteral;
  // Literal text, identifier name, accessed/called member name, or operator
  // symbol, depending on kind.
  std::string symbol;
  std::vector<SpecExpr> children;
  // Method calls: when set, children[0] is the receiver and the arguments
  // follow; otherwise every child is an argument.
  bool has_receiver = false;
  Span span;  // byte range in the comment text this node was parsed from

  std::vector<const SpecExpr*> arguments() const;
};

bool structurally_equal(const SpecExpr& a, const SpecExpr& b);

// True if \old(...) or \result occurs anywhere in the expression.
bool contains_pre_state_ref(const SpecExpr& expr, std::string* which = nullptr);

enum class ClauseKind { kRequires, kEnsures, kClassInvariant };

std::string_view clause_keyword(ClauseKind kind);

struct SpecClause {
  ClauseKind kind = ClauseKind::kRequires;
  SpecExpr expr;
  // Stable identifier of the invariant record this clause came from; empty
  // for clauses parsed straight from source text.
  std::string origin_id;
  Span span;
};

bool structurally_equal(const SpecClause& a, const SpecClause& b);

enum class TargetKind { kMethod, kClass };

struct SpecTarget {
  TargetKind kind = TargetKind::kMethod;
  std::string key;  // anchor signature (methods) or qualified name (classes)
};

struct SpecBlock {
  std::vector<SpecClause> clauses;  // non-empty, in source/dump order
  std::optional<SpecTarget> target;
};

bool structurally_equal(const SpecBlock& a, const SpecBlock& b);

// Parses an annotation comment: either the block form "/*@ ... @*/" or a run
// of "//@" lines. Interior lines may carry a leading '@'. One clause per
// requires/ensures/invariant keyword, each terminated by ';'. Throws
// ParseError (malformed input, \old or \result in a requires/invariant
// clause) or UnsupportedConstructError (recognized JML outside the subset).
SpecBlock parse_spec_block(std::string_view comment_text);

// Parses a single clause, e.g. "ensures \result != null;".
SpecClause parse_clause(std::string_view clause_text);

// Block form, one clause per line:
//   /*@
//     @ requires ipString != null;
//     @*/
// Each line is prefixed by `indent` spaces. Reparsing yields a structurally
// equal block; parenthesization is minimal but sufficient.
std::string print_spec_block(const SpecBlock& block, std::size_t indent = 0);

// The clause as a single line without indentation, e.g.
// "requires ipString != null;".
std::string print_clause(const SpecClause& clause);

std::string print_expr(const SpecExpr& expr);

std::size_t count_clauses(const SpecBlock& block);

}  // namespace jmldoc

#endif  // JMLDOC_JML_HPP
