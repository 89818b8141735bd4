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
// A lossless token model for Java source text. It is deliberately not a Java
// parser: it knows just enough lexical structure to strip comments without
// touching code, to locate class/method declarations by depth tracking, and
// to splice specification blocks in front of declarations.

#ifndef JMLDOC_SOURCE_MODEL_HPP
#define JMLDOC_SOURCE_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/error.hpp"

namespace jmldoc {

enum class TokenKind {
  kWord,
  kPunctuation,
  kStringLiteral,
  kCharLiteral,
  kLineComment,
  kBlockComment,
  kWhitespace,
};

// Byte range [start, end) into the owning unit's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - start; }
  bool empty() const { return start == end; }
};

struct Token {
  TokenKind kind;
  std::string lexeme;  // exact source bytes
  Span span;
  SourcePos pos;  // line/column of span.start
};

enum class AnchorKind { kClassDecl, kMethodDecl };

// A located class or method declaration where a spec block can attach.
struct MemberAnchor {
  AnchorKind kind;
  std::string qualified_name;  // dotted path within the unit, e.g. Outer.Inner.f
  std::string signature;       // normalized: name or name(Type1,Type2)
  std::size_t insertion_offset = 0;  // start of the declaration's first line
  Span body_span;                    // braces range; empty for abstract members

  // Simple name (last dotted segment of qualified_name).
  std::string name() const;
  // Parameter type names parsed back out of the signature; empty for classes.
  std::vector<std::string> parameter_types() const;
};

struct SourceUnit {
  std::string identifier;
  std::string text;
  std::vector<Token> tokens;
  std::vector<MemberAnchor> anchors;
};

// Non-fatal diagnostics from the declaration heuristics.
struct LocateWarning {
  Span span;
  std::string message;
};

// Tokenizes Java source. Comment markers inside string/char literals are not
// comments. Concatenating the returned lexemes reproduces the input
// byte-for-byte. Throws LexError on unterminated block comments and
// unterminated string/char literals.
std::vector<Token> tokenize(std::string_view text);

// Tokenizes and wires up a SourceUnit; anchors are left empty.
SourceUnit make_unit(std::string identifier, std::string text);

// Removes comment tokens. Block comments glued between code are replaced by
// one space; block comments alone on their line(s) are removed together with
// the line; line comments lose their text but keep their newline. When
// keep_jml is set, annotation comments (block comments whose first
// non-whitespace character after "/*" is '@', and "//@" line comments)
// survive verbatim. The result is re-tokenized; anchors are not carried over.
SourceUnit strip_comments(const SourceUnit& unit, bool keep_jml);

// True if the token is an annotation comment in the JML lexical convention.
bool is_annotation_comment(const Token& token);

// Locates class and method declarations by brace/paren/angle depth tracking.
// Throws Error on unbalanced braces; heuristic failures on individual token
// runs degrade to warnings and the unit stays usable.
std::vector<MemberAnchor> locate_members(const SourceUnit& unit,
                                         std::vector<LocateWarning>* warnings = nullptr);

// make_unit + locate_members.
SourceUnit analyze_unit(std::string identifier, std::string text,
                        std::vector<LocateWarning>* warnings = nullptr);

// Inserts a rendered annotation comment in front of the anchored declaration,
// re-indented to match it. Throws Error if the anchor is not part of the unit
// or if an annotation comment already immediately precedes the declaration.
// The result is re-tokenized and re-anchored.
SourceUnit inject_spec_block(const SourceUnit& unit, const MemberAnchor& anchor,
                             std::string_view block_text);

// Injects several blocks in one pass (offsets ordered internally).
struct PendingInjection {
  MemberAnchor anchor;
  std::string block_text;
};
SourceUnit inject_spec_blocks(const SourceUnit& unit,
                              std::vector<PendingInjection> injections);

// Line/column of a byte offset in text (1-based, column in bytes).
SourcePos position_at(std::string_view text, std::size_t offset);

}  // namespace jmldoc

#endif  // JMLDOC_SOURCE_MODEL_HPP
