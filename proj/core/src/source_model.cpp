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

#include "jmldoc/source_model.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <unordered_set>

namespace jmldoc {

namespace {

bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_word_byte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') ||
         (u >= '0' && u <= '9') || c == '_' || c == '$' || u >= 0x80;
}

// Advances line/column over a lexeme.
void advance_pos(SourcePos& pos, std::string_view lexeme) {
  for (char c : lexeme) {
    if (c == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
}

}  // namespace

SourcePos position_at(std::string_view text, std::size_t offset) {
  SourcePos pos;
  advance_pos(pos, text.substr(0, std::min(offset, text.size())));
  return pos;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  SourcePos pos;

  auto emit = [&](TokenKind kind, std::size_t start, std::size_t end) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(text.substr(start, end - start));
    t.span = {start, end};
    t.pos = pos;
    advance_pos(pos, t.lexeme);
    tokens.push_back(std::move(t));
    i = end;
  };

  while (i < n) {
    const char c = text[i];
    if (is_space_byte(c)) {
      std::size_t j = i + 1;
      while (j < n && is_space_byte(text[j])) ++j;
      emit(TokenKind::kWhitespace, i, j);
    } else if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      std::size_t j = i + 2;
      while (j < n && text[j] != '\n') ++j;
      emit(TokenKind::kLineComment, i, j);
    } else if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      std::size_t j = text.find("*/", i + 2);
      if (j == std::string_view::npos) {
        throw LexError("unterminated block comment", pos);
      }
      emit(TokenKind::kBlockComment, i, j + 2);
    } else if (c == '"' || c == '\'') {
      const char quote = c;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        if (text[j] == '\\') {
          j += 2;
          continue;
        }
        if (text[j] == quote) {
          closed = true;
          ++j;
          break;
        }
        if (text[j] == '\n' || text[j] == '\r') break;
        ++j;
      }
      if (!closed || j > n) {
        throw LexError(quote == '"' ? "unterminated string literal"
                                    : "unterminated char literal",
                       pos);
      }
      emit(quote == '"' ? TokenKind::kStringLiteral : TokenKind::kCharLiteral,
           i, j);
    } else if (is_word_byte(c)) {
      std::size_t j = i + 1;
      while (j < n && is_word_byte(text[j])) ++j;
      emit(TokenKind::kWord, i, j);
    } else {
      emit(TokenKind::kPunctuation, i, i + 1);
    }
  }
  return tokens;
}

SourceUnit make_unit(std::string identifier, std::string text) {
  SourceUnit unit;
  unit.identifier = std::move(identifier);
  unit.tokens = tokenize(text);
  unit.text = std::move(text);
  return unit;
}

bool is_annotation_comment(const Token& token) {
  if (token.kind == TokenKind::kLineComment) {
    return token.lexeme.rfind("//@", 0) == 0;
  }
  if (token.kind != TokenKind::kBlockComment) return false;
  // First non-whitespace character after "/*" must be '@'.
  for (std::size_t i = 2; i + 2 <= token.lexeme.size(); ++i) {
    char c = token.lexeme[i];
    if (is_space_byte(c)) continue;
    return c == '@';
  }
  return false;
}

SourceUnit strip_comments(const SourceUnit& unit, bool keep_jml) {
  const std::string& text = unit.text;
  std::string out;
  out.reserve(text.size());
  // Set when an own-line block comment was removed: the following whitespace
  // is consumed up to and including its first newline.
  bool swallow_through_newline = false;

  for (const Token& tok : unit.tokens) {
    if (tok.kind == TokenKind::kWhitespace && swallow_through_newline) {
      swallow_through_newline = false;
      std::size_t nl = tok.lexeme.find('\n');
      if (nl == std::string::npos) continue;  // trailing spaces at EOF
      out.append(tok.lexeme.substr(nl + 1));
      continue;
    }
    swallow_through_newline = false;

    switch (tok.kind) {
      case TokenKind::kLineComment:
        if (keep_jml && is_annotation_comment(tok)) out.append(tok.lexeme);
        // otherwise the text is deleted; the newline lives in the next token
        break;
      case TokenKind::kBlockComment: {
        if (keep_jml && is_annotation_comment(tok)) {
          out.append(tok.lexeme);
          break;
        }
        // Own-line comments take their whole line(s) with them; comments
        // embedded in code become a single space so tokens cannot glue.
        std::size_t line_start = tok.span.start;
        while (line_start > 0 && text[line_start - 1] != '\n') --line_start;
        bool leading_blank = true;
        for (std::size_t k = line_start; k < tok.span.start; ++k) {
          if (!is_space_byte(text[k])) {
            leading_blank = false;
            break;
          }
        }
        bool trailing_blank = true;
        for (std::size_t k = tok.span.end; k < text.size() && text[k] != '\n';
             ++k) {
          if (!is_space_byte(text[k])) {
            trailing_blank = false;
            break;
          }
        }
        if (leading_blank && trailing_blank) {
          std::size_t last_nl = out.rfind('\n');
          std::size_t cut = (last_nl == std::string::npos) ? 0 : last_nl + 1;
          out.resize(cut);  // drop this line's indentation
          swallow_through_newline = true;
        } else {
          out.push_back(' ');
        }
        break;
      }
      default:
        out.append(tok.lexeme);
        break;
    }
  }
  SourceUnit result = make_unit(unit.identifier, std::move(out));
  return result;
}

std::string MemberAnchor::name() const {
  std::size_t dot = qualified_name.rfind('.');
  return dot == std::string::npos ? qualified_name
                                  : qualified_name.substr(dot + 1);
}

std::vector<std::string> MemberAnchor::parameter_types() const {
  std::vector<std::string> types;
  std::size_t open = signature.find('(');
  if (open == std::string::npos) return types;
  std::string inner = signature.substr(open + 1, signature.size() - open - 2);
  if (inner.empty()) return types;
  int depth = 0;
  std::string current;
  for (char c : inner) {
    if (c == '<' || c == '[' || c == '(') ++depth;
    if (c == '>' || c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      types.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  types.push_back(current);
  return types;
}

namespace {

const std::unordered_set<std::string>& modifier_words() {
  static const std::unordered_set<std::string> kWords = {
      "public",   "protected", "private",  "static",    "final",
      "abstract", "synchronized", "native", "strictfp", "transient",
      "volatile", "default",   "sealed"};
  return kWords;
}

// A contiguous run of significant tokens between statement boundaries,
// examined to classify the upcoming declaration.
struct RunScan {
  bool has_type_keyword = false;
  std::size_t type_keyword_index = 0;  // index into run
  bool has_method_paren = false;
  std::size_t method_name_index = 0;
  std::size_t method_open_paren_index = 0;
  bool has_top_level_assign = false;
  bool all_modifiers = true;
};

// Indices reference `run`, a vector of pointers into the unit's token list.
RunScan scan_run(const std::vector<const Token*>& run) {
  RunScan scan;
  int paren_depth = 0;
  int angle_depth = 0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    const Token& t = *run[i];
    if (t.kind == TokenKind::kWord) {
      if (!modifier_words().count(t.lexeme)) scan.all_modifiers = false;
      bool after_dot = i > 0 && run[i - 1]->kind == TokenKind::kPunctuation &&
                       run[i - 1]->lexeme == ".";
      if (!scan.has_type_keyword && paren_depth == 0 && !after_dot &&
          (t.lexeme == "class" || t.lexeme == "interface" ||
           t.lexeme == "enum")) {
        scan.has_type_keyword = true;
        scan.type_keyword_index = i;
      }
      continue;
    }
    scan.all_modifiers = false;
    if (t.kind != TokenKind::kPunctuation) continue;
    const char c = t.lexeme[0];
    if (c == '(') {
      // Parens belonging to annotations (@Name(...)) are not a method's
      // parameter list; the annotation name is preceded by '@' (possibly
      // through a dotted path).
      bool annotation_paren = false;
      if (paren_depth == 0 && i > 0 && run[i - 1]->kind == TokenKind::kWord) {
        std::size_t k = i - 1;
        while (k >= 2 && run[k - 1]->kind == TokenKind::kPunctuation &&
               run[k - 1]->lexeme == "." && run[k - 2]->kind == TokenKind::kWord) {
          k -= 2;
        }
        if (k >= 1 && run[k - 1]->kind == TokenKind::kPunctuation &&
            run[k - 1]->lexeme == "@") {
          annotation_paren = true;
        }
        if (!annotation_paren && !scan.has_method_paren && angle_depth == 0 &&
            !scan.has_top_level_assign && !scan.has_type_keyword) {
          scan.has_method_paren = true;
          scan.method_name_index = i - 1;
          scan.method_open_paren_index = i;
        }
      }
      ++paren_depth;
    } else if (c == ')') {
      --paren_depth;
    } else if (c == '<' && paren_depth == 0) {
      ++angle_depth;
    } else if (c == '>' && paren_depth == 0) {
      if (angle_depth > 0) --angle_depth;
    } else if (c == '=' && paren_depth == 0 && angle_depth == 0 &&
               !scan.has_method_paren) {
      scan.has_top_level_assign = true;
    }
  }
  return scan;
}

// Parameter type names between the method's parens: annotations, `final`,
// and the trailing parameter name are dropped; whitespace is collapsed by
// joining lexemes directly.
std::vector<std::string> extract_param_types(
    const std::vector<const Token*>& run, std::size_t open_paren_index) {
  std::vector<std::vector<const Token*>> groups;
  std::vector<const Token*> current;
  int depth = 1;
  std::size_t i = open_paren_index + 1;
  for (; i < run.size() && depth > 0; ++i) {
    const Token& t = *run[i];
    if (t.kind == TokenKind::kPunctuation) {
      char c = t.lexeme[0];
      if (c == '(' || c == '<' || c == '[') ++depth;
      if (c == ')' || c == '>' || c == ']') {
        if (c == ')' && depth == 1) break;
        --depth;
        current.push_back(&t);
        continue;
      }
      if (c == ',' && depth == 1) {
        groups.push_back(current);
        current.clear();
        continue;
      }
    }
    current.push_back(&t);
  }
  if (!current.empty()) groups.push_back(current);

  std::vector<std::string> types;
  for (auto& group : groups) {
    // Drop annotation groups and `final`.
    std::vector<const Token*> kept;
    for (std::size_t k = 0; k < group.size(); ++k) {
      const Token& t = *group[k];
      if (t.kind == TokenKind::kPunctuation && t.lexeme == "@") {
        // Skip "@ Name(.Name)* ( ... )?".
        ++k;
        while (k + 1 < group.size() &&
               group[k + 1]->kind == TokenKind::kPunctuation &&
               group[k + 1]->lexeme == ".") {
          k += 2;
        }
        if (k + 1 < group.size() &&
            group[k + 1]->kind == TokenKind::kPunctuation &&
            group[k + 1]->lexeme == "(") {
          int d = 0;
          ++k;
          for (; k < group.size(); ++k) {
            if (group[k]->lexeme == "(") ++d;
            if (group[k]->lexeme == ")" && --d == 0) break;
          }
        }
        continue;
      }
      if (t.kind == TokenKind::kWord && t.lexeme == "final") continue;
      kept.push_back(&t);
    }
    // The last word token is the parameter name.
    std::size_t name_index = kept.size();
    for (std::size_t k = kept.size(); k-- > 0;) {
      if (kept[k]->kind == TokenKind::kWord) {
        name_index = k;
        break;
      }
    }
    std::string type;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (k == name_index) continue;
      type += kept[k]->lexeme;
    }
    if (!type.empty()) types.push_back(type);
  }
  return types;
}

struct OpenScope {
  enum Kind { kClassBody, kBlock } kind = kBlock;
  std::string simple_name;       // class scopes only
  bool has_anchor = false;       // scope is a class body or a method body
  std::size_t anchor_index = 0;
  bool enum_body = false;
  bool in_enum_constants = false;  // until the first ';' inside an enum body
};

}  // namespace

std::vector<MemberAnchor> locate_members(const SourceUnit& unit,
                                         std::vector<LocateWarning>* warnings) {
  std::vector<MemberAnchor> anchors;
  std::vector<OpenScope> scopes;
  std::vector<const Token*> run;

  auto warn = [&](Span span, std::string message) {
    if (warnings) warnings->push_back({span, std::move(message)});
  };

  auto line_start_of = [&](std::size_t offset) {
    std::size_t ls = offset;
    while (ls > 0 && unit.text[ls - 1] != '\n') --ls;
    return ls;
  };

  auto qualified_prefix = [&]() {
    std::string prefix;
    for (const auto& scope : scopes) {
      if (scope.kind == OpenScope::kClassBody) {
        prefix += scope.simple_name;
        prefix += '.';
      }
    }
    return prefix;
  };

  auto in_class_context = [&]() {
    return scopes.empty() || scopes.back().kind == OpenScope::kClassBody;
  };

  auto flush_insertion_offset = [&](const Token& first) {
    std::size_t ls = line_start_of(first.span.start);
    for (std::size_t k = ls; k < first.span.start; ++k) {
      if (!is_space_byte(unit.text[k])) {
        warn({ls, first.span.end},
             "declaration does not start its own line");
        break;
      }
    }
    return ls;
  };

  for (const Token& tok : unit.tokens) {
    if (tok.kind == TokenKind::kWhitespace ||
        tok.kind == TokenKind::kLineComment ||
        tok.kind == TokenKind::kBlockComment) {
      continue;
    }
    const bool is_punct = tok.kind == TokenKind::kPunctuation;
    const char p = is_punct ? tok.lexeme[0] : '\0';

    if (is_punct && p == '{') {
      if (!in_class_context()) {
        scopes.push_back({OpenScope::kBlock});
        run.clear();
        continue;
      }
      if (!scopes.empty() && scopes.back().in_enum_constants) {
        scopes.push_back({OpenScope::kBlock});  // enum constant body
        run.clear();
        continue;
      }
      RunScan scan = scan_run(run);
      if (scan.has_type_keyword && scan.type_keyword_index + 1 < run.size()) {
        const Token& name_tok = *run[scan.type_keyword_index + 1];
        MemberAnchor anchor;
        anchor.kind = AnchorKind::kClassDecl;
        anchor.qualified_name = qualified_prefix() + name_tok.lexeme;
        anchor.signature = name_tok.lexeme;
        anchor.insertion_offset = flush_insertion_offset(*run.front());
        anchor.body_span = {tok.span.start, tok.span.start};
        anchors.push_back(anchor);
        OpenScope scope{OpenScope::kClassBody};
        scope.simple_name = name_tok.lexeme;
        scope.has_anchor = true;
        scope.anchor_index = anchors.size() - 1;
        scope.enum_body = run[scan.type_keyword_index]->lexeme == "enum";
        scope.in_enum_constants = scope.enum_body;
        scopes.push_back(scope);
      } else if (scan.has_method_paren) {
        const Token& name_tok = *run[scan.method_name_index];
        MemberAnchor anchor;
        anchor.kind = AnchorKind::kMethodDecl;
        anchor.qualified_name = qualified_prefix() + name_tok.lexeme;
        std::vector<std::string> types =
            extract_param_types(run, scan.method_open_paren_index);
        std::string sig = name_tok.lexeme + "(";
        for (std::size_t k = 0; k < types.size(); ++k) {
          if (k) sig += ",";
          sig += types[k];
        }
        sig += ")";
        anchor.signature = sig;
        anchor.insertion_offset = flush_insertion_offset(*run.front());
        anchor.body_span = {tok.span.start, tok.span.start};
        anchors.push_back(anchor);
        OpenScope scope{OpenScope::kBlock};
        scope.has_anchor = true;  // body end recorded when this scope pops
        scope.anchor_index = anchors.size() - 1;
        scopes.push_back(scope);
      } else if (run.empty() || scan.all_modifiers ||
                 scan.has_top_level_assign) {
        scopes.push_back({OpenScope::kBlock});  // initializer or field init
      } else {
        warn({run.front()->span.start, tok.span.end},
             "unclassified token run before '{'");
        scopes.push_back({OpenScope::kBlock});
      }
      run.clear();
      continue;
    }

    if (is_punct && p == '}') {
      if (scopes.empty()) {
        throw Error("unbalanced braces in " + unit.identifier + ": stray '}' at " +
                    to_string(position_at(unit.text, tok.span.start)));
      }
      OpenScope scope = scopes.back();
      scopes.pop_back();
      if (scope.has_anchor) {
        anchors[scope.anchor_index].body_span.end = tok.span.end;
      }
      run.clear();
      continue;
    }

    if (is_punct && p == ';' && in_class_context()) {
      if (!scopes.empty() && scopes.back().in_enum_constants) {
        scopes.back().in_enum_constants = false;
        run.clear();
        continue;
      }
      RunScan scan = scan_run(run);
      if (scan.has_method_paren && !scan.has_top_level_assign &&
          !scan.has_type_keyword) {
        const Token& name_tok = *run[scan.method_name_index];
        MemberAnchor anchor;
        anchor.kind = AnchorKind::kMethodDecl;
        anchor.qualified_name = qualified_prefix() + name_tok.lexeme;
        std::vector<std::string> types =
            extract_param_types(run, scan.method_open_paren_index);
        std::string sig = name_tok.lexeme + "(";
        for (std::size_t k = 0; k < types.size(); ++k) {
          if (k) sig += ",";
          sig += types[k];
        }
        sig += ")";
        anchor.signature = sig;
        anchor.insertion_offset = flush_insertion_offset(*run.front());
        anchor.body_span = {tok.span.end, tok.span.end};  // abstract: empty
        anchors.push_back(anchor);
      }
      run.clear();
      continue;
    }

    if (in_class_context()) run.push_back(&tok);
  }

  if (!scopes.empty()) {
    throw Error("unbalanced braces in " + unit.identifier + ": " +
                std::to_string(scopes.size()) + " unclosed scope(s)");
  }
  return anchors;
}

SourceUnit analyze_unit(std::string identifier, std::string text,
                        std::vector<LocateWarning>* warnings) {
  SourceUnit unit = make_unit(std::move(identifier), std::move(text));
  unit.anchors = locate_members(unit, warnings);
  return unit;
}

namespace {

bool anchors_equal(const MemberAnchor& a, const MemberAnchor& b) {
  return a.kind == b.kind && a.qualified_name == b.qualified_name &&
         a.signature == b.signature &&
         a.insertion_offset == b.insertion_offset &&
         a.body_span.start == b.body_span.start &&
         a.body_span.end == b.body_span.end;
}

// Replaces each line's shared leading whitespace with `indent`.
std::string reindent_block(std::string_view block_text, std::string_view indent) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= block_text.size()) {
    std::size_t nl = block_text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(block_text.substr(start));
      break;
    }
    lines.emplace_back(block_text.substr(start, nl - start));
    start = nl + 1;
  }
  std::size_t common = std::string::npos;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    std::size_t ws = 0;
    while (ws < line.size() && (line[ws] == ' ' || line[ws] == '\t')) ++ws;
    if (ws == line.size()) continue;
    common = std::min(common, ws);
  }
  if (common == std::string::npos) common = 0;
  std::string out;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (k) out.push_back('\n');
    if (!lines[k].empty()) {
      out.append(indent);
      out.append(lines[k].substr(std::min(common, lines[k].size())));
    }
  }
  return out;
}

void check_block_text(std::string_view block_text) {
  std::vector<Token> tokens = tokenize(block_text);
  const Token* comment = nullptr;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kWhitespace) continue;
    if (comment != nullptr || t.kind != TokenKind::kBlockComment) {
      throw Error("spec block text is not a single block comment");
    }
    comment = &t;
  }
  if (comment == nullptr || !is_annotation_comment(*comment)) {
    throw Error("spec block text is not an annotation comment");
  }
}

// Applies one injection to `text`; offsets refer to the original unit.
std::string inject_into_text(const SourceUnit& unit, std::string text,
                             const MemberAnchor& anchor,
                             std::string_view block_text) {
  bool found = false;
  for (const MemberAnchor& a : unit.anchors) {
    if (anchors_equal(a, anchor)) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error("anchor not found in unit: " + anchor.signature);
  }
  check_block_text(block_text);

  // Indentation of the declaration's first line.
  std::size_t offset = anchor.insertion_offset;
  std::size_t first_sig = offset;
  while (first_sig < unit.text.size() && is_space_byte(unit.text[first_sig]) &&
         unit.text[first_sig] != '\n') {
    ++first_sig;
  }
  std::string indent = unit.text.substr(offset, first_sig - offset);

  // Reject a second annotation at the same anchor: the nearest significant
  // token above the declaration must not already be an annotation comment.
  const Token* prev = nullptr;
  for (const Token& t : unit.tokens) {
    if (t.span.start >= first_sig) break;
    if (t.kind == TokenKind::kWhitespace) continue;
    prev = &t;
  }
  if (prev != nullptr && is_annotation_comment(*prev)) {
    throw Error("anchor already annotated: " + anchor.signature);
  }

  std::string rendered = reindent_block(block_text, indent);
  rendered.push_back('\n');
  text.insert(offset, rendered);
  return text;
}

}  // namespace

SourceUnit inject_spec_block(const SourceUnit& unit, const MemberAnchor& anchor,
                             std::string_view block_text) {
  std::string text = inject_into_text(unit, unit.text, anchor, block_text);
  return analyze_unit(unit.identifier, std::move(text));
}

SourceUnit inject_spec_blocks(const SourceUnit& unit,
                              std::vector<PendingInjection> injections) {
  std::sort(injections.begin(), injections.end(),
            [](const PendingInjection& a, const PendingInjection& b) {
              return a.anchor.insertion_offset > b.anchor.insertion_offset;
            });
  std::string text = unit.text;
  std::set<std::size_t> seen;
  for (const PendingInjection& inj : injections) {
    if (!seen.insert(inj.anchor.insertion_offset).second) {
      throw Error("anchor already annotated: " + inj.anchor.signature);
    }
    text = inject_into_text(unit, std::move(text), inj.anchor, inj.block_text);
  }
  return analyze_unit(unit.identifier, std::move(text));
}

}  // namespace jmldoc
