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

#include "jmldoc/invariant_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "jmldoc/digest.hpp"
#include "jmldoc/error.hpp"

namespace jmldoc {

std::string_view point_kind_name(PointKind kind) {
  switch (kind) {
    case PointKind::kEnter:
      return "ENTER";
    case PointKind::kExit:
      return "EXIT";
    case PointKind::kObject:
      return "OBJECT";
  }
  return "";
}

bool operator==(const ProgramPoint& a, const ProgramPoint& b) {
  return a.kind == b.kind && a.class_name == b.class_name &&
         a.method_signature == b.method_signature;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool in_ws = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out += ' ';
    in_ws = false;
    out += c;
  }
  return out;
}

bool is_separator_line(std::string_view line) {
  if (line.size() < 5) return false;
  return std::all_of(line.begin(), line.end(), [](char c) { return c == '='; });
}

std::string record_hash_input(const ProgramPoint& point,
                              std::string_view raw_text) {
  std::string input = point.class_name;
  input += '|';
  input += point.method_signature;
  input += '|';
  input += point_kind_name(point.kind);
  input += '|';
  input += collapse_ws(raw_text);
  return input;
}

ProgramPoint parse_header(std::string_view line, std::size_t line_no) {
  std::size_t sep = line.find(":::");
  if (sep == std::string_view::npos) {
    throw ParseError("malformed program-point header (missing \":::\")",
                     SourcePos{line_no, 1});
  }
  std::string kind_text = trim(line.substr(sep + 3));
  ProgramPoint point;
  if (kind_text == "ENTER") {
    point.kind = PointKind::kEnter;
  } else if (kind_text == "EXIT") {
    point.kind = PointKind::kExit;
  } else if (kind_text == "OBJECT") {
    point.kind = PointKind::kObject;
  } else {
    throw ParseError("malformed program-point header: unknown point kind \"" +
                         kind_text + "\"",
                     SourcePos{line_no, sep + 4});
  }

  std::string head = trim(line.substr(0, sep));
  if (point.kind == PointKind::kObject) {
    if (head.empty() || head.find('(') != std::string::npos) {
      throw ParseError("malformed OBJECT header: expected \"<class>:::OBJECT\"",
                       SourcePos{line_no, 1});
    }
    point.class_name = head;
    return point;
  }

  std::size_t open = head.find('(');
  if (open == std::string::npos || head.back() != ')') {
    throw ParseError(
        "malformed program-point header: expected \"<class>.<method>(...)\"",
        SourcePos{line_no, 1});
  }
  std::string callee = head.substr(0, open);
  std::size_t dot = callee.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == callee.size()) {
    throw ParseError(
        "malformed program-point header: missing class qualifier",
        SourcePos{line_no, 1});
  }
  point.class_name = callee.substr(0, dot);
  std::string method = callee.substr(dot + 1);
  std::string params = head.substr(open + 1, head.size() - open - 2);

  std::string sig = method + "(";
  std::string piece;
  bool first = true;
  auto flush = [&]() {
    std::string t = trim(piece);
    if (!t.empty()) {
      if (!first) sig += ",";
      sig += t;
      first = false;
    }
    piece.clear();
  };
  int depth = 0;
  for (char c : params) {
    if (c == '<' || c == '[') ++depth;
    if (c == '>' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    piece += c;
  }
  flush();
  sig += ")";
  point.method_signature = sig;
  return point;
}

}  // namespace

std::vector<InvariantRecord> parse_invariant_dump(std::string_view text) {
  std::vector<InvariantRecord> records;
  bool have_point = false;
  ProgramPoint current;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw_line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::string line = trim(raw_line);
    if (line.empty()) continue;
    if (is_separator_line(line)) {
      have_point = false;
      continue;
    }
    if (line.find(":::") != std::string::npos) {
      current = parse_header(line, line_no);
      have_point = true;
      continue;
    }
    if (!have_point) {
      throw ParseError("invariant line before any program-point header",
                       SourcePos{line_no, 1});
    }
    InvariantRecord record;
    record.point = current;
    record.raw_text = line;
    record.dump_line = line_no;
    record.id = sha256_hex16(record_hash_input(current, line));
    records.push_back(std::move(record));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Translation
// ---------------------------------------------------------------------------

namespace {

struct RawTok {
  enum Kind { kWord, kLiteral, kOther } kind = kOther;
  std::size_t start = 0;
  std::size_t end = 0;  // one past
};

// Lexes just enough structure to rewrite words outside string literals.
std::vector<RawTok> scan_raw(std::string_view s) {
  std::vector<RawTok> toks;
  std::size_t i = 0;
  auto word_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  while (i < s.size()) {
    char c = s[i];
    if (word_start(c)) {
      std::size_t j = i;
      while (j < s.size() && word_char(s[j])) ++j;
      toks.push_back({RawTok::kWord, i, j});
      i = j;
    } else if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < s.size()) {
        if (s[j] == '\\') {
          j += 2;
          continue;
        }
        if (s[j] == c) {
          ++j;
          break;
        }
        ++j;
      }
      toks.push_back({RawTok::kLiteral, i, std::min(j, s.size())});
      i = std::min(j, s.size());
    } else {
      toks.push_back({RawTok::kOther, i, i + 1});
      ++i;
    }
  }
  return toks;
}

std::string_view tok_text(std::string_view s, const RawTok& t) {
  return s.substr(t.start, t.end - t.start);
}

// Rewrites "x one of { a, b }" into "x == a || x == b" when the pattern spans
// the whole line. Returns false when the line has no one-of pattern; throws
// nothing, reporting malformed patterns through `reason`.
bool rewrite_one_of(std::string_view s, std::string* out, std::string* reason) {
  std::vector<RawTok> toks = scan_raw(s);
  int depth = 0;
  for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
    std::string_view t = tok_text(s, toks[i]);
    if (toks[i].kind == RawTok::kOther) {
      if (t == "(" || t == "{") ++depth;
      if (t == ")" || t == "}") --depth;
      continue;
    }
    if (toks[i].kind != RawTok::kWord || t != "one" || depth != 0) continue;
    // Find "of" then "{" skipping whitespace tokens.
    std::size_t j = i + 1;
    auto skip_ws = [&](std::size_t k) {
      while (k < toks.size() && toks[k].kind == RawTok::kOther &&
             std::isspace(static_cast<unsigned char>(s[toks[k].start]))) {
        ++k;
      }
      return k;
    };
    j = skip_ws(j);
    if (j >= toks.size() || tok_text(s, toks[j]) != "of") continue;
    std::size_t k = skip_ws(j + 1);
    if (k >= toks.size() || tok_text(s, toks[k]) != "{") continue;

    std::string lhs = trim(s.substr(0, toks[i].start));
    if (lhs.empty()) {
      *reason = "one-of pattern with no left-hand side";
      return true;
    }
    // Collect elements between braces, splitting on top-level commas.
    std::vector<std::string> elems;
    std::string piece;
    int inner = 0;
    std::size_t m = k + 1;
    bool closed = false;
    for (; m < toks.size(); ++m) {
      std::string_view u = tok_text(s, toks[m]);
      if (toks[m].kind == RawTok::kOther) {
        if (u == "(" || u == "{") ++inner;
        if (u == ")") --inner;
        if (u == "}") {
          if (inner == 0) {
            closed = true;
            break;
          }
          --inner;
        }
        if (u == "," && inner == 0) {
          std::string e = trim(piece);
          if (!e.empty()) elems.push_back(e);
          piece.clear();
          continue;
        }
      }
      piece += u;
    }
    std::string last = trim(piece);
    if (!last.empty()) elems.push_back(last);
    if (!closed) {
      *reason = "one-of pattern missing closing brace";
      return true;
    }
    if (elems.empty()) {
      *reason = "one-of pattern with no elements";
      return true;
    }
    if (!trim(s.substr(toks[m].end)).empty()) {
      *reason = "one-of pattern followed by extra text";
      return true;
    }
    std::string rebuilt;
    for (std::size_t e = 0; e < elems.size(); ++e) {
      if (e > 0) rebuilt += " || ";
      rebuilt += lhs + " == " + elems[e];
    }
    *out = rebuilt;
    return true;
  }
  return false;
}

// Rewrites `return` to `\result` and `orig(` to `\old(` outside literals.
// Both are pre/post-state references that only make sense at an EXIT point.
bool rewrite_state_refs(std::string_view s, PointKind kind, std::string* out,
                        std::string* reason) {
  std::vector<RawTok> toks = scan_raw(s);
  std::string result;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::string_view t = tok_text(s, toks[i]);
    if (toks[i].kind == RawTok::kWord && t == "return") {
      if (kind != PointKind::kExit) {
        *reason = "return-value reference outside an EXIT point";
        return false;
      }
      result += "\\result";
      continue;
    }
    if (toks[i].kind == RawTok::kWord && t == "orig") {
      std::size_t j = i + 1;
      while (j < toks.size() && toks[j].kind == RawTok::kOther &&
             std::isspace(static_cast<unsigned char>(s[toks[j].start]))) {
        ++j;
      }
      if (j < toks.size() && tok_text(s, toks[j]) == "(") {
        if (kind != PointKind::kExit) {
          *reason = "pre-state reference outside an EXIT point";
          return false;
        }
        result += "\\old";
        continue;
      }
    }
    result += t;
  }
  *out = result;
  return true;
}

ClauseKind clause_kind_for(PointKind kind) {
  switch (kind) {
    case PointKind::kEnter:
      return ClauseKind::kRequires;
    case PointKind::kExit:
      return ClauseKind::kEnsures;
    case PointKind::kObject:
      return ClauseKind::kClassInvariant;
  }
  return ClauseKind::kRequires;
}

}  // namespace

Translation translate_record(const InvariantRecord& record) {
  Translation result;
  std::string text = record.raw_text;

  std::string rewritten;
  std::string reason;
  if (rewrite_one_of(text, &rewritten, &reason)) {
    if (!reason.empty()) {
      result.reason = reason;
      return result;
    }
    text = rewritten;
  }
  if (!rewrite_state_refs(text, record.point.kind, &rewritten, &reason)) {
    result.reason = reason;
    return result;
  }
  text = rewritten;

  ClauseKind kind = clause_kind_for(record.point.kind);
  std::string clause_text(clause_keyword(kind));
  clause_text += " ";
  clause_text += text;
  clause_text += ";";
  try {
    result.clause = parse_clause(clause_text);
  } catch (const UnsupportedConstructError& e) {
    result.reason = e.what();
    return result;
  } catch (const ParseError& e) {
    result.reason = std::string("outside the supported grammar: ") + e.what();
    return result;
  }
  result.clause.origin_id = record.id;
  result.ok = true;
  return result;
}

void translate_records(std::vector<InvariantRecord>& records) {
  for (InvariantRecord& record : records) {
    record.translation = translate_record(record);
  }
}

// ---------------------------------------------------------------------------
// Attachment
// ---------------------------------------------------------------------------

namespace {

std::string last_segment(std::string_view dotted) {
  std::size_t dot = dotted.rfind('.');
  return std::string(dot == std::string_view::npos ? dotted
                                                   : dotted.substr(dot + 1));
}

// "java.lang.String" and "String" compare equal; generics are erased since
// dump type names never carry them.
std::string normalize_type(std::string_view type) {
  std::string t(type);
  std::size_t angle = t.find('<');
  std::size_t close = t.rfind('>');
  if (angle != std::string::npos && close != std::string::npos &&
      close > angle) {
    t = t.substr(0, angle) + t.substr(close + 1);
  }
  return last_segment(trim(t));
}

std::vector<std::string> split_signature_types(std::string_view signature) {
  std::size_t open = signature.find('(');
  std::size_t close = signature.rfind(')');
  std::vector<std::string> types;
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close <= open) {
    return types;
  }
  std::string_view inner = signature.substr(open + 1, close - open - 1);
  std::string piece;
  int depth = 0;
  for (char c : inner) {
    if (c == '<' || c == '[') ++depth;
    if (c == '>' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      types.push_back(trim(piece));
      piece.clear();
      continue;
    }
    piece += c;
  }
  std::string lastp = trim(piece);
  if (!lastp.empty()) types.push_back(lastp);
  return types;
}

std::string method_name_of(std::string_view signature) {
  std::size_t open = signature.find('(');
  return std::string(open == std::string_view::npos ? signature
                                                    : signature.substr(0, open));
}

// The class chain an anchor lives in: for a method "Outer.Inner.run" that is
// "Outer.Inner"; for a class anchor it is the qualified name itself.
std::string anchor_class_chain(const MemberAnchor& anchor) {
  if (anchor.kind == AnchorKind::kClassDecl) return anchor.qualified_name;
  std::size_t dot = anchor.qualified_name.rfind('.');
  return dot == std::string::npos ? std::string()
                                  : anchor.qualified_name.substr(0, dot);
}

bool class_matches(std::string_view dump_class, std::string_view chain) {
  if (chain.empty()) return true;
  return last_segment(dump_class) == last_segment(chain);
}

// Index of the matching anchor, or npos with a message in *why.
std::size_t find_anchor(const ProgramPoint& point, const SourceUnit& unit,
                        std::string* why) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  if (point.kind == PointKind::kObject) {
    std::size_t found = kNone;
    for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
      const MemberAnchor& a = unit.anchors[i];
      if (a.kind != AnchorKind::kClassDecl) continue;
      if (last_segment(point.class_name) != last_segment(a.qualified_name)) {
        continue;
      }
      if (found != kNone) {
        *why = "ambiguous class match for " + point.class_name;
        return kNone;
      }
      found = i;
    }
    if (found == kNone && why->empty()) {
      *why = "no class anchor named " + last_segment(point.class_name);
    }
    return found;
  }

  std::string name = method_name_of(point.method_signature);
  std::vector<std::string> dump_types =
      split_signature_types(point.method_signature);

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
    const MemberAnchor& a = unit.anchors[i];
    if (a.kind != AnchorKind::kMethodDecl) continue;
    if (a.name() != name) continue;
    if (a.parameter_types().size() != dump_types.size()) continue;
    if (!class_matches(point.class_name, anchor_class_chain(a))) continue;
    candidates.push_back(i);
  }
  if (candidates.empty()) {
    *why = "no method anchor matching " + point.method_signature;
    return kNone;
  }
  if (candidates.size() == 1) return candidates[0];

  // Arity ties: compare simple type names.
  std::vector<std::size_t> narrowed;
  for (std::size_t idx : candidates) {
    std::vector<std::string> anchor_types = unit.anchors[idx].parameter_types();
    bool all = true;
    for (std::size_t t = 0; t < dump_types.size(); ++t) {
      if (normalize_type(anchor_types[t]) != normalize_type(dump_types[t])) {
        all = false;
        break;
      }
    }
    if (all) narrowed.push_back(idx);
  }
  if (narrowed.size() == 1) return narrowed[0];
  *why = "ambiguous method match for " + point.method_signature;
  return kNone;
}

}  // namespace

AttachResult attach_clauses(const std::vector<InvariantRecord>& records,
                            const SourceUnit& unit) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  AttachResult result;
  std::map<std::size_t, SpecBlock> by_anchor;
  std::vector<std::size_t> anchor_order;

  struct UnmatchedEntry {
    ProgramPoint point;
    std::size_t count = 0;
    std::string message;
  };
  std::vector<UnmatchedEntry> unmatched;

  for (const InvariantRecord& record : records) {
    if (!record.translation.ok) {
      result.untranslatable.push_back(record);
      continue;
    }
    std::string why;
    std::size_t anchor = find_anchor(record.point, unit, &why);
    if (anchor == kNone) {
      bool merged = false;
      for (UnmatchedEntry& entry : unmatched) {
        if (entry.point == record.point) {
          ++entry.count;
          merged = true;
          break;
        }
      }
      if (!merged) {
        unmatched.push_back({record.point, 1, why});
      }
      continue;
    }
    auto [it, inserted] = by_anchor.try_emplace(anchor);
    if (inserted) anchor_order.push_back(anchor);
    it->second.clauses.push_back(record.translation.clause);
  }

  std::sort(anchor_order.begin(), anchor_order.end());
  for (std::size_t idx : anchor_order) {
    SpecBlock& block = by_anchor[idx];
    const MemberAnchor& a = unit.anchors[idx];
    block.target = SpecTarget{a.kind == AnchorKind::kClassDecl
                                  ? TargetKind::kClass
                                  : TargetKind::kMethod,
                              a.kind == AnchorKind::kClassDecl
                                  ? a.qualified_name
                                  : a.signature};
    result.blocks.push_back({idx, std::move(block)});
  }
  for (UnmatchedEntry& entry : unmatched) {
    result.unmatched.push_back(
        {std::move(entry.point), entry.count, std::move(entry.message)});
  }
  return result;
}

}  // namespace jmldoc
