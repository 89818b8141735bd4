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

#ifndef JMLDOC_INVARIANT_INGEST_HPP_
#define JMLDOC_INVARIANT_INGEST_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/jml.hpp"
#include "jmldoc/source_model.hpp"

namespace jmldoc {

// Where in a method's lifetime an observed invariant holds.
enum class PointKind {
  kEnter,
  kExit,
  kObject,
};

std::string_view point_kind_name(PointKind kind);

struct ProgramPoint {
  std::string class_name;        // dotted, e.g. "com.example.net.InetAddresses"
  std::string method_signature;  // "name(T1,T2)"; empty for OBJECT points
  PointKind kind = PointKind::kEnter;
};

bool operator==(const ProgramPoint& a, const ProgramPoint& b);

// Outcome of mapping one detector line into the spec clause grammar. An
// input outside the grammar is a value with a reason, never an error.
struct Translation {
  bool ok = false;
  SpecClause clause;   // meaningful only when ok
  std::string reason;  // meaningful only when !ok
};

struct InvariantRecord {
  ProgramPoint point;
  std::string raw_text;
  std::size_t dump_line = 0;  // 1-based line in the dump file
  std::string id;             // 16 hex chars, stable across runs and platforms
  Translation translation;
};

// Parses the normalized line-oriented dump format: records are separated by
// lines of '=' characters; each record starts with a header
// "<class>.<method>(<param types>):::<ENTER|EXIT|OBJECT>" followed by one
// invariant per line. Ids are assigned; translations are left empty.
std::vector<InvariantRecord> parse_invariant_dump(std::string_view text);

// Applies the translation table: orig(e) -> \old(e) and return -> \result
// (EXIT points only), "x one of { a, b }" -> "x == a || x == b", and passes
// the result through the clause grammar. ENTER yields requires, EXIT yields
// ensures, OBJECT yields class invariants.
Translation translate_record(const InvariantRecord& record);

// Convenience: runs translate_record over every record in place.
void translate_records(std::vector<InvariantRecord>& records);

struct AttachedBlock {
  std::size_t anchor_index = 0;  // into unit.anchors
  SpecBlock block;
};

struct UnmatchedPoint {
  ProgramPoint point;
  std::size_t clause_count = 0;  // translated clauses that found no anchor
  std::string message;
};

struct AttachResult {
  std::vector<AttachedBlock> blocks;  // ordered by anchor index
  std::vector<UnmatchedPoint> unmatched;
  std::vector<InvariantRecord> untranslatable;
};

// Groups translated clauses under the unit anchor matching their program
// point: methods by simple name and arity (parameter type names break ties),
// OBJECT points by class anchor. Clause order inside a block follows dump
// order. Points that match no anchor become warnings, not failures.
AttachResult attach_clauses(const std::vector<InvariantRecord>& records,
                            const SourceUnit& unit);

}  // namespace jmldoc

#endif  // JMLDOC_INVARIANT_INGEST_HPP_
