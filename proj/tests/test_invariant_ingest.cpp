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

#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "jmldoc/digest.hpp"
#include "jmldoc/error.hpp"
#include "jmldoc/invariant_ingest.hpp"
#include "jmldoc/source_model.hpp"
#include "support.hpp"

using namespace jmldoc;

namespace {

InvariantRecord one_record(const std::string& header, const std::string& line) {
  auto records = parse_invariant_dump(header + "\n" + line + "\n");
  REQUIRE(records.size() == 1);
  return records[0];
}

Translation translate(const std::string& header, const std::string& line) {
  InvariantRecord record = one_record(header, line);
  return translate_record(record);
}

std::string fixture_dump() {
  return testsupport::read_file(testsupport::fixtures_root() / "dumps" / "InetAddresses.dump");
}

std::string fixture_source() {
  return testsupport::read_file(testsupport::fixtures_root() / "corpus" / "com" / "example" /
                                "net" / "InetAddresses.java");
}

}  // namespace

TEST_CASE("dump parsing groups invariant lines under their headers") {
  const std::string dump =
      "=====\n"
      "com.example.net.InetAddresses.isInetAddress(java.lang.String):::ENTER\n"
      "ipString != null\n"
      "=====\n"
      "com.example.net.InetAddresses.isInetAddress(java.lang.String):::EXIT\n"
      "return == true\n"
      "ipString != null\n"
      "=====\n"
      "com.example.net.InetAddresses:::OBJECT\n"
      "IPV4_PART_COUNT == 4\n";
  auto records = parse_invariant_dump(dump);
  REQUIRE(records.size() == 4);

  CHECK(records[0].point.class_name == "com.example.net.InetAddresses");
  // The raw dump signature is kept; type names normalize during attachment.
  CHECK(records[0].point.method_signature == "isInetAddress(java.lang.String)");
  CHECK(records[0].point.kind == PointKind::kEnter);
  CHECK(records[0].raw_text == "ipString != null");
  CHECK(records[0].dump_line == 3);

  CHECK(records[1].point.kind == PointKind::kExit);
  CHECK(records[2].point.kind == PointKind::kExit);
  CHECK(records[2].dump_line == 7);

  CHECK(records[3].point.kind == PointKind::kObject);
  CHECK(records[3].point.method_signature.empty());
}

TEST_CASE("dump edge cases") {
  CHECK(parse_invariant_dump("").empty());
  CHECK(parse_invariant_dump("=====\n=====\n").empty());
  // Longer separator runs are accepted too.
  CHECK(parse_invariant_dump("===========================\n").empty());

  CHECK_THROWS_WITH_AS(parse_invariant_dump("x == 1\n"),
                       doctest::Contains("before any program-point header"), ParseError);
  CHECK_THROWS_WITH_AS(parse_invariant_dump("A.f(int):::LOOP\nx == 1\n"),
                       doctest::Contains("program-point"), ParseError);
  // A separator resets the current point.
  CHECK_THROWS_AS(parse_invariant_dump("A.f(int):::ENTER\nx == 1\n=====\ny == 2\n"), ParseError);
}

TEST_CASE("record ids are content hashes, stable across runs") {
  InvariantRecord record = one_record(
      "com.example.net.InetAddresses.isInetAddress(java.lang.String):::ENTER",
      "ipString != null");
  CHECK(record.id ==
        sha256_hex16("com.example.net.InetAddresses|isInetAddress(java.lang.String)|ENTER|ipString != null"));
  CHECK(record.id == "5c0a0d5c240dfa37");
  CHECK(record.id.size() == 16);

  // Interior whitespace is collapsed before hashing.
  InvariantRecord spaced = one_record(
      "com.example.net.InetAddresses.isInetAddress(java.lang.String):::ENTER",
      "ipString   !=   null");
  CHECK(spaced.id == record.id);

  // Same text at a different point is a different obligation.
  InvariantRecord exit_side = one_record(
      "com.example.net.InetAddresses.isInetAddress(java.lang.String):::EXIT",
      "ipString != null");
  CHECK(exit_side.id != record.id);

  auto first = parse_invariant_dump(fixture_dump());
  auto second = parse_invariant_dump(fixture_dump());
  REQUIRE(first.size() == second.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].id == second[i].id);
    ids.insert(first[i].id);
  }
  CHECK(ids.size() == first.size());
}

TEST_CASE("point kinds choose the clause keyword") {
  Translation enter = translate("A.f(int):::ENTER", "x != null");
  REQUIRE(enter.ok);
  CHECK(enter.clause.kind == ClauseKind::kRequires);
  CHECK(print_clause(enter.clause) == "requires x != null;");

  Translation exit = translate("A.f(int):::EXIT", "x != null");
  REQUIRE(exit.ok);
  CHECK(exit.clause.kind == ClauseKind::kEnsures);

  Translation object = translate("A:::OBJECT", "SIZE == 4");
  REQUIRE(object.ok);
  CHECK(object.clause.kind == ClauseKind::kClassInvariant);
  CHECK(print_clause(object.clause) == "invariant SIZE == 4;");
}

TEST_CASE("state references translate only at EXIT points") {
  Translation ret = translate("A.f():::EXIT", "return != null");
  REQUIRE(ret.ok);
  CHECK(print_clause(ret.clause) == "ensures \\result != null;");

  Translation ret_bool = translate("A.f():::EXIT", "return == true");
  REQUIRE(ret_bool.ok);
  CHECK(print_clause(ret_bool.clause) == "ensures \\result == true;");

  Translation orig_plain = translate("A.f():::EXIT", "x == orig(x)");
  REQUIRE(orig_plain.ok);
  CHECK(print_clause(orig_plain.clause) == "ensures x == \\old(x);");

  Translation orig_field = translate("A.f():::EXIT", "x.f == orig(x.f)");
  REQUIRE(orig_field.ok);
  CHECK(print_clause(orig_field.clause) == "ensures x.f == \\old(x.f);");

  Translation orig_chain =
      translate("A.f(java.lang.String):::EXIT", "s.toString().equals(orig(s.toString()))");
  REQUIRE(orig_chain.ok);
  CHECK(print_clause(orig_chain.clause) == "ensures s.toString().equals(\\old(s.toString()));");

  Translation enter_ret = translate("A.f():::ENTER", "return != null");
  CHECK_FALSE(enter_ret.ok);
  CHECK(enter_ret.reason == "return-value reference outside an EXIT point");

  Translation enter_orig = translate("A.f():::ENTER", "x == orig(x)");
  CHECK_FALSE(enter_orig.ok);
  CHECK(enter_orig.reason == "pre-state reference outside an EXIT point");

  // "orig" not followed by a parenthesis is an ordinary identifier.
  Translation ident = translate("A.f():::ENTER", "orig == 1");
  REQUIRE(ident.ok);
  CHECK(print_clause(ident.clause) == "requires orig == 1;");

  // Words inside string literals are never rewritten.
  Translation quoted = translate("A.f():::EXIT", "s.equals(\"return\")");
  REQUIRE(quoted.ok);
  CHECK(print_clause(quoted.clause) == "ensures s.equals(\"return\");");
}

TEST_CASE("one-of patterns expand to equality disjunctions") {
  Translation two = translate("A.f():::ENTER", "x one of { 1, 2 }");
  REQUIRE(two.ok);
  CHECK(print_clause(two.clause) == "requires x == 1 || x == 2;");

  Translation strings = translate("A.f():::ENTER", "kind one of { \"v4\", \"v6\" }");
  REQUIRE(strings.ok);
  CHECK(print_clause(strings.clause) == "requires kind == \"v4\" || kind == \"v6\";");

  Translation ret = translate("A.f():::EXIT", "return one of { true, false }");
  REQUIRE(ret.ok);
  CHECK(print_clause(ret.clause) == "ensures \\result == true || \\result == false;");

  CHECK(translate("A.f():::ENTER", "one of { 1 }").reason ==
        "one-of pattern with no left-hand side");
  CHECK(translate("A.f():::ENTER", "x one of { 1, 2").reason ==
        "one-of pattern missing closing brace");
  CHECK(translate("A.f():::ENTER", "x one of { }").reason == "one-of pattern with no elements");
  CHECK(translate("A.f():::ENTER", "x one of { 1 } trailing").reason ==
        "one-of pattern followed by extra text");
}

TEST_CASE("inputs outside the grammar become reasons, not errors") {
  Translation sorted = translate("A.f():::EXIT", "x[] is sorted");
  CHECK_FALSE(sorted.ok);
  CHECK(sorted.reason.find("outside the supported grammar") != std::string::npos);

  Translation weird = translate("A.f():::EXIT", "ipString has only one value");
  CHECK_FALSE(weird.ok);
  CHECK_FALSE(weird.reason.empty());
}

TEST_CASE("translated fixture clauses reparse from their printed form") {
  auto records = parse_invariant_dump(fixture_dump());
  translate_records(records);
  int translated = 0;
  for (const InvariantRecord& record : records) {
    if (!record.translation.ok) continue;
    ++translated;
    const std::string printed = print_clause(record.translation.clause);
    CAPTURE(printed);
    const SpecClause reparsed = parse_clause(printed);
    CHECK(structurally_equal(reparsed, record.translation.clause));
  }
  CHECK(translated == 62);
}

TEST_CASE("attachment matches points to anchors by name and arity") {
  SourceUnit unit = analyze_unit("Over",
                                 "class Over {\n"
                                 "  void f(int x) {}\n"
                                 "  void f(String s) {}\n"
                                 "  int g(int a, int b) { return a + b; }\n"
                                 "}\n");
  const std::string dump =
      "Over.f(java.lang.String):::ENTER\n"
      "s != null\n"
      "=====\n"
      "Over.g(int, int):::EXIT\n"
      "return >= 0\n"
      "a == orig(a)\n"
      "=====\n"
      "Over.missing():::EXIT\n"
      "return == 0\n"
      "=====\n"
      "Over:::OBJECT\n"
      "x >= 0\n";
  auto records = parse_invariant_dump(dump);
  translate_records(records);
  AttachResult result = attach_clauses(records, unit);

  REQUIRE(result.blocks.size() == 3);
  // Blocks are ordered by anchor index: class, f(String), g(int,int).
  CHECK(result.blocks[0].anchor_index == 0);
  CHECK(unit.anchors[result.blocks[0].anchor_index].kind == AnchorKind::kClassDecl);
  CHECK(result.blocks[0].block.clauses.size() == 1);

  CHECK(unit.anchors[result.blocks[1].anchor_index].signature == "f(String)");
  CHECK(print_clause(result.blocks[1].block.clauses[0]) == "requires s != null;");

  CHECK(unit.anchors[result.blocks[2].anchor_index].signature == "g(int,int)");
  REQUIRE(result.blocks[2].block.clauses.size() == 2);
  // Dump order is preserved inside the block.
  CHECK(print_clause(result.blocks[2].block.clauses[0]) == "ensures \\result >= 0;");
  CHECK(print_clause(result.blocks[2].block.clauses[1]) == "ensures a == \\old(a);");

  REQUIRE(result.unmatched.size() == 1);
  CHECK(result.unmatched[0].point.method_signature == "missing()");
  CHECK(result.unmatched[0].clause_count == 1);
  CHECK_FALSE(result.unmatched[0].message.empty());

  // Origin ids ride along into the attached clauses.
  for (const AttachedBlock& block : result.blocks) {
    for (const SpecClause& clause : block.block.clauses) {
      CHECK(clause.origin_id.size() == 16);
    }
  }
}

TEST_CASE("every translated clause is either attached or unmatched") {
  auto records = parse_invariant_dump(fixture_dump());
  translate_records(records);
  SourceUnit unit = analyze_unit("InetAddresses", fixture_source());
  AttachResult result = attach_clauses(records, unit);

  std::size_t translated = 0;
  for (const InvariantRecord& record : records) translated += record.translation.ok;
  std::size_t attached = 0;
  for (const AttachedBlock& block : result.blocks) attached += block.block.clauses.size();
  std::size_t unmatched = 0;
  for (const UnmatchedPoint& point : result.unmatched) unmatched += point.clause_count;

  CHECK(translated == attached + unmatched);
  CHECK(result.untranslatable.size() == records.size() - translated);

  // The fixture's exact shape: class + three public parse methods carry
  // blocks; the renamed helper point matches nothing.
  REQUIRE(result.blocks.size() == 4);
  CHECK(result.blocks[0].block.clauses.size() == 2);   // class constants
  CHECK(result.blocks[1].block.clauses.size() == 10);  // isInetAddress
  CHECK(result.blocks[2].block.clauses.size() == 16);  // textToNumericFormatV4
  CHECK(result.blocks[3].block.clauses.size() == 33);  // textToNumericFormatV6
  REQUIRE(result.unmatched.size() == 1);
  CHECK(result.unmatched[0].point.method_signature ==
        "ipStringToBytes(java.lang.String)");
  REQUIRE(result.untranslatable.size() == 1);
  CHECK(result.untranslatable[0].raw_text == "ipString has only one value");
}

TEST_CASE("attachment without records or anchors stays empty") {
  SourceUnit unit = analyze_unit("A", "class A { void f() {} }\n");
  CHECK(attach_clauses({}, unit).blocks.empty());

  auto records = parse_invariant_dump("B.f():::ENTER\nx == 1\n");
  translate_records(records);
  AttachResult result = attach_clauses(records, unit);
  CHECK(result.blocks.empty());
  CHECK(result.unmatched.size() == 1);
}
