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

#include "jmldoc/verification.hpp"

#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "jmldoc/error.hpp"

namespace jmldoc {

std::string_view verdict_status_name(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kProved:
      return "proved";
    case VerdictStatus::kOpen:
      return "open";
    case VerdictStatus::kFailed:
      return "failed";
    case VerdictStatus::kTimeout:
      return "timeout";
  }
  return "";
}

namespace {

VerdictStatus status_from_name(const std::string& name, std::size_t line_no) {
  if (name == "proved") return VerdictStatus::kProved;
  if (name == "open") return VerdictStatus::kOpen;
  if (name == "failed") return VerdictStatus::kFailed;
  if (name == "timeout") return VerdictStatus::kTimeout;
  throw ParseError("unknown verdict status \"" + name + "\"",
                   SourcePos{line_no, 1});
}

}  // namespace

std::vector<VerificationVerdict> parse_verdicts(std::string_view text) {
  std::vector<VerificationVerdict> verdicts;
  std::unordered_set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::size_t b = 0;
    std::size_t e = line.size();
    while (b < e && (line[b] == ' ' || line[b] == '\t' || line[b] == '\r')) ++b;
    while (e > b &&
           (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) {
      --e;
    }
    if (b == e) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line.substr(b, e - b));
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(std::string("malformed verdict record: ") + err.what(),
                       SourcePos{line_no, 1});
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("status") ||
        !obj["id"].is_string() || !obj["status"].is_string()) {
      throw ParseError(
          "malformed verdict record: expected object with \"id\" and "
          "\"status\" strings",
          SourcePos{line_no, 1});
    }
    VerificationVerdict verdict;
    verdict.id = obj["id"].get<std::string>();
    verdict.status =
        status_from_name(obj["status"].get<std::string>(), line_no);
    if (obj.contains("note")) {
      if (!obj["note"].is_string()) {
        throw ParseError("malformed verdict record: \"note\" must be a string",
                         SourcePos{line_no, 1});
      }
      verdict.note = obj["note"].get<std::string>();
    }
    if (!seen.insert(verdict.id).second) {
      throw ParseError("duplicate obligation id \"" + verdict.id + "\"",
                       SourcePos{line_no, 1});
    }
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

FilterResult filter_blocks(const std::vector<AttachedBlock>& blocks,
                           const std::vector<VerificationVerdict>& verdicts) {
  std::unordered_map<std::string, VerdictStatus> by_id;
  for (const VerificationVerdict& verdict : verdicts) {
    by_id.emplace(verdict.id, verdict.status);
  }

  FilterResult result;
  for (const AttachedBlock& attached : blocks) {
    AttachedBlock kept;
    kept.anchor_index = attached.anchor_index;
    kept.block.target = attached.block.target;
    for (const SpecClause& clause : attached.block.clauses) {
      auto it = by_id.find(clause.origin_id);
      if (it != by_id.end() && it->second == VerdictStatus::kProved) {
        kept.block.clauses.push_back(clause);
        continue;
      }
      DroppedClause dropped;
      dropped.anchor_index = attached.anchor_index;
      dropped.origin_id = clause.origin_id;
      dropped.clause_text = print_clause(clause);
      dropped.reason = it == by_id.end()
                           ? "unverified"
                           : std::string(verdict_status_name(it->second));
      result.dropped.push_back(std::move(dropped));
    }
    if (!kept.block.clauses.empty()) {
      result.blocks.push_back(std::move(kept));
    }
  }
  return result;
}

}  // namespace jmldoc
