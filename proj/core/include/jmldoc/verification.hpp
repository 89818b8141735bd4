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

#ifndef JMLDOC_VERIFICATION_HPP_
#define JMLDOC_VERIFICATION_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/invariant_ingest.hpp"

namespace jmldoc {

enum class VerdictStatus {
  kProved,
  kOpen,
  kFailed,
  kTimeout,
};

std::string_view verdict_status_name(VerdictStatus status);

// One prover outcome for one proof obligation; the id matches the
// InvariantRecord id of the clause the obligation came from.
struct VerificationVerdict {
  std::string id;
  VerdictStatus status = VerdictStatus::kOpen;
  std::string note;
};

// Parses a verdict file: one JSON object per line with fields "id",
// "status" (proved | open | failed | timeout) and optional "note".
// Rejects unknown statuses and duplicate ids.
std::vector<VerificationVerdict> parse_verdicts(std::string_view text);

struct DroppedClause {
  std::size_t anchor_index = 0;
  std::string origin_id;
  std::string clause_text;
  std::string reason;  // "unverified" or the non-proved status name
};

struct FilterResult {
  std::vector<AttachedBlock> blocks;  // only clauses proved; empty blocks gone
  std::vector<DroppedClause> dropped;
};

// Keeps a clause iff a verdict with its origin id exists and says proved.
// Clause order is preserved; anchors whose blocks empty out disappear.
FilterResult filter_blocks(const std::vector<AttachedBlock>& blocks,
                           const std::vector<VerificationVerdict>& verdicts);

}  // namespace jmldoc

#endif  // JMLDOC_VERIFICATION_HPP_
