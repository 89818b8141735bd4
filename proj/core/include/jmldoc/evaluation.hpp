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

#ifndef JMLDOC_EVALUATION_HPP_
#define JMLDOC_EVALUATION_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/docgen.hpp"
#include "jmldoc/invariant_ingest.hpp"
#include "jmldoc/source_model.hpp"
#include "jmldoc/transport.hpp"

namespace jmldoc {

// Judge instructions for the three dimensions: D1 contract accuracy,
// D2 completeness, D3 semantic similarity between the two variants.
struct EvalRubric {
  std::string d1;
  std::string d2;
  std::string d3;
};

// Rubric file: JSON object with string fields "d1", "d2", "d3".
EvalRubric load_rubric(std::string_view text);
EvalRubric load_rubric_file(const std::filesystem::path& path);

// Which variant hides behind label A for one trial. Derived from a content
// hash so replayed runs randomize positions the same way every time.
struct LabelMap {
  Variant label_a = Variant::kBaseline;

  Variant variant_of(char label) const {
    if (label == 'A') return label_a;
    return label_a == Variant::kBaseline ? Variant::kJml : Variant::kBaseline;
  }
  char label_of(Variant variant) const {
    return variant == label_a ? 'A' : 'B';
  }
};

LabelMap derive_label_map(std::string_view unit_id, int trial);

// A trial response that violates the output schema. The caller retries the
// trial a bounded number of times before giving up.
class InvalidTrialError : public Error {
 public:
  explicit InvalidTrialError(const std::string& message) : Error(message) {}
};

struct MemberScore {
  std::string member;  // method signature or class qualified name
  int no_jml_d1 = 0;
  int no_jml_d2 = 0;
  int jml_d1 = 0;
  int jml_d2 = 0;
  int d3 = 0;
};

struct TrialScore {
  int trial = 0;
  std::vector<MemberScore> members;  // expected-member order
};

// Builds the analyzer prompt: class source, both documentation variants
// under neutral A/B labels, the retained spec blocks (D1 ground truth), the
// rubric, and the output schema naming every expected member.
// Throws when the DocSets disagree about the unit.
std::string build_eval_prompt(const DocSet& jml_docs,
                              const DocSet& baseline_docs,
                              const std::vector<AttachedBlock>& specs,
                              const SourceUnit& unit, const EvalRubric& rubric,
                              const LabelMap& labels);

// Member keys scored in an eval: anchors documented in both variants,
// in anchor order. Method keys are signatures; the class key is its name.
std::vector<std::string> expected_members(const DocSet& jml_docs,
                                          const DocSet& baseline_docs,
                                          const SourceUnit& unit);

struct EvalContext {
  LabelMap labels;
  std::vector<std::string> members;  // expected member keys
  int trial = 0;
};

// Parses the judge's JSON answer, de-randomizes A/B back to variants, and
// range-checks every score. Schema violations raise InvalidTrialError.
TrialScore parse_scores(const std::string& response, const EvalContext& ctx);

struct EvalConfig {
  std::string model;
  std::string endpoint;
  double temperature = 0.0;
  int max_output_tokens = 2048;
  int trials = 3;
  int max_retries_per_trial = 2;
};

struct EvalTrialMeta {
  int trial = 0;
  Variant label_a = Variant::kBaseline;  // variant shown as "A" this trial
  std::string request_hash;              // hash of the accepted attempt
  int attempts = 1;
};

struct EvalRunResult {
  std::vector<TrialScore> trials;
  std::vector<EvalTrialMeta> meta;  // one entry per trial
};

// Runs the configured number of analyzer trials, retrying invalid trials up
// to the limit and aborting with a diagnostic after that. The label map and
// request tag vary per trial and per retry; both are recorded in the result
// so reports can audit the position randomization.
EvalRunResult run_eval_trials(const DocSet& jml_docs,
                              const DocSet& baseline_docs,
                              const std::vector<AttachedBlock>& specs,
                              const SourceUnit& unit, const EvalRubric& rubric,
                              const EvalConfig& config, Transport& transport);

// ---------------------------------------------------------------------------
// Aggregation and reporting
// ---------------------------------------------------------------------------

struct AggregateCell {
  double raw_mean = 0.0;
  int rounded = 0;
  double min = 0.0;
  double max = 0.0;
};

struct MemberAggregate {
  std::string member;
  AggregateCell no_jml_d1;
  AggregateCell no_jml_d2;
  AggregateCell jml_d1;
  AggregateCell jml_d2;
  AggregateCell d3;
};

struct AggregateScore {
  std::vector<MemberAggregate> members;
  int trial_count = 0;
};

// Round-half-up used for every displayed cell: 84.5 -> 85.
int round_half_up(double value);

// Arithmetic mean per cell across trials. All trials must cover the same
// member set; zero trials is an error.
AggregateScore aggregate(const std::vector<TrialScore>& trials);

struct ReportMemberMeta {
  std::string member;      // key matching MemberAggregate::member
  std::string label;       // display name, e.g. "isInetAddress"
  bool is_class = false;
  std::size_t invariant_count = 0;  // clauses in the retained block
};

struct ReportProvenance {
  std::string generator_model;
  std::string analyzer_model;
  std::string baseline_template_hash;
  std::string jml_template_hash;
  std::string rubric_hash;
  std::string config_hash;
  int generator_trials = 1;
  int analyzer_trials = 3;
};

struct ReportFiles {
  std::string markdown;      // human-readable table
  std::string machine_json;  // identical values, one record per cell
};

// Emits the comparison table (method rows: NO-JML D1/D2, JML D1/D2, D3,
// invariant count) plus the class-level completeness summary. The dedicated
// class-doc score is the headline; the mean over method members is emitted
// alongside and flagged as the alternative aggregation.
ReportFiles emit_report(const AggregateScore& agg,
                        const std::vector<ReportMemberMeta>& meta,
                        const ReportProvenance& provenance,
                        const std::string& unit_id);

}  // namespace jmldoc

#endif  // JMLDOC_EVALUATION_HPP_
