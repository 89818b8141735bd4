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

#include "jmldoc/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "jmldoc/digest.hpp"
#include "jmldoc/error.hpp"

namespace jmldoc {

EvalRubric load_rubric(std::string_view text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed rubric: ") + e.what());
  }
  EvalRubric rubric;
  for (auto [key, slot] : {std::pair<const char*, std::string*>{"d1", &rubric.d1},
                           {"d2", &rubric.d2},
                           {"d3", &rubric.d3}}) {
    if (!parsed.contains(key) || !parsed[key].is_string() ||
        parsed[key].get<std::string>().empty()) {
      throw ConfigError(std::string("rubric is missing dimension \"") + key +
                        "\"");
    }
    *slot = parsed[key].get<std::string>();
  }
  return rubric;
}

EvalRubric load_rubric_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read rubric " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_rubric(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

LabelMap derive_label_map(std::string_view unit_id, int trial) {
  std::string digest =
      sha256_hex(std::string(unit_id) + "|trial|" + std::to_string(trial));
  LabelMap map;
  // First hex digit parity decides which variant sits behind label A.
  int nibble = digest.empty() ? 0 : (std::isdigit(digest[0]) ? digest[0] - '0'
                                                             : digest[0] - 'a' + 10);
  map.label_a = (nibble % 2 == 0) ? Variant::kBaseline : Variant::kJml;
  return map;
}

namespace {

std::string member_key(const MemberAnchor& anchor) {
  return anchor.kind == AnchorKind::kClassDecl ? anchor.qualified_name
                                               : anchor.signature;
}

void append_docs_section(std::string& out, const DocSet& docs,
                         const SourceUnit& unit, char label) {
  out += "## Documentation ";
  out += label;
  out += "\n\n";
  for (const DocEntry& entry : docs.entries) {
    out += "### ";
    out += member_key(unit.anchors[entry.anchor_index]);
    out += "\n";
    out += entry.javadoc;
    out += "\n\n";
  }
}

}  // namespace

std::vector<std::string> expected_members(const DocSet& jml_docs,
                                          const DocSet& baseline_docs,
                                          const SourceUnit& unit) {
  std::vector<std::string> members;
  for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
    if (jml_docs.doc_for(i) != nullptr && baseline_docs.doc_for(i) != nullptr) {
      members.push_back(member_key(unit.anchors[i]));
    }
  }
  return members;
}

std::string build_eval_prompt(const DocSet& jml_docs,
                              const DocSet& baseline_docs,
                              const std::vector<AttachedBlock>& specs,
                              const SourceUnit& unit, const EvalRubric& rubric,
                              const LabelMap& labels) {
  if (jml_docs.unit_id != baseline_docs.unit_id ||
      jml_docs.unit_id != unit.identifier) {
    throw Error("documentation sets refer to different units: \"" +
                jml_docs.unit_id + "\" vs \"" + baseline_docs.unit_id +
                "\" (unit \"" + unit.identifier + "\")");
  }

  std::string prompt;
  prompt +=
      "You are judging two Javadoc variants, A and B, written for the same "
      "Java class. Score them independently and honestly; the variants are "
      "presented in arbitrary order.\n\n";

  prompt += "## Class source\n\n";
  prompt += unit.text;
  if (prompt.back() != '\n') prompt += "\n";
  prompt += "\n";

  prompt += "## Reference contracts\n\n";
  if (specs.empty()) {
    prompt += "(none available for this class)\n\n";
  } else {
    prompt +=
        "Each clause below is a verified fact about the member it is listed "
        "under.\n\n";
    for (const AttachedBlock& attached : specs) {
      prompt += member_key(unit.anchors[attached.anchor_index]);
      prompt += ":\n";
      prompt += print_spec_block(attached.block, 0);
      prompt += "\n\n";
    }
  }

  const DocSet& docs_a =
      labels.label_a == Variant::kJml ? jml_docs : baseline_docs;
  const DocSet& docs_b =
      labels.label_a == Variant::kJml ? baseline_docs : jml_docs;
  append_docs_section(prompt, docs_a, unit, 'A');
  append_docs_section(prompt, docs_b, unit, 'B');

  prompt += "## Scoring dimensions\n\n";
  prompt += "D1 (contract accuracy): " + rubric.d1 + "\n";
  prompt += "D2 (completeness): " + rubric.d2 + "\n";
  prompt += "D3 (semantic similarity): " + rubric.d3 + "\n\n";

  prompt += "## Output format\n\n";
  prompt +=
      "Answer with one JSON object and no other text:\n"
      "{\"members\": [{\"member\": \"<key>\", \"a\": {\"d1\": <0-100>, "
      "\"d2\": <0-100>}, \"b\": {\"d1\": <0-100>, \"d2\": <0-100>}, "
      "\"d3\": <0-100>}]}\n"
      "All scores are integers. D1 and D2 are scored per variant; D3 is one "
      "score for the pair. Score exactly these members, in this order:\n";
  for (const std::string& member :
       expected_members(jml_docs, baseline_docs, unit)) {
    prompt += "- " + member + "\n";
  }
  return prompt;
}

namespace {

int checked_score(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    throw InvalidTrialError("score for " + where + " is not an integer");
  }
  int score = value.get<int>();
  if (score < 0 || score > 100) {
    throw InvalidTrialError("score " + std::to_string(score) + " for " +
                            where + " is outside [0, 100]");
  }
  return score;
}

}  // namespace

TrialScore parse_scores(const std::string& response, const EvalContext& ctx) {
  std::size_t open = response.find('{');
  std::size_t close = response.rfind('}');
  if (open == std::string::npos || close == std::string::npos ||
      close < open) {
    throw InvalidTrialError("response contains no JSON object");
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(response.substr(open, close - open + 1));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidTrialError(std::string("response is not valid JSON: ") +
                            e.what());
  }
  if (!parsed.is_object() || !parsed.contains("members") ||
      !parsed["members"].is_array()) {
    throw InvalidTrialError("response lacks a \"members\" array");
  }

  std::unordered_map<std::string, MemberScore> scored;
  for (const nlohmann::json& entry : parsed["members"]) {
    if (!entry.is_object() || !entry.contains("member") ||
        !entry["member"].is_string()) {
      throw InvalidTrialError("member entry lacks a \"member\" key");
    }
    std::string key = entry["member"].get<std::string>();
    if (scored.count(key) != 0) {
      throw InvalidTrialError("member \"" + key + "\" scored twice");
    }
    if (std::find(ctx.members.begin(), ctx.members.end(), key) ==
        ctx.members.end()) {
      throw InvalidTrialError("unexpected member \"" + key + "\"");
    }
    if (!entry.contains("a") || !entry["a"].is_object() ||
        !entry.contains("b") || !entry["b"].is_object() ||
        !entry.contains("d3")) {
      throw InvalidTrialError("member \"" + key +
                              "\" lacks \"a\", \"b\", or \"d3\"");
    }
    int a_d1 = checked_score(entry["a"].value("d1", nlohmann::json()),
                             key + " A/D1");
    int a_d2 = checked_score(entry["a"].value("d2", nlohmann::json()),
                             key + " A/D2");
    int b_d1 = checked_score(entry["b"].value("d1", nlohmann::json()),
                             key + " B/D1");
    int b_d2 = checked_score(entry["b"].value("d2", nlohmann::json()),
                             key + " B/D2");
    int d3 = checked_score(entry["d3"], key + " D3");

    MemberScore score;
    score.member = key;
    bool a_is_jml = ctx.labels.label_a == Variant::kJml;
    score.jml_d1 = a_is_jml ? a_d1 : b_d1;
    score.jml_d2 = a_is_jml ? a_d2 : b_d2;
    score.no_jml_d1 = a_is_jml ? b_d1 : a_d1;
    score.no_jml_d2 = a_is_jml ? b_d2 : a_d2;
    score.d3 = d3;
    scored.emplace(key, std::move(score));
  }

  TrialScore trial;
  trial.trial = ctx.trial;
  for (const std::string& member : ctx.members) {
    auto it = scored.find(member);
    if (it == scored.end()) {
      throw InvalidTrialError("member \"" + member +
                              "\" missing from response");
    }
    trial.members.push_back(it->second);
  }
  return trial;
}

EvalRunResult run_eval_trials(const DocSet& jml_docs,
                              const DocSet& baseline_docs,
                              const std::vector<AttachedBlock>& specs,
                              const SourceUnit& unit, const EvalRubric& rubric,
                              const EvalConfig& config, Transport& transport) {
  if (config.trials < 1) {
    throw ConfigError("analyzer trial count must be >= 1");
  }
  EvalRunResult result;
  for (int trial = 0; trial < config.trials; ++trial) {
    EvalContext ctx;
    ctx.labels = derive_label_map(unit.identifier, trial);
    ctx.members = expected_members(jml_docs, baseline_docs, unit);
    ctx.trial = trial;
    std::string prompt = build_eval_prompt(jml_docs, baseline_docs, specs,
                                           unit, rubric, ctx.labels);

    std::string last_error;
    bool done = false;
    for (int attempt = 0; attempt <= config.max_retries_per_trial; ++attempt) {
      TransportRequest request;
      request.model = config.model;
      request.messages.push_back({"user", prompt});
      request.temperature = config.temperature;
      request.max_output_tokens = config.max_output_tokens;
      request.tag = unit.identifier + "/eval/trial" + std::to_string(trial);
      if (attempt > 0) {
        request.tag += "/retry" + std::to_string(attempt);
      }
      std::string response = transport.send(request);
      try {
        result.trials.push_back(parse_scores(response, ctx));
        EvalTrialMeta meta;
        meta.trial = trial;
        meta.label_a = ctx.labels.label_a;
        meta.request_hash = hash_request(request);
        meta.attempts = attempt + 1;
        result.meta.push_back(std::move(meta));
        done = true;
        break;
      } catch (const InvalidTrialError& e) {
        last_error = e.what();
      }
    }
    if (!done) {
      throw Error("analyzer trial " + std::to_string(trial) + " for \"" +
                  unit.identifier + "\" stayed invalid after " +
                  std::to_string(config.max_retries_per_trial + 1) +
                  " attempts: " + last_error);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

int round_half_up(double value) {
  return static_cast<int>(std::floor(value + 0.5));
}

namespace {

AggregateCell make_cell(const std::vector<double>& values) {
  AggregateCell cell;
  double sum = 0.0;
  cell.min = values.front();
  cell.max = values.front();
  for (double v : values) {
    sum += v;
    cell.min = std::min(cell.min, v);
    cell.max = std::max(cell.max, v);
  }
  cell.raw_mean = sum / static_cast<double>(values.size());
  cell.rounded = round_half_up(cell.raw_mean);
  return cell;
}

}  // namespace

AggregateScore aggregate(const std::vector<TrialScore>& trials) {
  if (trials.empty()) {
    throw Error("cannot aggregate zero valid trials");
  }
  const std::vector<MemberScore>& first = trials.front().members;
  for (const TrialScore& trial : trials) {
    if (trial.members.size() != first.size()) {
      throw Error("trials cover different member sets");
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (trial.members[i].member != first[i].member) {
        throw Error("trials cover different member sets");
      }
    }
  }

  AggregateScore agg;
  agg.trial_count = static_cast<int>(trials.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    MemberAggregate member;
    member.member = first[i].member;
    std::vector<double> no_jml_d1, no_jml_d2, jml_d1, jml_d2, d3;
    for (const TrialScore& trial : trials) {
      const MemberScore& score = trial.members[i];
      no_jml_d1.push_back(score.no_jml_d1);
      no_jml_d2.push_back(score.no_jml_d2);
      jml_d1.push_back(score.jml_d1);
      jml_d2.push_back(score.jml_d2);
      d3.push_back(score.d3);
    }
    member.no_jml_d1 = make_cell(no_jml_d1);
    member.no_jml_d2 = make_cell(no_jml_d2);
    member.jml_d1 = make_cell(jml_d1);
    member.jml_d2 = make_cell(jml_d2);
    member.d3 = make_cell(d3);
    agg.members.push_back(std::move(member));
  }
  return agg;
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

namespace {

nlohmann::json cell_json(const AggregateCell& cell) {
  return nlohmann::json{{"raw_mean", cell.raw_mean},
                        {"rounded", cell.rounded},
                        {"min", cell.min},
                        {"max", cell.max}};
}

void push_cell_record(nlohmann::json& cells, const std::string& member,
                      const char* variant, const char* dimension,
                      const AggregateCell& cell, int trial_count) {
  cells.push_back(nlohmann::json{{"member", member},
                                 {"variant", variant},
                                 {"dimension", dimension},
                                 {"raw_mean", cell.raw_mean},
                                 {"rounded", cell.rounded},
                                 {"trials", trial_count}});
}

}  // namespace

ReportFiles emit_report(const AggregateScore& agg,
                        const std::vector<ReportMemberMeta>& meta,
                        const ReportProvenance& provenance,
                        const std::string& unit_id) {
  std::map<std::string, ReportMemberMeta> meta_by_member;
  for (const ReportMemberMeta& m : meta) {
    meta_by_member[m.member] = m;
  }
  auto meta_of = [&](const std::string& member) {
    auto it = meta_by_member.find(member);
    if (it != meta_by_member.end()) return it->second;
    ReportMemberMeta fallback;
    fallback.member = member;
    fallback.label = member;
    return fallback;
  };

  std::vector<const MemberAggregate*> method_rows;
  const MemberAggregate* class_row = nullptr;
  for (const MemberAggregate& member : agg.members) {
    if (meta_of(member.member).is_class) {
      class_row = &member;
    } else {
      method_rows.push_back(&member);
    }
  }

  // Markdown table.
  std::ostringstream md;
  md << "# Documentation comparison: " << unit_id << "\n\n";
  md << "Judge scores on a 0-100 scale, averaged over " << agg.trial_count
     << " analyzer trial" << (agg.trial_count == 1 ? "" : "s")
     << " and rounded half-up for display (raw means are in the "
        "machine-readable report). D1 measures contract accuracy, D2 "
        "completeness, and D3 the semantic similarity between the two "
        "variants.\n\n";
  md << "| Method | NO-JML D1 | NO-JML D2 | JML D1 | JML D2 | D3 | # "
        "Invariants |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const MemberAggregate* row : method_rows) {
    ReportMemberMeta m = meta_of(row->member);
    md << "| " << m.label << " | " << row->no_jml_d1.rounded << " | "
       << row->no_jml_d2.rounded << " | " << row->jml_d1.rounded << " | "
       << row->jml_d2.rounded << " | " << row->d3.rounded << " | "
       << m.invariant_count << " |\n";
  }

  md << "\n## Class documentation completeness\n\n";
  double mean_no_jml = 0.0;
  double mean_jml = 0.0;
  if (!method_rows.empty()) {
    for (const MemberAggregate* row : method_rows) {
      mean_no_jml += row->no_jml_d2.raw_mean;
      mean_jml += row->jml_d2.raw_mean;
    }
    mean_no_jml /= static_cast<double>(method_rows.size());
    mean_jml /= static_cast<double>(method_rows.size());
  }
  if (class_row != nullptr) {
    md << "Headline (dedicated class-level Javadoc score): JML "
       << class_row->jml_d2.rounded << " vs NO-JML "
       << class_row->no_jml_d2.rounded << ".\n\n";
  } else {
    md << "No class-level Javadoc was scored for this unit.\n\n";
  }
  md << "| Measure | NO-JML D2 | JML D2 |\n|---|---|---|\n";
  if (class_row != nullptr) {
    md << "| Class-level Javadoc (headline) | " << class_row->no_jml_d2.rounded
       << " | " << class_row->jml_d2.rounded << " |\n";
  }
  if (!method_rows.empty()) {
    md << "| Mean over method members (alternative aggregation) | "
       << round_half_up(mean_no_jml) << " | " << round_half_up(mean_jml)
       << " |\n";
  }
  md << "\nThe dedicated class-doc score is the headline; the mean over "
        "method members is emitted for comparison because the aggregation "
        "choice is not fixed by the protocol.\n";

  std::vector<std::string> zero_invariant;
  for (const MemberAggregate& member : agg.members) {
    if (meta_of(member.member).invariant_count == 0) {
      zero_invariant.push_back(meta_of(member.member).label);
    }
  }
  if (!zero_invariant.empty()) {
    md << "\n## Warnings\n\n";
    md << "No verified invariants were attached to:";
    for (const std::string& name : zero_invariant) md << " " << name;
    md << ". The JML variant degenerates to the baseline for these "
          "members.\n";
  }

  md << "\n## Provenance\n\n";
  md << "- generator model: " << provenance.generator_model << "\n";
  md << "- analyzer model: " << provenance.analyzer_model << "\n";
  md << "- analyzer trials: " << provenance.analyzer_trials
     << " (generator trials: " << provenance.generator_trials << ")\n";
  md << "- template hashes: baseline " << provenance.baseline_template_hash
     << ", jml " << provenance.jml_template_hash << "\n";
  md << "- rubric hash: " << provenance.rubric_hash << "\n";
  md << "- config hash: " << provenance.config_hash << "\n";

  // Machine-readable mirror.
  nlohmann::json machine;
  machine["unit"] = unit_id;
  machine["trial_count"] = agg.trial_count;
  machine["provenance"] = {
      {"generator_model", provenance.generator_model},
      {"analyzer_model", provenance.analyzer_model},
      {"baseline_template_hash", provenance.baseline_template_hash},
      {"jml_template_hash", provenance.jml_template_hash},
      {"rubric_hash", provenance.rubric_hash},
      {"config_hash", provenance.config_hash},
      {"generator_trials", provenance.generator_trials},
      {"analyzer_trials", provenance.analyzer_trials}};

  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json cells = nlohmann::json::array();
  for (const MemberAggregate& member : agg.members) {
    ReportMemberMeta m = meta_of(member.member);
    rows.push_back(nlohmann::json{
        {"member", member.member},
        {"label", m.label},
        {"kind", m.is_class ? "class" : "method"},
        {"invariants", m.invariant_count},
        {"no_jml_d1", cell_json(member.no_jml_d1)},
        {"no_jml_d2", cell_json(member.no_jml_d2)},
        {"jml_d1", cell_json(member.jml_d1)},
        {"jml_d2", cell_json(member.jml_d2)},
        {"d3", cell_json(member.d3)}});
    push_cell_record(cells, member.member, "no-jml", "d1", member.no_jml_d1,
                     agg.trial_count);
    push_cell_record(cells, member.member, "no-jml", "d2", member.no_jml_d2,
                     agg.trial_count);
    push_cell_record(cells, member.member, "jml", "d1", member.jml_d1,
                     agg.trial_count);
    push_cell_record(cells, member.member, "jml", "d2", member.jml_d2,
                     agg.trial_count);
    push_cell_record(cells, member.member, "pair", "d3", member.d3,
                     agg.trial_count);
  }
  machine["rows"] = std::move(rows);
  machine["cells"] = std::move(cells);

  nlohmann::json class_summary;
  class_summary["policy"] =
      "dedicated class-doc score is the headline; member mean is the "
      "alternative aggregation";
  if (class_row != nullptr) {
    class_summary["headline"] = {{"member", class_row->member},
                                 {"no_jml_d2", cell_json(class_row->no_jml_d2)},
                                 {"jml_d2", cell_json(class_row->jml_d2)}};
  } else {
    class_summary["headline"] = nullptr;
  }
  if (!method_rows.empty()) {
    class_summary["member_mean"] = {
        {"no_jml_d2_raw", mean_no_jml},
        {"jml_d2_raw", mean_jml},
        {"no_jml_d2_rounded", round_half_up(mean_no_jml)},
        {"jml_d2_rounded", round_half_up(mean_jml)}};
  } else {
    class_summary["member_mean"] = nullptr;
  }
  machine["class_summary"] = std::move(class_summary);

  nlohmann::json warnings = nlohmann::json::array();
  for (const std::string& name : zero_invariant) {
    warnings.push_back("no verified invariants attached to " + name);
  }
  machine["warnings"] = std::move(warnings);

  ReportFiles files;
  files.markdown = md.str();
  files.machine_json = machine.dump(2) + "\n";
  return files;
}

}  // namespace jmldoc
