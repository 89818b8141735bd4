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

#include "jmldoc/pipeline.hpp"

#include <array>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "jmldoc/digest.hpp"
#include "jmldoc/invariant_ingest.hpp"
#include "jmldoc/jml.hpp"
#include "jmldoc/source_model.hpp"
#include "jmldoc/verification.hpp"

namespace jmldoc {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Stage names
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 7> kStageNames{{
    {Stage::kStrip, "strip"},
    {Stage::kIngest, "ingest"},
    {Stage::kAnnotate, "annotate"},
    {Stage::kFilter, "filter"},
    {Stage::kGen, "gen"},
    {Stage::kEval, "eval"},
    {Stage::kReport, "report"},
}};

}  // namespace

Stage stage_from_name(std::string_view name) {
  for (const auto& [stage, stage_str] : kStageNames) {
    if (stage_str == name) return stage;
  }
  throw ConfigError("unknown stage \"" + std::string(name) + "\"");
}

std::string_view stage_name(Stage stage) {
  for (const auto& [s, name] : kStageNames) {
    if (s == stage) return name;
  }
  return "";
}

// ---------------------------------------------------------------------------
// Config loading
// ---------------------------------------------------------------------------

namespace {

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_string() ||
      obj[key].get<std::string>().empty()) {
    throw ConfigError("config: " + ctx + "." + key +
                      " must be a nonempty string");
  }
  return obj[key].get<std::string>();
}

std::string optional_string(const nlohmann::json& obj, const char* key,
                            const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) return fallback;
  return obj[key].get<std::string>();
}

double optional_number(const nlohmann::json& obj, const char* key,
                       double fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError("config: " + ctx + "." + key + " must be a number");
  }
  return obj[key].get<double>();
}

int optional_int(const nlohmann::json& obj, const char* key, int fallback,
                 const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError("config: " + ctx + "." + key + " must be an integer");
  }
  return obj[key].get<int>();
}

fs::path resolve_against(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config " + path.string() + " must be a JSON object");
  }

  fs::path base = path.parent_path();
  PipelineConfig config;

  if (!doc.contains("generator") || !doc["generator"].is_object()) {
    throw ConfigError("config: missing \"generator\" object");
  }
  const nlohmann::json& gen = doc["generator"];
  config.generator.model = require_string(gen, "model", "generator");
  config.generator.endpoint = optional_string(gen, "endpoint", "");
  config.generator.temperature =
      optional_number(gen, "temperature", 0.0, "generator");
  config.generator.max_output_tokens =
      optional_int(gen, "max_output_tokens", 4096, "generator");
  config.generator.trials = optional_int(gen, "trials", 1, "generator");

  if (!doc.contains("analyzer") || !doc["analyzer"].is_object()) {
    throw ConfigError("config: missing \"analyzer\" object");
  }
  const nlohmann::json& ana = doc["analyzer"];
  config.analyzer.model = require_string(ana, "model", "analyzer");
  config.analyzer.endpoint = optional_string(ana, "endpoint", "");
  config.analyzer.temperature =
      optional_number(ana, "temperature", 0.0, "analyzer");
  config.analyzer.max_output_tokens =
      optional_int(ana, "max_output_tokens", 2048, "analyzer");
  config.analyzer.trials = optional_int(ana, "trials", 3, "analyzer");
  config.analyzer.max_retries_per_trial =
      optional_int(ana, "max_retries_per_trial", 2, "analyzer");

  if (!doc.contains("templates") || !doc["templates"].is_object()) {
    throw ConfigError("config: missing \"templates\" object");
  }
  config.baseline_template = resolve_against(
      base, require_string(doc["templates"], "baseline", "templates"));
  config.jml_template = resolve_against(
      base, require_string(doc["templates"], "jml", "templates"));
  config.rubric = resolve_against(base, require_string(doc, "rubric", ""));

  if (!doc.contains("cassette") || !doc["cassette"].is_object()) {
    throw ConfigError("config: missing \"cassette\" object");
  }
  config.mode = cassette_mode_from_name(
      optional_string(doc["cassette"], "mode", "replay"));
  config.cassette_dir = resolve_against(
      base, require_string(doc["cassette"], "dir", "cassette"));

  if (doc.contains("transport")) {
    const nlohmann::json& tr = doc["transport"];
    config.transport_retries = optional_int(tr, "retries", 2, "transport");
    config.transport_backoff_ms =
        optional_int(tr, "backoff_ms", 200, "transport");
  }

  if (!doc.contains("units") || !doc["units"].is_array() ||
      doc["units"].empty()) {
    throw ConfigError("config: \"units\" must be a nonempty array");
  }
  for (const nlohmann::json& ju : doc["units"]) {
    if (!ju.is_object()) {
      throw ConfigError("config: every unit must be an object");
    }
    UnitInputs unit;
    unit.id = require_string(ju, "id", "unit");
    unit.source = resolve_against(base, require_string(ju, "source", "unit"));
    unit.dump = resolve_against(base, require_string(ju, "dump", "unit"));
    unit.verdicts =
        resolve_against(base, require_string(ju, "verdicts", "unit"));
    config.units.push_back(std::move(unit));
  }

  config.out_dir = optional_string(doc, "out_dir", "out");

  nlohmann::json basis = doc;
  basis.erase("out_dir");
  config.fingerprint_basis = basis.dump();
  return config;
}

void apply_overrides(PipelineConfig& config, const ConfigOverrides& overrides) {
  nlohmann::json basis = nlohmann::json::parse(config.fingerprint_basis);
  if (overrides.mode) {
    config.mode = cassette_mode_from_name(*overrides.mode);
    basis["cassette"]["mode"] = *overrides.mode;
  }
  if (overrides.trials) {
    config.analyzer.trials = *overrides.trials;
    basis["analyzer"]["trials"] = *overrides.trials;
  }
  if (overrides.out_dir) {
    config.out_dir = *overrides.out_dir;
  }
  config.fingerprint_basis = basis.dump();
}

void validate_config(const PipelineConfig& config) {
  if (config.generator.model.empty()) {
    throw ConfigError("config: generator model must be set");
  }
  if (config.analyzer.model.empty()) {
    throw ConfigError("config: analyzer model must be set");
  }
  if (config.generator.trials < 1) {
    throw ConfigError("config: generator trials must be >= 1");
  }
  if (config.analyzer.trials < 1) {
    throw ConfigError("config: analyzer trials must be >= 1");
  }
  if (config.generator.temperature < 0 || config.analyzer.temperature < 0) {
    throw ConfigError("config: temperature must be >= 0");
  }
  if (config.analyzer.max_retries_per_trial < 0) {
    throw ConfigError("config: analyzer max_retries_per_trial must be >= 0");
  }
  if (config.transport_retries < 0) {
    throw ConfigError("config: transport retries must be >= 0");
  }
  if (config.mode != CassetteMode::kReplay) {
    if (config.generator.endpoint.empty() || config.analyzer.endpoint.empty()) {
      throw ConfigError(
          "config: generator and analyzer endpoints are required outside "
          "replay mode");
    }
  }
  if (config.units.empty()) {
    throw ConfigError("config: at least one unit is required");
  }
  std::set<std::string> ids;
  for (const UnitInputs& unit : config.units) {
    if (unit.id.empty()) {
      throw ConfigError("config: unit ids must be nonempty");
    }
    if (!ids.insert(unit.id).second) {
      throw ConfigError("config: duplicate unit id \"" + unit.id + "\"");
    }
  }
}

std::string config_fingerprint(const PipelineConfig& config) {
  return sha256_hex16(config.fingerprint_basis);
}

// ---------------------------------------------------------------------------
// Shared stage plumbing
// ---------------------------------------------------------------------------

namespace {

std::string read_text_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StageError("cannot read " + what + " " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw StageError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw StageError("write failed for " + path.string());
  }
}

fs::path stage_dir(const PipelineConfig& config, const UnitInputs& unit,
                   Stage stage) {
  return config.out_dir / unit.id / std::string(stage_name(stage));
}

std::string read_stage_output(const PipelineConfig& config,
                              const UnitInputs& unit, Stage stage,
                              const std::string& name) {
  fs::path path = stage_dir(config, unit, stage) / name;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StageError("missing " + std::string(stage_name(stage)) + "/" + name +
                     " for unit \"" + unit.id + "\" (run the " +
                     std::string(stage_name(stage)) + " stage first)");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string stage_label(Stage stage, const std::string& name) {
  return std::string(stage_name(stage)) + "/" + name;
}

class ManifestBuilder {
 public:
  void input(const std::string& name, const std::string& path_label,
             const std::string& content) {
    inputs_[name] = {{"path", path_label}, {"sha256", sha256_hex(content)}};
  }
  void output(const std::string& name, const std::string& content) {
    outputs_[name] = sha256_hex(content);
  }
  std::string render(Stage stage, const std::string& unit_id,
                     const std::string& config_hash) const {
    nlohmann::json doc{{"stage", std::string(stage_name(stage))},
                       {"unit", unit_id},
                       {"config", config_hash},
                       {"inputs", inputs_},
                       {"outputs", outputs_}};
    return doc.dump(2) + "\n";
  }

 private:
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json outputs_ = nlohmann::json::object();
};

void finish_stage(const PipelineConfig& config, const UnitInputs& unit,
                  Stage stage, const ManifestBuilder& manifest) {
  write_text_file(stage_dir(config, unit, stage) / "manifest.json",
                  manifest.render(stage, unit.id, config_fingerprint(config)));
}

std::string member_key(const MemberAnchor& anchor) {
  return anchor.kind == AnchorKind::kClassDecl ? anchor.qualified_name
                                               : anchor.signature;
}

std::string member_label(const MemberAnchor& anchor) {
  return anchor.kind == AnchorKind::kClassDecl ? anchor.qualified_name
                                               : anchor.name();
}

Transport make_transport(const PipelineConfig& config,
                         const std::string& endpoint,
                         std::shared_ptr<HttpClient> http) {
  Cassette cassette(config.mode, config.cassette_dir);
  std::shared_ptr<HttpClient> client = std::move(http);
  if (!client) {
    client = config.mode == CassetteMode::kReplay
                 ? std::shared_ptr<HttpClient>(make_failing_http_client())
                 : std::shared_ptr<HttpClient>(make_http_client());
  }
  TransportConfig transport_config;
  transport_config.endpoint = endpoint;
  transport_config.max_retries = config.transport_retries;
  transport_config.retry_backoff_ms = config.transport_backoff_ms;
  return Transport(std::move(transport_config), std::move(cassette),
                   std::move(client));
}

// ---------------------------------------------------------------------------
// Inter-stage JSON formats
// ---------------------------------------------------------------------------

std::string save_blocks_json(const std::string& unit_id,
                             const std::vector<AttachedBlock>& blocks,
                             const SourceUnit& su) {
  nlohmann::json doc;
  doc["unit"] = unit_id;
  nlohmann::json arr = nlohmann::json::array();
  for (const AttachedBlock& attached : blocks) {
    const MemberAnchor& anchor = su.anchors[attached.anchor_index];
    nlohmann::json jb;
    jb["anchor_index"] = attached.anchor_index;
    jb["member"] = member_key(anchor);
    jb["kind"] = anchor.kind == AnchorKind::kClassDecl ? "class" : "method";
    nlohmann::json clauses = nlohmann::json::array();
    for (const SpecClause& clause : attached.block.clauses) {
      clauses.push_back(
          {{"id", clause.origin_id}, {"text", print_clause(clause)}});
    }
    jb["clauses"] = std::move(clauses);
    arr.push_back(std::move(jb));
  }
  doc["blocks"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<AttachedBlock> load_blocks_json(const std::string& text,
                                            const SourceUnit& su,
                                            const std::string& label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StageError("malformed " + label + ": " + e.what());
  }
  std::vector<AttachedBlock> blocks;
  for (const nlohmann::json& jb : doc.value("blocks", nlohmann::json::array())) {
    AttachedBlock attached;
    attached.anchor_index = jb.value("anchor_index", std::size_t(0));
    if (attached.anchor_index >= su.anchors.size()) {
      throw StageError(label + " does not match the stripped source (anchor " +
                       std::to_string(attached.anchor_index) +
                       " out of range)");
    }
    const MemberAnchor& anchor = su.anchors[attached.anchor_index];
    std::string member = jb.value("member", std::string());
    if (member != member_key(anchor)) {
      throw StageError(label + " does not match the stripped source (anchor " +
                       std::to_string(attached.anchor_index) + " is \"" +
                       member_key(anchor) + "\", file says \"" + member +
                       "\")");
    }
    attached.block.target =
        SpecTarget{anchor.kind == AnchorKind::kClassDecl ? TargetKind::kClass
                                                         : TargetKind::kMethod,
                   member_key(anchor)};
    for (const nlohmann::json& jc :
         jb.value("clauses", nlohmann::json::array())) {
      SpecClause clause = parse_clause(jc.value("text", std::string()));
      clause.origin_id = jc.value("id", std::string());
      attached.block.clauses.push_back(std::move(clause));
    }
    blocks.push_back(std::move(attached));
  }
  return blocks;
}

std::string save_docs_json(const DocSet& docs, const SourceUnit& su) {
  nlohmann::json doc;
  doc["unit"] = docs.unit_id;
  doc["variant"] = std::string(variant_name(docs.variant));
  doc["trial"] = docs.trial;
  doc["transcript_ref"] = docs.transcript_ref;
  nlohmann::json entries = nlohmann::json::array();
  for (const DocEntry& entry : docs.entries) {
    entries.push_back({{"anchor_index", entry.anchor_index},
                       {"member", member_key(su.anchors[entry.anchor_index])},
                       {"javadoc", entry.javadoc}});
  }
  doc["entries"] = std::move(entries);
  nlohmann::json undocumented = nlohmann::json::array();
  for (std::size_t idx : docs.undocumented) {
    undocumented.push_back({{"anchor_index", idx},
                            {"member", member_key(su.anchors[idx])}});
  }
  doc["undocumented"] = std::move(undocumented);
  doc["unmatched_blocks"] = docs.unmatched_blocks;
  return doc.dump(2) + "\n";
}

DocSet load_docs_json(const std::string& text, const SourceUnit& su,
                      const std::string& label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StageError("malformed " + label + ": " + e.what());
  }
  DocSet docs;
  docs.unit_id = doc.value("unit", std::string());
  docs.variant = variant_from_name(doc.value("variant", std::string()));
  docs.trial = doc.value("trial", 0);
  docs.transcript_ref = doc.value("transcript_ref", std::string());
  for (const nlohmann::json& je :
       doc.value("entries", nlohmann::json::array())) {
    DocEntry entry;
    entry.anchor_index = je.value("anchor_index", std::size_t(0));
    if (entry.anchor_index >= su.anchors.size()) {
      throw StageError(label + " does not match the stripped source (anchor " +
                       std::to_string(entry.anchor_index) + " out of range)");
    }
    std::string member = je.value("member", std::string());
    if (member != member_key(su.anchors[entry.anchor_index])) {
      throw StageError(label +
                       " does not match the stripped source (member \"" +
                       member + "\")");
    }
    entry.javadoc = je.value("javadoc", std::string());
    docs.entries.push_back(std::move(entry));
  }
  for (const nlohmann::json& ju :
       doc.value("undocumented", nlohmann::json::array())) {
    docs.undocumented.push_back(ju.value("anchor_index", std::size_t(0)));
  }
  for (const nlohmann::json& jb :
       doc.value("unmatched_blocks", nlohmann::json::array())) {
    if (jb.is_string()) docs.unmatched_blocks.push_back(jb.get<std::string>());
  }
  return docs;
}

std::string save_trials_json(const std::string& unit_id,
                             const EvalRunResult& result) {
  nlohmann::json doc;
  doc["unit"] = unit_id;
  doc["analyzer_trials"] = result.trials.size();
  nlohmann::json labels = nlohmann::json::array();
  nlohmann::json requests = nlohmann::json::array();
  for (const EvalTrialMeta& meta : result.meta) {
    labels.push_back({{"trial", meta.trial},
                      {"label_a", std::string(variant_name(meta.label_a))}});
    requests.push_back({{"trial", meta.trial},
                        {"hash", meta.request_hash},
                        {"attempts", meta.attempts}});
  }
  doc["label_maps"] = std::move(labels);
  doc["requests"] = std::move(requests);
  nlohmann::json trials = nlohmann::json::array();
  for (const TrialScore& trial : result.trials) {
    nlohmann::json members = nlohmann::json::array();
    for (const MemberScore& score : trial.members) {
      members.push_back({{"member", score.member},
                         {"no_jml_d1", score.no_jml_d1},
                         {"no_jml_d2", score.no_jml_d2},
                         {"jml_d1", score.jml_d1},
                         {"jml_d2", score.jml_d2},
                         {"d3", score.d3}});
    }
    trials.push_back({{"trial", trial.trial}, {"members", std::move(members)}});
  }
  doc["trials"] = std::move(trials);
  return doc.dump(2) + "\n";
}

std::vector<TrialScore> load_trials_json(const std::string& text,
                                         const std::string& label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StageError("malformed " + label + ": " + e.what());
  }
  std::vector<TrialScore> trials;
  for (const nlohmann::json& jt :
       doc.value("trials", nlohmann::json::array())) {
    TrialScore trial;
    trial.trial = jt.value("trial", 0);
    for (const nlohmann::json& jm :
         jt.value("members", nlohmann::json::array())) {
      MemberScore score;
      score.member = jm.value("member", std::string());
      score.no_jml_d1 = jm.value("no_jml_d1", 0);
      score.no_jml_d2 = jm.value("no_jml_d2", 0);
      score.jml_d1 = jm.value("jml_d1", 0);
      score.jml_d2 = jm.value("jml_d2", 0);
      score.d3 = jm.value("d3", 0);
      trial.members.push_back(std::move(score));
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

void run_strip(const PipelineConfig& config, const UnitInputs& unit) {
  std::string source_text = read_text_file(unit.source, "source");
  SourceUnit raw = make_unit(unit.id, source_text);
  SourceUnit stripped = strip_comments(raw, /*keep_jml=*/false);

  write_text_file(stage_dir(config, unit, Stage::kStrip) / "stripped.java",
                  stripped.text);

  ManifestBuilder manifest;
  manifest.input("source", unit.source.string(), source_text);
  manifest.output("stripped.java", stripped.text);
  finish_stage(config, unit, Stage::kStrip, manifest);
}

void run_ingest(const PipelineConfig& config, const UnitInputs& unit) {
  std::string dump_text = read_text_file(unit.dump, "invariant dump");
  std::vector<InvariantRecord> records = parse_invariant_dump(dump_text);
  translate_records(records);

  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  SourceUnit su = analyze_unit(unit.id, stripped_text);
  AttachResult attach = attach_clauses(records, su);

  nlohmann::json doc;
  doc["unit"] = unit.id;
  nlohmann::json jrecords = nlohmann::json::array();
  std::size_t translated = 0;
  for (const InvariantRecord& record : records) {
    nlohmann::json jr;
    jr["id"] = record.id;
    jr["class"] = record.point.class_name;
    jr["method"] = record.point.method_signature;
    jr["point"] = std::string(point_kind_name(record.point.kind));
    jr["line"] = record.dump_line;
    jr["raw"] = record.raw_text;
    jr["translated"] = record.translation.ok;
    if (record.translation.ok) {
      ++translated;
      jr["clause"] = print_clause(record.translation.clause);
    } else {
      jr["reason"] = record.translation.reason;
    }
    jrecords.push_back(std::move(jr));
  }
  doc["records"] = std::move(jrecords);

  nlohmann::json junmatched = nlohmann::json::array();
  std::size_t unmatched_clauses = 0;
  for (const UnmatchedPoint& point : attach.unmatched) {
    unmatched_clauses += point.clause_count;
    junmatched.push_back(
        {{"class", point.point.class_name},
         {"method", point.point.method_signature},
         {"point", std::string(point_kind_name(point.point.kind))},
         {"clauses", point.clause_count},
         {"message", point.message}});
  }
  doc["unmatched_points"] = std::move(junmatched);

  std::size_t attached = 0;
  for (const AttachedBlock& block : attach.blocks) {
    attached += block.block.clauses.size();
  }
  doc["counts"] = {{"total", records.size()},
                   {"translated", translated},
                   {"attached", attached},
                   {"unmatched", unmatched_clauses},
                   {"untranslatable", attach.untranslatable.size()}};
  std::string records_json = doc.dump(2) + "\n";
  std::string blocks_json = save_blocks_json(unit.id, attach.blocks, su);

  fs::path dir = stage_dir(config, unit, Stage::kIngest);
  write_text_file(dir / "records.json", records_json);
  write_text_file(dir / "blocks.json", blocks_json);

  ManifestBuilder manifest;
  manifest.input("dump", unit.dump.string(), dump_text);
  manifest.input("stripped.java", stage_label(Stage::kStrip, "stripped.java"),
                 stripped_text);
  manifest.output("records.json", records_json);
  manifest.output("blocks.json", blocks_json);
  finish_stage(config, unit, Stage::kIngest, manifest);
}

void run_annotate(const PipelineConfig& config, const UnitInputs& unit) {
  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  std::string blocks_text =
      read_stage_output(config, unit, Stage::kIngest, "blocks.json");
  SourceUnit su = analyze_unit(unit.id, stripped_text);
  std::vector<AttachedBlock> blocks =
      load_blocks_json(blocks_text, su, "ingest/blocks.json");

  std::vector<PendingInjection> injections;
  for (const AttachedBlock& attached : blocks) {
    injections.push_back({su.anchors[attached.anchor_index],
                          print_spec_block(attached.block, 0)});
  }
  SourceUnit annotated = inject_spec_blocks(su, std::move(injections));

  write_text_file(
      stage_dir(config, unit, Stage::kAnnotate) / "annotated_all.java",
      annotated.text);

  ManifestBuilder manifest;
  manifest.input("stripped.java", stage_label(Stage::kStrip, "stripped.java"),
                 stripped_text);
  manifest.input("blocks.json", stage_label(Stage::kIngest, "blocks.json"),
                 blocks_text);
  manifest.output("annotated_all.java", annotated.text);
  finish_stage(config, unit, Stage::kAnnotate, manifest);
}

void run_filter(const PipelineConfig& config, const UnitInputs& unit) {
  std::string verdict_text = read_text_file(unit.verdicts, "verdict file");
  std::vector<VerificationVerdict> verdicts = parse_verdicts(verdict_text);

  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  std::string blocks_text =
      read_stage_output(config, unit, Stage::kIngest, "blocks.json");
  SourceUnit su = analyze_unit(unit.id, stripped_text);
  std::vector<AttachedBlock> blocks =
      load_blocks_json(blocks_text, su, "ingest/blocks.json");

  FilterResult filtered = filter_blocks(blocks, verdicts);

  std::vector<PendingInjection> injections;
  for (const AttachedBlock& attached : filtered.blocks) {
    injections.push_back({su.anchors[attached.anchor_index],
                          print_spec_block(attached.block, 0)});
  }
  SourceUnit annotated = inject_spec_blocks(su, std::move(injections));

  std::size_t input_clauses = 0;
  for (const AttachedBlock& attached : blocks) {
    input_clauses += attached.block.clauses.size();
  }
  std::size_t retained_clauses = 0;
  for (const AttachedBlock& attached : filtered.blocks) {
    retained_clauses += attached.block.clauses.size();
  }
  if (retained_clauses == 0) {
    std::cerr << "warning: unit \"" << unit.id
              << "\": no verified clauses retained; the annotated source "
                 "equals the stripped source\n";
  }

  nlohmann::json drop_doc;
  drop_doc["unit"] = unit.id;
  nlohmann::json dropped = nlohmann::json::array();
  for (const DroppedClause& d : filtered.dropped) {
    dropped.push_back({{"anchor_index", d.anchor_index},
                       {"member", member_key(su.anchors[d.anchor_index])},
                       {"id", d.origin_id},
                       {"clause", d.clause_text},
                       {"reason", d.reason}});
  }
  drop_doc["dropped"] = std::move(dropped);
  drop_doc["counts"] = {{"input", input_clauses},
                        {"retained", retained_clauses},
                        {"dropped", filtered.dropped.size()}};

  std::string retained_json = save_blocks_json(unit.id, filtered.blocks, su);
  std::string drop_json = drop_doc.dump(2) + "\n";

  fs::path dir = stage_dir(config, unit, Stage::kFilter);
  write_text_file(dir / "annotated.java", annotated.text);
  write_text_file(dir / "retained.json", retained_json);
  write_text_file(dir / "drop_report.json", drop_json);

  ManifestBuilder manifest;
  manifest.input("verdicts", unit.verdicts.string(), verdict_text);
  manifest.input("stripped.java", stage_label(Stage::kStrip, "stripped.java"),
                 stripped_text);
  manifest.input("blocks.json", stage_label(Stage::kIngest, "blocks.json"),
                 blocks_text);
  manifest.output("annotated.java", annotated.text);
  manifest.output("retained.json", retained_json);
  manifest.output("drop_report.json", drop_json);
  finish_stage(config, unit, Stage::kFilter, manifest);
}

std::string variant_file(const char* prefix, Variant variant, int trial,
                         const char* ext) {
  return std::string(prefix) + "_" + std::string(variant_name(variant)) +
         "_t" + std::to_string(trial) + ext;
}

void run_gen(const PipelineConfig& config, const UnitInputs& unit,
             std::shared_ptr<HttpClient> http) {
  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  std::string annotated_text =
      read_stage_output(config, unit, Stage::kFilter, "annotated.java");
  SourceUnit base_unit = analyze_unit(unit.id, stripped_text);
  SourceUnit jml_unit = analyze_unit(unit.id, annotated_text);

  std::string baseline_template_text =
      read_text_file(config.baseline_template, "prompt template");
  std::string jml_template_text =
      read_text_file(config.jml_template, "prompt template");
  PromptTemplate baseline_template =
      load_template(baseline_template_text, Variant::kBaseline);
  PromptTemplate jml_template = load_template(jml_template_text, Variant::kJml);

  Transport transport =
      make_transport(config, config.generator.endpoint, std::move(http));

  ManifestBuilder manifest;
  manifest.input("stripped.java", stage_label(Stage::kStrip, "stripped.java"),
                 stripped_text);
  manifest.input("annotated.java",
                 stage_label(Stage::kFilter, "annotated.java"),
                 annotated_text);
  manifest.input("baseline_template", config.baseline_template.string(),
                 baseline_template_text);
  manifest.input("jml_template", config.jml_template.string(),
                 jml_template_text);

  fs::path dir = stage_dir(config, unit, Stage::kGen);
  struct Arm {
    Variant variant;
    const SourceUnit* unit;
    const PromptTemplate* tmpl;
  };
  const Arm arms[] = {{Variant::kBaseline, &base_unit, &baseline_template},
                      {Variant::kJml, &jml_unit, &jml_template}};
  for (const Arm& arm : arms) {
    for (int trial = 0; trial < config.generator.trials; ++trial) {
      std::string prompt =
          build_prompt(*arm.unit, *arm.tmpl, default_instructions());
      std::string tag = unit.id + "/" +
                        std::string(variant_name(arm.variant)) + "/trial" +
                        std::to_string(trial);
      GenerationResult generated =
          generate_docs(prompt, config.generator, transport, tag);
      DocSet docs =
          extract_docs(generated.response, *arm.unit, arm.variant, trial);
      docs.transcript_ref = generated.request_hash;

      std::string docs_json = save_docs_json(docs, *arm.unit);
      std::string prompt_name =
          variant_file("prompt", arm.variant, trial, ".txt");
      std::string response_name =
          variant_file("response", arm.variant, trial, ".txt");
      std::string docs_name = variant_file("docs", arm.variant, trial, ".json");
      write_text_file(dir / prompt_name, prompt);
      write_text_file(dir / response_name, generated.response);
      write_text_file(dir / docs_name, docs_json);
      manifest.output(prompt_name, prompt);
      manifest.output(response_name, generated.response);
      manifest.output(docs_name, docs_json);
    }
  }
  finish_stage(config, unit, Stage::kGen, manifest);
}

void run_eval(const PipelineConfig& config, const UnitInputs& unit,
              std::shared_ptr<HttpClient> http) {
  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  SourceUnit su = analyze_unit(unit.id, stripped_text);

  std::string baseline_docs_text = read_stage_output(
      config, unit, Stage::kGen, variant_file("docs", Variant::kBaseline, 0, ".json"));
  std::string jml_docs_text = read_stage_output(
      config, unit, Stage::kGen, variant_file("docs", Variant::kJml, 0, ".json"));
  DocSet baseline_docs =
      load_docs_json(baseline_docs_text, su, "gen/docs_baseline_t0.json");
  DocSet jml_docs = load_docs_json(jml_docs_text, su, "gen/docs_jml_t0.json");

  std::string retained_text =
      read_stage_output(config, unit, Stage::kFilter, "retained.json");
  std::vector<AttachedBlock> retained =
      load_blocks_json(retained_text, su, "filter/retained.json");

  std::string rubric_text = read_text_file(config.rubric, "rubric");
  EvalRubric rubric = load_rubric(rubric_text);

  Transport transport =
      make_transport(config, config.analyzer.endpoint, std::move(http));
  EvalRunResult result = run_eval_trials(jml_docs, baseline_docs, retained, su,
                                         rubric, config.analyzer, transport);

  std::string trials_json = save_trials_json(unit.id, result);
  write_text_file(stage_dir(config, unit, Stage::kEval) / "trials.json",
                  trials_json);

  ManifestBuilder manifest;
  manifest.input("docs_baseline",
                 stage_label(Stage::kGen, "docs_baseline_t0.json"),
                 baseline_docs_text);
  manifest.input("docs_jml", stage_label(Stage::kGen, "docs_jml_t0.json"),
                 jml_docs_text);
  manifest.input("retained.json",
                 stage_label(Stage::kFilter, "retained.json"), retained_text);
  manifest.input("rubric", config.rubric.string(), rubric_text);
  manifest.output("trials.json", trials_json);
  finish_stage(config, unit, Stage::kEval, manifest);
}

void run_report(const PipelineConfig& config, const UnitInputs& unit) {
  std::string stripped_text =
      read_stage_output(config, unit, Stage::kStrip, "stripped.java");
  SourceUnit su = analyze_unit(unit.id, stripped_text);

  std::string trials_text =
      read_stage_output(config, unit, Stage::kEval, "trials.json");
  std::vector<TrialScore> trials =
      load_trials_json(trials_text, "eval/trials.json");

  std::string retained_text =
      read_stage_output(config, unit, Stage::kFilter, "retained.json");
  std::vector<AttachedBlock> retained =
      load_blocks_json(retained_text, su, "filter/retained.json");

  AggregateScore agg = aggregate(trials);

  std::vector<ReportMemberMeta> meta;
  for (std::size_t i = 0; i < su.anchors.size(); ++i) {
    ReportMemberMeta m;
    m.member = member_key(su.anchors[i]);
    m.label = member_label(su.anchors[i]);
    m.is_class = su.anchors[i].kind == AnchorKind::kClassDecl;
    for (const AttachedBlock& attached : retained) {
      if (attached.anchor_index == i) {
        m.invariant_count = attached.block.clauses.size();
      }
    }
    meta.push_back(std::move(m));
  }

  std::string baseline_template_text =
      read_text_file(config.baseline_template, "prompt template");
  std::string jml_template_text =
      read_text_file(config.jml_template, "prompt template");
  std::string rubric_text = read_text_file(config.rubric, "rubric");

  ReportProvenance provenance;
  provenance.generator_model = config.generator.model;
  provenance.analyzer_model = config.analyzer.model;
  provenance.baseline_template_hash = sha256_hex16(baseline_template_text);
  provenance.jml_template_hash = sha256_hex16(jml_template_text);
  provenance.rubric_hash = sha256_hex16(rubric_text);
  provenance.config_hash = config_fingerprint(config);
  provenance.generator_trials = config.generator.trials;
  provenance.analyzer_trials = static_cast<int>(trials.size());

  ReportFiles files = emit_report(agg, meta, provenance, unit.id);

  fs::path dir = stage_dir(config, unit, Stage::kReport);
  write_text_file(dir / "report.md", files.markdown);
  write_text_file(dir / "report.json", files.machine_json);

  ManifestBuilder manifest;
  manifest.input("trials.json", stage_label(Stage::kEval, "trials.json"),
                 trials_text);
  manifest.input("retained.json", stage_label(Stage::kFilter, "retained.json"),
                 retained_text);
  manifest.output("report.md", files.markdown);
  manifest.output("report.json", files.machine_json);
  finish_stage(config, unit, Stage::kReport, manifest);
}

void run_unit_stage(Stage stage, const PipelineConfig& config,
                    const UnitInputs& unit, std::shared_ptr<HttpClient> http) {
  try {
    switch (stage) {
      case Stage::kStrip:
        run_strip(config, unit);
        return;
      case Stage::kIngest:
        run_ingest(config, unit);
        return;
      case Stage::kAnnotate:
        run_annotate(config, unit);
        return;
      case Stage::kFilter:
        run_filter(config, unit);
        return;
      case Stage::kGen:
        run_gen(config, unit, std::move(http));
        return;
      case Stage::kEval:
        run_eval(config, unit, std::move(http));
        return;
      case Stage::kReport:
        run_report(config, unit);
        return;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("stage " + std::string(stage_name(stage)) +
                     " failed for unit \"" + unit.id + "\": " + e.what());
  }
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config,
               std::shared_ptr<HttpClient> http) {
  validate_config(config);
  for (const UnitInputs& unit : config.units) {
    run_unit_stage(stage, config, unit, http);
  }
}

void run_pipeline(const PipelineConfig& config,
                  std::shared_ptr<HttpClient> http) {
  validate_config(config);
  for (const UnitInputs& unit : config.units) {
    for (const auto& [stage, name] : kStageNames) {
      run_unit_stage(stage, config, unit, http);
    }
  }
}

}  // namespace jmldoc
