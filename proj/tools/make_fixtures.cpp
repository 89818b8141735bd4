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
// Rebuilds the derived parts of the fixture tree: prover verdict files
// (computed from the invariant dumps so the obligation ids always match)
// and the transport cassettes. Cassettes are produced by running the real
// pipeline in record mode against a scripted HTTP client that serves seeded
// responses keyed on the X-Request-Tag header, so the stored request hashes
// are exactly the hashes the pipeline computes at replay time.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jmldoc/docgen.hpp"
#include "jmldoc/error.hpp"
#include "jmldoc/evaluation.hpp"
#include "jmldoc/invariant_ingest.hpp"
#include "jmldoc/pipeline.hpp"
#include "jmldoc/source_model.hpp"
#include "jmldoc/transport.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw jmldoc::Error("cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw jmldoc::Error("cannot write " + path.string());
  }
  out << content;
}

// ---------------------------------------------------------------------------
// Verdict files
// ---------------------------------------------------------------------------

// Invariants that the simulated prover does not prove, keyed by the exact
// dump line. Everything else translatable gets "proved".
struct VerdictOverride {
  std::string_view unit;
  std::string_view raw;
  std::string_view status;
  std::string_view note;
};

constexpr VerdictOverride kOverrides[] = {
    {"InetAddresses", "ipString.length() >= 0", "open",
     "not discharged within the default strategy"},
    {"InetAddresses", "return != null", "failed",
     "counterexample: malformed input returns null"},
    {"InetAddresses",
     "return == null || ipString.split(\":\").length <= IPV6_PART_COUNT + 1",
     "timeout", "prover exceeded the time budget"},
};

void write_verdicts_for(const std::string& unit_id, const fs::path& source_path,
                        const fs::path& dump_path,
                        const fs::path& verdict_path) {
  std::vector<jmldoc::InvariantRecord> records =
      jmldoc::parse_invariant_dump(read_file(dump_path));
  jmldoc::translate_records(records);

  // The prover only ever sees obligations for clauses that attached to the
  // unit; unmatched program points produce no verdict lines.
  jmldoc::SourceUnit unit =
      jmldoc::analyze_unit(unit_id, read_file(source_path));
  jmldoc::AttachResult attach = jmldoc::attach_clauses(records, unit);
  std::set<std::string> attached_ids;
  for (const jmldoc::AttachedBlock& block : attach.blocks) {
    for (const jmldoc::SpecClause& clause : block.block.clauses) {
      attached_ids.insert(clause.origin_id);
    }
  }

  std::ostringstream out;
  for (const jmldoc::InvariantRecord& record : records) {
    if (!record.translation.ok) continue;
    if (attached_ids.count(record.id) == 0) continue;
    std::string status = "proved";
    std::string note;
    for (const VerdictOverride& override_entry : kOverrides) {
      if (override_entry.unit == unit_id && override_entry.raw == record.raw_text) {
        status = std::string(override_entry.status);
        note = std::string(override_entry.note);
        break;
      }
    }
    nlohmann::json line{{"id", record.id}, {"status", status}};
    if (!note.empty()) line["note"] = note;
    out << line.dump() << "\n";
  }
  write_file(verdict_path, out.str());
}

void write_verdicts(const fs::path& root) {
  write_verdicts_for("InetAddresses",
                     root / "corpus" / "com" / "example" / "net" /
                         "InetAddresses.java",
                     root / "dumps" / "InetAddresses.dump",
                     root / "verdicts" / "InetAddresses.jsonl");
  // The degenerate configuration exercises a prover run that produced no
  // verdicts at all, so its file is intentionally empty.
  write_file(root / "verdicts" / "Counter.jsonl", "");
}

// ---------------------------------------------------------------------------
// Scripted HTTP client
// ---------------------------------------------------------------------------

struct ParsedTag {
  std::string unit;
  std::string kind;  // "baseline", "jml" or "eval"
  int trial = 0;
};

ParsedTag parse_tag(const std::string& tag) {
  std::size_t first = tag.find('/');
  std::size_t second = tag.find('/', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw jmldoc::Error("unrecognized request tag \"" + tag + "\"");
  }
  ParsedTag parsed;
  parsed.unit = tag.substr(0, first);
  parsed.kind = tag.substr(first + 1, second - first - 1);
  std::string rest = tag.substr(second + 1);
  if (rest.rfind("trial", 0) != 0) {
    throw jmldoc::Error("unrecognized request tag \"" + tag + "\"");
  }
  parsed.trial = std::stoi(rest.substr(5));
  return parsed;
}

// Serves generator responses from seed text files and analyzer responses
// assembled from the score seeds, using the same label derivation as the
// pipeline so A/B always lines up.
class ScriptedClient : public jmldoc::HttpClient {
 public:
  explicit ScriptedClient(fs::path seeds_dir) : seeds_(std::move(seeds_dir)) {
    scores_ = nlohmann::json::parse(read_file(seeds_ / "scores.json"));
  }

  Response post_json(
      const std::string& /*url*/, const std::string& /*body*/,
      const std::vector<std::pair<std::string, std::string>>& headers)
      override {
    std::string tag;
    for (const auto& [name, value] : headers) {
      if (name == "X-Request-Tag") tag = value;
    }
    if (tag.empty()) {
      throw jmldoc::Error("scripted client needs an X-Request-Tag header");
    }
    ParsedTag parsed = parse_tag(tag);

    std::string content;
    if (parsed.kind == "baseline" || parsed.kind == "jml") {
      content = read_file(seeds_ / "responses" /
                          (parsed.unit + "_" + parsed.kind + ".txt"));
    } else if (parsed.kind == "eval") {
      content = eval_response(parsed.unit, parsed.trial);
    } else {
      throw jmldoc::Error("unrecognized request tag \"" + tag + "\"");
    }

    nlohmann::json envelope{
        {"choices",
         nlohmann::json::array(
             {nlohmann::json{{"message", {{"content", content}}}}})}};
    return Response{200, envelope.dump()};
  }

 private:
  std::string eval_response(const std::string& unit, int trial) const {
    const nlohmann::json& unit_seed = scores_.at("units").at(unit);
    jmldoc::LabelMap labels = jmldoc::derive_label_map(unit, trial);

    nlohmann::json members = nlohmann::json::array();
    for (const nlohmann::json& seed : unit_seed.at("members")) {
      auto at = [&](const char* key) {
        return seed.at(key).at(trial).get<int>();
      };
      nlohmann::json jml{{"d1", at("jml_d1")}, {"d2", at("jml_d2")}};
      nlohmann::json no_jml{{"d1", at("no_jml_d1")}, {"d2", at("no_jml_d2")}};
      bool jml_is_a = labels.label_a == jmldoc::Variant::kJml;
      members.push_back({{"member", seed.at("member").get<std::string>()},
                         {"a", jml_is_a ? jml : no_jml},
                         {"b", jml_is_a ? no_jml : jml},
                         {"d3", at("d3")}});
    }
    nlohmann::json doc{{"members", std::move(members)}};
    return "Scores for both documentation sets follow.\n\n" + doc.dump(2) +
           "\n";
  }

  fs::path seeds_;
  nlohmann::json scores_;
};

// ---------------------------------------------------------------------------
// Cassette recording
// ---------------------------------------------------------------------------

void record_cassettes(const fs::path& root) {
  auto scripted = std::make_shared<ScriptedClient>(root / "seeds");
  bool cleaned = false;
  for (const char* name : {"replay.json", "degenerate.json"}) {
    jmldoc::PipelineConfig config =
        jmldoc::load_pipeline_config(root / "configs" / name);
    if (!cleaned) {
      fs::remove_all(config.cassette_dir);
      cleaned = true;
    }
    jmldoc::ConfigOverrides overrides;
    overrides.mode = "record";
    fs::path out = fs::temp_directory_path() / "jmldoc-fixture-out";
    fs::remove_all(out);
    overrides.out_dir = out.string();
    jmldoc::apply_overrides(config, overrides);
    jmldoc::run_pipeline(config, scripted);
    fs::remove_all(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Rebuild derived fixtures: verdict files and transport cassettes"};
  std::string fixtures_dir = "fixtures";
  app.add_option("--fixtures", fixtures_dir, "Fixture tree root")
      ->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  try {
    fs::path root = fs::absolute(fixtures_dir);
    write_verdicts(root);
    record_cassettes(root);
    std::cout << "fixtures refreshed under " << root.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
