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

#include <filesystem>
#include <json.hpp>
#include <map>
#include <string>

#include "jmldoc/pipeline.hpp"
#include "jmldoc/transport.hpp"
#include "support.hpp"

using namespace jmldoc;
namespace fs = std::filesystem;

namespace {

PipelineConfig replay_config() {
  return load_pipeline_config(testsupport::fixtures_root() / "configs" /
                              "replay.json");
}

// Relative path -> bytes for every regular file under root.
std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), root).generic_string()] =
        testsupport::read_file(entry.path());
  }
  return files;
}

}  // namespace

TEST_CASE("config documents load with paths resolved against their directory") {
  PipelineConfig config = replay_config();

  CHECK(config.generator.model == "docwriter-xl");
  CHECK(config.generator.trials == 1);
  CHECK(config.analyzer.model == "docjudge-xl");
  CHECK(config.analyzer.trials == 3);
  CHECK(config.analyzer.max_retries_per_trial == 2);
  CHECK(config.mode == CassetteMode::kReplay);
  CHECK(config.out_dir == fs::path("out"));

  REQUIRE(config.units.size() == 1);
  CHECK(config.units[0].id == "InetAddresses");
  CHECK(fs::exists(config.units[0].source));
  CHECK(fs::exists(config.units[0].dump));
  CHECK(fs::exists(config.units[0].verdicts));
  CHECK(fs::exists(config.baseline_template));
  CHECK(fs::exists(config.rubric));
  CHECK(fs::is_directory(config.cassette_dir));

  const nlohmann::json basis = nlohmann::json::parse(config.fingerprint_basis);
  CHECK_FALSE(basis.contains("out_dir"));
}

TEST_CASE("config loading rejects missing or malformed documents") {
  CHECK_THROWS_WITH_AS(load_pipeline_config("/nonexistent/config.json"),
                       doctest::Contains("cannot read config"), ConfigError);

  testsupport::TempDir dir("jmldoc-config");
  const fs::path bad = dir.path() / "bad.json";
  testsupport::write_file(bad, "{not json");
  CHECK_THROWS_WITH_AS(load_pipeline_config(bad),
                       doctest::Contains("malformed config"), ConfigError);

  const fs::path partial = dir.path() / "partial.json";
  testsupport::write_file(partial, R"({"analyzer": {}})");
  CHECK_THROWS_WITH_AS(load_pipeline_config(partial),
                       doctest::Contains("generator"), ConfigError);
}

TEST_CASE("command-line overrides beat the config document") {
  PipelineConfig config = replay_config();

  ConfigOverrides overrides;
  overrides.mode = "record";
  overrides.trials = 5;
  overrides.out_dir = "/tmp/elsewhere";
  apply_overrides(config, overrides);
  CHECK(config.mode == CassetteMode::kRecord);
  CHECK(config.analyzer.trials == 5);
  CHECK(config.out_dir == fs::path("/tmp/elsewhere"));

  ConfigOverrides bad;
  bad.mode = "offline";
  CHECK_THROWS_AS(apply_overrides(config, bad), ConfigError);
}

TEST_CASE("validation rejects inconsistent settings") {
  PipelineConfig config = replay_config();
  CHECK_NOTHROW(validate_config(config));

  SUBCASE("empty generator model") {
    config.generator.model.clear();
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("generator model"), ConfigError);
  }
  SUBCASE("zero generator trials") {
    config.generator.trials = 0;
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("generator trials"), ConfigError);
  }
  SUBCASE("zero analyzer trials") {
    config.analyzer.trials = 0;
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("analyzer trials"), ConfigError);
  }
  SUBCASE("negative temperature") {
    config.generator.temperature = -0.5;
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("temperature"), ConfigError);
  }
  SUBCASE("duplicate unit ids") {
    config.units.push_back(config.units[0]);
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("duplicate unit id"), ConfigError);
  }
  SUBCASE("no units") {
    config.units.clear();
    CHECK_THROWS_WITH_AS(validate_config(config),
                         doctest::Contains("at least one unit"), ConfigError);
  }
}

TEST_CASE("config fingerprints ignore output placement only") {
  PipelineConfig config = replay_config();
  const std::string fp = config_fingerprint(config);
  CHECK(fp.size() == 16);
  CHECK(fp == config_fingerprint(replay_config()));

  PipelineConfig moved = replay_config();
  ConfigOverrides out_only;
  out_only.out_dir = "/somewhere/else";
  apply_overrides(moved, out_only);
  CHECK(config_fingerprint(moved) == fp);

  PipelineConfig tweaked = replay_config();
  ConfigOverrides more_trials;
  more_trials.trials = 7;
  apply_overrides(tweaked, more_trials);
  CHECK(config_fingerprint(tweaked) != fp);
}

TEST_CASE("stage names map to stages and back") {
  const char* names[] = {"strip", "ingest", "annotate", "filter",
                         "gen",   "eval",   "report"};
  for (const char* name : names) {
    CHECK(stage_name(stage_from_name(name)) == name);
  }
  CHECK(stage_from_name("gen") == Stage::kGen);
  CHECK_THROWS_WITH_AS(stage_from_name("polish"),
                       doctest::Contains("unknown stage"), ConfigError);
}

TEST_CASE("a replayed run produces the full output tree without network access") {
  PipelineConfig config = replay_config();
  testsupport::TempDir out("jmldoc-run");
  config.out_dir = out.path();

  // The failing client proves replay never reaches the network layer.
  run_pipeline(config, make_failing_http_client());

  const fs::path unit_dir = out.path() / "InetAddresses";
  for (const char* stage : {"strip", "ingest", "annotate", "filter", "gen",
                            "eval", "report"}) {
    CAPTURE(stage);
    CHECK(fs::exists(unit_dir / stage / "manifest.json"));
  }

  const std::string report =
      testsupport::read_file(unit_dir / "report" / "report.md");
  CHECK(report.find("| isInetAddress | 54 | 62 | 82 | 94 | 39 | 9 |") !=
        std::string::npos);
  CHECK(report.find("| textToNumericFormatV4 | 81 | 79 | 84 | 90 | 85 | 15 |") !=
        std::string::npos);
  CHECK(report.find("| textToNumericFormatV6 | 82 | 85 | 87 | 92 | 87 | 32 |") !=
        std::string::npos);
  CHECK(report.find(
            "Headline (dedicated class-level Javadoc score): JML 92 vs "
            "NO-JML 85.") != std::string::npos);

  const nlohmann::json manifest = nlohmann::json::parse(
      testsupport::read_file(unit_dir / "report" / "manifest.json"));
  CHECK(manifest["stage"] == "report");
  CHECK(manifest["unit"] == "InetAddresses");
  CHECK(manifest["config"] == config_fingerprint(config));
  CHECK(manifest["inputs"].is_object());
  CHECK(manifest["outputs"].contains("report.md"));
}

TEST_CASE("running stages one at a time matches the single-shot run byte for byte") {
  PipelineConfig config = replay_config();

  testsupport::TempDir all_at_once("jmldoc-oneshot");
  config.out_dir = all_at_once.path();
  run_pipeline(config, make_failing_http_client());

  testsupport::TempDir stepwise("jmldoc-stepwise");
  config.out_dir = stepwise.path();
  for (const char* stage : {"strip", "ingest", "annotate", "filter", "gen",
                            "eval", "report"}) {
    run_stage(stage_from_name(stage), config, make_failing_http_client());
  }

  const auto expected = tree_contents(all_at_once.path());
  const auto actual = tree_contents(stepwise.path());
  REQUIRE(expected.size() == actual.size());
  for (const auto& [rel, bytes] : expected) {
    CAPTURE(rel);
    auto it = actual.find(rel);
    REQUIRE(it != actual.end());
    CHECK(it->second == bytes);
  }
}

TEST_CASE("stages refuse to run before their inputs exist") {
  PipelineConfig config = replay_config();
  testsupport::TempDir out("jmldoc-order");
  config.out_dir = out.path();

  CHECK_THROWS_WITH_AS(
      run_stage(Stage::kGen, config, make_failing_http_client()),
      doctest::Contains("run the strip stage first"), StageError);
}

TEST_CASE("a unit with no verified clauses degrades to the baseline") {
  PipelineConfig config = load_pipeline_config(
      testsupport::fixtures_root() / "configs" / "degenerate.json");
  testsupport::TempDir out("jmldoc-degenerate");
  config.out_dir = out.path();

  run_pipeline(config, make_failing_http_client());

  const fs::path unit_dir = out.path() / "Counter";
  const nlohmann::json drops = nlohmann::json::parse(
      testsupport::read_file(unit_dir / "filter" / "drop_report.json"));
  CHECK(drops["counts"]["retained"] == 0);
  CHECK(drops["counts"]["input"] > 0);

  // With nothing retained, the annotated source equals the stripped source.
  CHECK(testsupport::read_file(unit_dir / "filter" / "annotated.java") ==
        testsupport::read_file(unit_dir / "strip" / "stripped.java"));

  const std::string report =
      testsupport::read_file(unit_dir / "report" / "report.md");
  CHECK(report.find("No verified invariants were attached to:") !=
        std::string::npos);
}
