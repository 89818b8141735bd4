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

#ifndef JMLDOC_PIPELINE_HPP_
#define JMLDOC_PIPELINE_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/docgen.hpp"
#include "jmldoc/error.hpp"
#include "jmldoc/evaluation.hpp"
#include "jmldoc/transport.hpp"

namespace jmldoc {

struct UnitInputs {
  std::string id;
  std::filesystem::path source;    // Java source file
  std::filesystem::path dump;      // detector dump
  std::filesystem::path verdicts;  // prover verdict records
};

struct PipelineConfig {
  GenerationConfig generator;
  EvalConfig analyzer;
  std::filesystem::path baseline_template;
  std::filesystem::path jml_template;
  std::filesystem::path rubric;
  CassetteMode mode = CassetteMode::kReplay;
  std::filesystem::path cassette_dir;
  int transport_retries = 2;
  int transport_backoff_ms = 200;
  std::vector<UnitInputs> units;
  std::filesystem::path out_dir = "out";

  // Canonical serialized form of the effective config minus the output
  // directory; hashed into every stage manifest.
  std::string fingerprint_basis;
};

// Reads a JSON config document; relative paths resolve against the config
// file's directory (out_dir stays as given so callers control placement).
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct ConfigOverrides {
  std::optional<std::string> mode;     // live | record | replay
  std::optional<int> trials;           // analyzer trials
  std::optional<std::string> out_dir;
};

// Command-line flags win over the config document.
void apply_overrides(PipelineConfig& config, const ConfigOverrides& overrides);

// Throws ConfigError on invalid settings; run_* call this first.
void validate_config(const PipelineConfig& config);

// Short content hash of the effective config (out_dir excluded).
std::string config_fingerprint(const PipelineConfig& config);

enum class Stage {
  kStrip,
  kIngest,
  kAnnotate,
  kFilter,
  kGen,
  kEval,
  kReport,
};

Stage stage_from_name(std::string_view name);
std::string_view stage_name(Stage stage);

// A failure inside a stage, wrapped with stage and unit context.
class StageError : public Error {
 public:
  using Error::Error;
};

// Runs one stage for every configured unit. Outputs land under
// out_dir/<unit-id>/<stage>/ together with a manifest recording input
// hashes and the config fingerprint. Pass an HttpClient to substitute the
// network layer (tests, fixture recording); by default replay mode gets a
// client that refuses every call, other modes a real one.
void run_stage(Stage stage, const PipelineConfig& config,
               std::shared_ptr<HttpClient> http = nullptr);

// strip -> ingest -> annotate -> filter -> gen -> eval -> report.
void run_pipeline(const PipelineConfig& config,
                  std::shared_ptr<HttpClient> http = nullptr);

}  // namespace jmldoc

#endif  // JMLDOC_PIPELINE_HPP_
