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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jmldoc/error.hpp"
#include "jmldoc/pipeline.hpp"

namespace {

struct CommandSpec {
  const char* name;
  const char* help;
};

constexpr CommandSpec kCommands[] = {
    {"strip", "Remove every comment from each unit's source"},
    {"ingest", "Parse the invariant dump and attach clauses to declarations"},
    {"annotate", "Inject all translated spec blocks into the source"},
    {"filter", "Keep only prover-verified clauses and re-inject them"},
    {"gen", "Generate documentation for the baseline and annotated variants"},
    {"eval", "Score both documentation variants with the analyzer model"},
    {"report", "Aggregate trial scores into the comparison report"},
    {"run", "Run every stage in order"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract-aware Javadoc generation pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode;
  int trials = 0;
  std::string out_dir;

  for (const CommandSpec& command : kCommands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    sub->add_option("--config", config_path, "Pipeline config JSON file")
        ->required();
    sub->add_option("--mode", mode, "Transport mode: live, record or replay")
        ->check(CLI::IsMember({"live", "record", "replay"}));
    sub->add_option("--trials", trials, "Analyzer trials per unit")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  jmldoc::ConfigOverrides overrides;
  if (sub->count("--mode") > 0) overrides.mode = mode;
  if (sub->count("--trials") > 0) overrides.trials = trials;
  if (sub->count("--out") > 0) overrides.out_dir = out_dir;

  try {
    jmldoc::PipelineConfig config = jmldoc::load_pipeline_config(config_path);
    jmldoc::apply_overrides(config, overrides);
    jmldoc::validate_config(config);
    const std::string& name = sub->get_name();
    if (name == "run") {
      jmldoc::run_pipeline(config);
    } else {
      jmldoc::run_stage(jmldoc::stage_from_name(name), config);
    }
    return 0;
  } catch (const jmldoc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
