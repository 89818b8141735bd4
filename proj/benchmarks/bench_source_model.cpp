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

#include <benchmark/benchmark.h>

#include <string>

#include "jmldoc/source_model.hpp"

namespace {

// A heavily commented class of a few thousand lines, the size of a large
// hand-written utility class.
std::string synthetic_source(int methods) {
  std::string text =
      "package bench;\n\n"
      "/**\n * Synthetic class used to measure the lexer.\n */\n"
      "public final class Synthetic {\n";
  for (int i = 0; i < methods; ++i) {
    const std::string n = std::to_string(i);
    text +=
        "    /**\n"
        "     * Computes value " + n + ".\n"
        "     * @param x the input\n"
        "     * @return the transformed input\n"
        "     */\n"
        "    public int method" + n + "(int x) {\n"
        "        int acc = x; // running total\n"
        "        /* fold in the index */\n"
        "        acc = acc * 31 + " + n + ";\n"
        "        return acc;\n"
        "    }\n\n";
  }
  text += "}\n";
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = synthetic_source(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto tokens = jmldoc::tokenize(text);
    benchmark::DoNotOptimize(tokens.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(10)->Arg(100)->Arg(400);

void BM_StripComments(benchmark::State& state) {
  const jmldoc::SourceUnit unit = jmldoc::make_unit(
      "Synthetic", synthetic_source(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    jmldoc::SourceUnit stripped = jmldoc::strip_comments(unit, false);
    benchmark::DoNotOptimize(stripped.text.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(unit.text.size()));
}
BENCHMARK(BM_StripComments)->Arg(10)->Arg(100)->Arg(400);

void BM_AnalyzeUnit(benchmark::State& state) {
  const std::string text = synthetic_source(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    jmldoc::SourceUnit unit = jmldoc::analyze_unit("Synthetic", text);
    benchmark::DoNotOptimize(unit.anchors.data());
  }
}
BENCHMARK(BM_AnalyzeUnit)->Arg(10)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
