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
#include <vector>

#include "jmldoc/jml.hpp"

namespace {

const std::vector<std::string>& bench_clauses() {
  static const std::vector<std::string> kClauses = {
      "requires ipString != null;",
      "requires 0 <= index && index < length;",
      "requires buffer.capacity() - buffer.size() >= 1;",
      "ensures \\result == true || \\result == false;",
      "ensures ipString.toString().equals(\\old(ipString.toString()));",
      "ensures \\result == a * (b + c);",
      "invariant size >= 0;",
      "invariant head == null || head.prev == null;",
  };
  return kClauses;
}

std::string bench_block_text() {
  jmldoc::SpecBlock block;
  for (const std::string& clause : bench_clauses()) {
    block.clauses.push_back(jmldoc::parse_clause(clause));
  }
  return jmldoc::print_spec_block(block, 4);
}

void BM_ParseClause(benchmark::State& state) {
  const std::vector<std::string>& clauses = bench_clauses();
  std::size_t i = 0;
  for (auto _ : state) {
    jmldoc::SpecClause clause =
        jmldoc::parse_clause(clauses[i++ % clauses.size()]);
    benchmark::DoNotOptimize(clause.origin_id.data());
  }
}
BENCHMARK(BM_ParseClause);

void BM_ParseSpecBlock(benchmark::State& state) {
  const std::string text = bench_block_text();
  for (auto _ : state) {
    jmldoc::SpecBlock block = jmldoc::parse_spec_block(text);
    benchmark::DoNotOptimize(block.clauses.data());
  }
}
BENCHMARK(BM_ParseSpecBlock);

void BM_PrintSpecBlock(benchmark::State& state) {
  const std::string text = bench_block_text();
  const jmldoc::SpecBlock block = jmldoc::parse_spec_block(text);
  for (auto _ : state) {
    std::string printed = jmldoc::print_spec_block(block, 4);
    benchmark::DoNotOptimize(printed.data());
  }
}
BENCHMARK(BM_PrintSpecBlock);

void BM_ClauseRoundTrip(benchmark::State& state) {
  const std::vector<std::string>& clauses = bench_clauses();
  std::size_t i = 0;
  for (auto _ : state) {
    const std::string& text = clauses[i++ % clauses.size()];
    std::string printed = jmldoc::print_clause(jmldoc::parse_clause(text));
    benchmark::DoNotOptimize(printed.data());
  }
}
BENCHMARK(BM_ClauseRoundTrip);

}  // namespace

BENCHMARK_MAIN();
