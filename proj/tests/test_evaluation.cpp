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

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "jmldoc/digest.hpp"
#include "jmldoc/error.hpp"
#include "jmldoc/evaluation.hpp"
#include "jmldoc/invariant_ingest.hpp"
#include "jmldoc/source_model.hpp"
#include "support.hpp"

using namespace jmldoc;
using testsupport::FnHttpClient;

namespace {

SourceUnit sample_unit() {
  return analyze_unit("Sample",
                      "public class Sample {\n"
                      "    public int twice(int x) {\n"
                      "        return x * 2;\n"
                      "    }\n"
                      "    public int half(int x) {\n"
                      "        return x / 2;\n"
                      "    }\n"
                      "}\n");
}

DocSet docs_for(const SourceUnit& unit, Variant variant,
                const std::vector<std::size_t>& documented) {
  DocSet docs;
  docs.unit_id = unit.identifier;
  docs.variant = variant;
  docs.trial = 0;
  for (std::size_t index : documented) {
    docs.entries.push_back({index, "/** Doc for anchor " + std::to_string(index) + ". */"});
  }
  for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
    if (docs.doc_for(i) == nullptr) docs.undocumented.push_back(i);
  }
  return docs;
}

EvalRubric sample_rubric() {
  EvalRubric rubric;
  rubric.d1 = "Check claims against the contracts.";
  rubric.d2 = "Check coverage of behavior.";
  rubric.d3 = "Compare the two texts.";
  return rubric;
}

// A judge answer in the expected schema, scores fixed per member index.
std::string judge_answer(const std::vector<std::string>& members, int base, bool reversed = false) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const int offset = static_cast<int>(i);
    arr.push_back({{"member", members[i]},
                   {"a", {{"d1", base + offset}, {"d2", base + 1 + offset}}},
                   {"b", {{"d1", base + 2 + offset}, {"d2", base + 3 + offset}}},
                   {"d3", base + 4 + offset}});
  }
  if (reversed) std::reverse(arr.begin(), arr.end());
  nlohmann::json body{{"members", arr}};
  return "Scores follow.\n\n" + body.dump(2);
}

}  // namespace

TEST_CASE("rubric files carry all three dimensions") {
  EvalRubric rubric = load_rubric(R"({"d1":"a","d2":"b","d3":"c"})");
  CHECK(rubric.d1 == "a");
  CHECK(rubric.d2 == "b");
  CHECK(rubric.d3 == "c");

  CHECK_THROWS_WITH_AS(load_rubric(R"({"d1":"a","d2":"b"})"), doctest::Contains("d3"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(load_rubric("not json"), doctest::Contains("malformed rubric"),
                       ConfigError);
  CHECK_THROWS_AS(load_rubric_file("/nonexistent/rubric.json"), ConfigError);

  EvalRubric from_file = load_rubric_file(testsupport::fixtures_root() / "rubric.json");
  CHECK_FALSE(from_file.d1.empty());
}

TEST_CASE("label maps derive from a content hash") {
  for (int trial = 0; trial < 20; ++trial) {
    LabelMap map = derive_label_map("InetAddresses", trial);
    LabelMap again = derive_label_map("InetAddresses", trial);
    CHECK(map.label_a == again.label_a);

    const std::string digest =
        sha256_hex("InetAddresses|trial|" + std::to_string(trial));
    const char first = digest[0];
    const int nibble = first <= '9' ? first - '0' : first - 'a' + 10;
    CHECK(map.label_a == (nibble % 2 == 0 ? Variant::kBaseline : Variant::kJml));
  }

  // Both assignments occur, so neither variant owns a fixed position.
  bool saw_baseline_a = false;
  bool saw_jml_a = false;
  for (int trial = 0; trial < 20; ++trial) {
    Variant a = derive_label_map("InetAddresses", trial).label_a;
    saw_baseline_a |= a == Variant::kBaseline;
    saw_jml_a |= a == Variant::kJml;
  }
  CHECK(saw_baseline_a);
  CHECK(saw_jml_a);

  LabelMap map;
  map.label_a = Variant::kJml;
  CHECK(map.variant_of('A') == Variant::kJml);
  CHECK(map.variant_of('B') == Variant::kBaseline);
  CHECK(map.label_of(Variant::kJml) == 'A');
  CHECK(map.label_of(Variant::kBaseline) == 'B');
}

TEST_CASE("expected members are the anchors documented in both variants") {
  SourceUnit unit = sample_unit();
  DocSet jml = docs_for(unit, Variant::kJml, {0, 1, 2});
  DocSet baseline = docs_for(unit, Variant::kBaseline, {0, 1});

  // half(int) is missing from the baseline set, so it is not scored.
  CHECK(expected_members(jml, baseline, unit) ==
        std::vector<std::string>{"Sample", "twice(int)"});
}

TEST_CASE("eval prompts blind the variants behind A and B") {
  SourceUnit unit = sample_unit();
  DocSet jml = docs_for(unit, Variant::kJml, {0, 1});
  DocSet baseline = docs_for(unit, Variant::kBaseline, {0, 1});
  for (DocEntry& e : jml.entries) e.javadoc = "/** JML-SIDE " + std::to_string(e.anchor_index) + " */";
  for (DocEntry& e : baseline.entries) {
    e.javadoc = "/** BASE-SIDE " + std::to_string(e.anchor_index) + " */";
  }

  auto records = parse_invariant_dump("Sample.twice(int):::EXIT\nreturn % 2 == 0\n");
  translate_records(records);
  std::vector<AttachedBlock> specs = attach_clauses(records, unit).blocks;
  REQUIRE(specs.size() == 1);

  LabelMap labels;
  labels.label_a = Variant::kJml;
  const std::string prompt = build_eval_prompt(jml, baseline, specs, unit, sample_rubric(), labels);

  CHECK(prompt.find("public int twice(int x)") != std::string::npos);
  CHECK(prompt.find("ensures \\result % 2 == 0;") != std::string::npos);
  CHECK(prompt.find("Check claims against the contracts.") != std::string::npos);
  CHECK(prompt.find("twice(int)") != std::string::npos);

  // With the jml variant behind A, its text must come before the baseline's.
  const std::size_t jml_pos = prompt.find("JML-SIDE");
  const std::size_t base_pos = prompt.find("BASE-SIDE");
  REQUIRE(jml_pos != std::string::npos);
  REQUIRE(base_pos != std::string::npos);
  CHECK(jml_pos < base_pos);
  CHECK(prompt.find("jml") == std::string::npos);  // variant names never leak

  LabelMap flipped;
  flipped.label_a = Variant::kBaseline;
  const std::string other = build_eval_prompt(jml, baseline, specs, unit, sample_rubric(), flipped);
  CHECK(other.find("BASE-SIDE") < other.find("JML-SIDE"));

  DocSet mismatched = baseline;
  mismatched.unit_id = "Other";
  CHECK_THROWS_WITH_AS(build_eval_prompt(jml, mismatched, specs, unit, sample_rubric(), labels),
                       doctest::Contains("different units"), Error);
}

TEST_CASE("parse_scores de-randomizes labels and validates the schema") {
  EvalContext ctx;
  ctx.members = {"Sample", "twice(int)"};
  ctx.trial = 0;

  SUBCASE("label A carries the jml variant") {
    ctx.labels.label_a = Variant::kJml;
    TrialScore score = parse_scores(judge_answer(ctx.members, 60), ctx);
    REQUIRE(score.members.size() == 2);
    CHECK(score.members[0].member == "Sample");
    CHECK(score.members[0].jml_d1 == 60);
    CHECK(score.members[0].jml_d2 == 61);
    CHECK(score.members[0].no_jml_d1 == 62);
    CHECK(score.members[0].no_jml_d2 == 63);
    CHECK(score.members[0].d3 == 64);
  }

  SUBCASE("label A carries the baseline variant") {
    ctx.labels.label_a = Variant::kBaseline;
    TrialScore score = parse_scores(judge_answer(ctx.members, 60), ctx);
    CHECK(score.members[0].no_jml_d1 == 60);
    CHECK(score.members[0].jml_d1 == 62);
  }

  SUBCASE("member order in the response does not matter") {
    ctx.labels.label_a = Variant::kJml;
    TrialScore forward = parse_scores(judge_answer(ctx.members, 60), ctx);
    TrialScore backward = parse_scores(judge_answer(ctx.members, 60, true), ctx);
    REQUIRE(backward.members.size() == forward.members.size());
    for (std::size_t i = 0; i < forward.members.size(); ++i) {
      CHECK(forward.members[i].member == backward.members[i].member);
      CHECK(forward.members[i].jml_d1 == backward.members[i].jml_d1);
      CHECK(forward.members[i].d3 == backward.members[i].d3);
    }
  }

  SUBCASE("schema violations raise InvalidTrialError") {
    ctx.labels.label_a = Variant::kJml;
    CHECK_THROWS_WITH_AS(parse_scores("no json here", ctx), doctest::Contains("no JSON object"),
                         InvalidTrialError);
    CHECK_THROWS_AS(parse_scores("{\"members\": oops}", ctx), InvalidTrialError);
    CHECK_THROWS_WITH_AS(parse_scores("{\"scores\":[]}", ctx), doctest::Contains("members"),
                         InvalidTrialError);
    CHECK_THROWS_WITH_AS(parse_scores(judge_answer({"Sample"}, 60), ctx),
                         doctest::Contains("twice(int)"), InvalidTrialError);
    CHECK_THROWS_WITH_AS(
        parse_scores(judge_answer({"Sample", "twice(int)", "half(int)"}, 60), ctx),
        doctest::Contains("unexpected member"), InvalidTrialError);
    CHECK_THROWS_WITH_AS(
        parse_scores(judge_answer({"Sample", "Sample"}, 60), ctx),
        doctest::Contains("scored twice"), InvalidTrialError);

    nlohmann::json bad{{"members",
                        {{{"member", "Sample"},
                          {"a", {{"d1", 200}, {"d2", 50}}},
                          {"b", {{"d1", 50}, {"d2", 50}}},
                          {"d3", 50}},
                         {{"member", "twice(int)"},
                          {"a", {{"d1", 50}, {"d2", 50}}},
                          {"b", {{"d1", 50}, {"d2", 50}}},
                          {"d3", 50}}}}};
    CHECK_THROWS_WITH_AS(parse_scores(bad.dump(), ctx), doctest::Contains("200"),
                         InvalidTrialError);

    nlohmann::json fractional = bad;
    fractional["members"][0]["a"]["d1"] = 75.5;
    CHECK_THROWS_WITH_AS(parse_scores(fractional.dump(), ctx),
                         doctest::Contains("not an integer"), InvalidTrialError);
  }
}

TEST_CASE("invalid trials are retried under fresh tags, then abandoned") {
  SourceUnit unit = sample_unit();
  DocSet jml = docs_for(unit, Variant::kJml, {0, 1});
  DocSet baseline = docs_for(unit, Variant::kBaseline, {0, 1});
  const std::vector<std::string> members = expected_members(jml, baseline, unit);

  EvalConfig config;
  config.model = "docjudge-xl";
  config.endpoint = "http://example.invalid/v1";
  config.trials = 2;
  config.max_retries_per_trial = 2;

  TransportConfig tconfig;
  tconfig.endpoint = config.endpoint;
  tconfig.retry_backoff_ms = 0;

  SUBCASE("one bad attempt, then a good one") {
    testsupport::TempDir dir("jmldoc-eval-retry");
    auto http = std::make_shared<FnHttpClient>(
        [&](const std::string&, const std::string&, const FnHttpClient::Headers& headers) {
          const std::string* tag = testsupport::header_value(headers, "X-Request-Tag");
          REQUIRE(tag != nullptr);
          // Trial 0 garbles its first attempt; the retry and trial 1 succeed.
          if (*tag == "Sample/eval/trial0") {
            return HttpClient::Response{200, testsupport::chat_envelope("garbled output")};
          }
          REQUIRE((*tag == "Sample/eval/trial0/retry1" || *tag == "Sample/eval/trial1"));
          return HttpClient::Response{200, testsupport::chat_envelope(judge_answer(members, 60))};
        });
    Transport transport(tconfig, Cassette(CassetteMode::kLive, dir.path()), http);
    EvalRunResult result =
        run_eval_trials(jml, baseline, {}, unit, sample_rubric(), config, transport);

    REQUIRE(result.trials.size() == 2);
    REQUIRE(result.meta.size() == 2);
    CHECK(result.meta[0].attempts == 2);
    CHECK(result.meta[1].attempts == 1);
    CHECK(result.meta[0].request_hash != result.meta[1].request_hash);
    CHECK(http->calls == 3);
    CHECK(result.meta[0].label_a == derive_label_map("Sample", 0).label_a);
  }

  SUBCASE("a trial that never validates aborts the run") {
    testsupport::TempDir dir("jmldoc-eval-abort");
    auto http = std::make_shared<FnHttpClient>(
        [](const std::string&, const std::string&, const FnHttpClient::Headers&) {
          return HttpClient::Response{200, testsupport::chat_envelope("still garbled")};
        });
    Transport transport(tconfig, Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK_THROWS_WITH_AS(
        run_eval_trials(jml, baseline, {}, unit, sample_rubric(), config, transport),
        doctest::Contains("stayed invalid after 3 attempts"), Error);
    CHECK(http->calls == 3);  // 1 + 2 retries, then give up
  }
}

TEST_CASE("rounding is half-up at every boundary") {
  CHECK(round_half_up(84.5) == 85);
  CHECK(round_half_up(84.499999) == 84);
  CHECK(round_half_up(0.5) == 1);
  CHECK(round_half_up(1.5) == 2);
  CHECK(round_half_up(2.0) == 2);
  CHECK(round_half_up(91.5) == 92);
  CHECK(round_half_up(70.0 + 1.0 / 3.0 + 1.0 / 3.0 + 1.0 / 3.0) == 71);
}

TEST_CASE("aggregation means match a summation oracle") {
  auto member_score = [](const std::string& member, int d1a, int d2a, int d1b, int d2b, int d3) {
    MemberScore score;
    score.member = member;
    score.no_jml_d1 = d1a;
    score.no_jml_d2 = d2a;
    score.jml_d1 = d1b;
    score.jml_d2 = d2b;
    score.d3 = d3;
    return score;
  };

  SUBCASE("hand-checked boundary set") {
    TrialScore t0{0, {member_score("m", 84, 70, 91, 70, 90)}};
    TrialScore t1{1, {member_score("m", 85, 71, 92, 71, 92)}};
    TrialScore t2{2, {member_score("m", 84, 71, 92, 73, 94)}};
    // no_jml_d1 mean 84.333 -> 84; jml_d1 mean 91.666 -> 92;
    // no_jml_d2 mean 70.666 -> 71; jml_d2 mean 71.333 -> 71; d3 mean 92 -> 92.
    AggregateScore agg = aggregate({t0, t1, t2});
    REQUIRE(agg.members.size() == 1);
    CHECK(agg.trial_count == 3);
    CHECK(agg.members[0].no_jml_d1.rounded == 84);
    CHECK(agg.members[0].jml_d1.rounded == 92);
    CHECK(agg.members[0].no_jml_d2.rounded == 71);
    CHECK(agg.members[0].jml_d2.rounded == 71);
    CHECK(agg.members[0].d3.rounded == 92);
    CHECK(agg.members[0].d3.min == 90);
    CHECK(agg.members[0].d3.max == 94);

    // An exact .5 mean rounds up: (84 + 85) / 2 = 84.5 -> 85.
    AggregateScore half = aggregate({TrialScore{0, {member_score("m", 84, 0, 0, 0, 0)}},
                                     TrialScore{1, {member_score("m", 85, 0, 0, 0, 0)}}});
    CHECK(half.members[0].no_jml_d1.raw_mean == doctest::Approx(84.5).epsilon(1e-12));
    CHECK(half.members[0].no_jml_d1.rounded == 85);
  }

  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(aggregate({}), doctest::Contains("zero"), Error);
    TrialScore a{0, {member_score("m", 1, 1, 1, 1, 1)}};
    TrialScore b{1, {member_score("other", 1, 1, 1, 1, 1)}};
    CHECK_THROWS_WITH_AS(aggregate({a, b}), doctest::Contains("different member sets"), Error);
  }

  SUBCASE("randomized against the oracle") {
    std::mt19937_64 rng(20260816);
    for (int iteration = 0; iteration < 1000; ++iteration) {
      CAPTURE(iteration);
      const int member_count = std::uniform_int_distribution<int>(1, 5)(rng);
      const int trial_count = std::uniform_int_distribution<int>(1, 7)(rng);
      std::uniform_int_distribution<int> score(0, 100);

      std::vector<TrialScore> trials;
      // sums[m][cell] accumulated naively as the oracle.
      std::vector<std::array<long long, 5>> sums(member_count, {0, 0, 0, 0, 0});
      for (int t = 0; t < trial_count; ++t) {
        TrialScore trial;
        trial.trial = t;
        for (int m = 0; m < member_count; ++m) {
          MemberScore ms = member_score("m" + std::to_string(m), score(rng), score(rng),
                                        score(rng), score(rng), score(rng));
          sums[m][0] += ms.no_jml_d1;
          sums[m][1] += ms.no_jml_d2;
          sums[m][2] += ms.jml_d1;
          sums[m][3] += ms.jml_d2;
          sums[m][4] += ms.d3;
          trial.members.push_back(std::move(ms));
        }
        trials.push_back(std::move(trial));
      }

      AggregateScore agg = aggregate(trials);
      REQUIRE(agg.members.size() == static_cast<std::size_t>(member_count));
      for (int m = 0; m < member_count; ++m) {
        const MemberAggregate& got = agg.members[m];
        const AggregateCell* cells[] = {&got.no_jml_d1, &got.no_jml_d2, &got.jml_d1,
                                        &got.jml_d2, &got.d3};
        for (int c = 0; c < 5; ++c) {
          const double expected = static_cast<double>(sums[m][c]) / trial_count;
          REQUIRE(std::abs(cells[c]->raw_mean - expected) < 1e-9);
          REQUIRE(cells[c]->rounded == round_half_up(expected));
        }
      }
    }
  }
}

TEST_CASE("reports carry the table, the class summary, and provenance") {
  auto trial = [](int t, int shift) {
    TrialScore score;
    score.trial = t;
    MemberScore cls;
    cls.member = "Sample";
    cls.no_jml_d1 = 70 + shift;
    cls.no_jml_d2 = 84 + shift;
    cls.jml_d1 = 80 + shift;
    cls.jml_d2 = 91 + shift;
    cls.d3 = 85;
    MemberScore twice;
    twice.member = "twice(int)";
    twice.no_jml_d1 = 60 + shift;
    twice.no_jml_d2 = 65 + shift;
    twice.jml_d1 = 75 + shift;
    twice.jml_d2 = 82 + shift;
    twice.d3 = 88;
    score.members = {cls, twice};
    return score;
  };
  AggregateScore agg = aggregate({trial(0, 0), trial(1, 1), trial(2, 2)});

  std::vector<ReportMemberMeta> meta;
  meta.push_back({"Sample", "Sample", true, 2});
  meta.push_back({"twice(int)", "twice", false, 3});

  ReportProvenance provenance;
  provenance.generator_model = "docwriter-xl";
  provenance.analyzer_model = "docjudge-xl";
  provenance.baseline_template_hash = "1111111111111111";
  provenance.jml_template_hash = "2222222222222222";
  provenance.rubric_hash = "3333333333333333";
  provenance.config_hash = "4444444444444444";
  provenance.generator_trials = 1;
  provenance.analyzer_trials = 3;

  ReportFiles files = emit_report(agg, meta, provenance, "Sample");

  // Means with shift 0,1,2 land on x+1 exactly.
  CHECK(files.markdown.find("| twice | 61 | 66 | 76 | 83 | 88 | 3 |") != std::string::npos);
  CHECK(files.markdown.find("Headline (dedicated class-level Javadoc score): JML 92 vs NO-JML 85.") !=
        std::string::npos);
  CHECK(files.markdown.find("| Method | NO-JML D1 | NO-JML D2 | JML D1 | JML D2 | D3 | # Invariants |") !=
        std::string::npos);
  CHECK(files.markdown.find("docjudge-xl") != std::string::npos);
  CHECK(files.markdown.find("3333333333333333") != std::string::npos);

  const nlohmann::json machine = nlohmann::json::parse(files.machine_json);
  CHECK(machine["unit"] == "Sample");
  CHECK(machine["trial_count"] == 3);
  CHECK(machine["provenance"]["analyzer_trials"] == 3);
  CHECK(machine["warnings"].empty());
  bool found_twice = false;
  for (const auto& row : machine["rows"]) {
    if (row["member"] == "twice(int)") {
      found_twice = true;
      CHECK(row["jml_d2"]["rounded"] == 83);
      CHECK(row["jml_d2"]["raw_mean"] == doctest::Approx(83.0));
      CHECK(row["invariants"] == 3);
      CHECK(row["kind"] == "method");
    }
  }
  CHECK(found_twice);

  // Members with no verified clauses are called out.
  std::vector<ReportMemberMeta> bare = meta;
  bare[1].invariant_count = 0;
  ReportFiles warned = emit_report(agg, bare, provenance, "Sample");
  CHECK(warned.markdown.find("No verified invariants were attached to: twice.") !=
        std::string::npos);
  const nlohmann::json warned_machine = nlohmann::json::parse(warned.machine_json);
  CHECK(warned_machine["warnings"].size() == 1);
}
