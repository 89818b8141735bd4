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

#include <cstdlib>
#include <memory>
#include <set>
#include <string>

#include "jmldoc/error.hpp"
#include "jmldoc/transport.hpp"
#include "support.hpp"

using namespace jmldoc;
using testsupport::FnHttpClient;

namespace {

TransportRequest sample_request(const std::string& tag = "unit/baseline/trial0") {
  TransportRequest req;
  req.model = "docwriter-xl";
  req.messages = {{"user", "Document this class."}};
  req.temperature = 0.0;
  req.tag = tag;
  req.max_output_tokens = 256;
  return req;
}

TransportConfig fast_config() {
  TransportConfig config;
  config.endpoint = "http://example.invalid/v1";
  config.max_retries = 2;
  config.retry_backoff_ms = 0;
  return config;
}

std::shared_ptr<FnHttpClient> ok_client(const std::string& content) {
  return std::make_shared<FnHttpClient>(
      [content](const std::string&, const std::string&, const FnHttpClient::Headers&) {
        return HttpClient::Response{200, testsupport::chat_envelope(content)};
      });
}

}  // namespace

TEST_CASE("request hashes are deterministic and input-sensitive") {
  const TransportRequest base = sample_request();
  CHECK(hash_request(base) == hash_request(base));
  CHECK(hash_request(base).size() == 64);
  for (char c : hash_request(base)) {
    CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  }

  TransportRequest other = base;
  other.model = "docjudge-xl";
  CHECK(hash_request(other) != hash_request(base));

  other = base;
  other.messages[0].content += "!";
  CHECK(hash_request(other) != hash_request(base));

  other = base;
  other.temperature = 0.5;
  CHECK(hash_request(other) != hash_request(base));

  other = base;
  other.tag = "unit/baseline/trial1";
  CHECK(hash_request(other) != hash_request(base));

  // The token budget is delivery detail, not request identity.
  other = base;
  other.max_output_tokens = 9999;
  CHECK(hash_request(other) == hash_request(base));
}

TEST_CASE("a thousand distinct requests hash without collisions") {
  std::set<std::string> hashes;
  for (int i = 0; i < 1000; ++i) {
    TransportRequest req = sample_request("unit/eval/trial" + std::to_string(i));
    req.messages[0].content = "prompt variant " + std::to_string(i);
    hashes.insert(hash_request(req));
  }
  CHECK(hashes.size() == 1000);
}

TEST_CASE("cassette stores and loads by hash") {
  testsupport::TempDir dir("jmldoc-cassette");
  Cassette cassette(CassetteMode::kRecord, dir.path() / "store");

  const TransportRequest req = sample_request();
  const std::string hash = hash_request(req);
  CHECK_FALSE(cassette.has(hash));
  CHECK_THROWS_AS(cassette.load(hash), TransportError);

  cassette.store(hash, req, "stored text", "http://example.invalid/v1");
  CHECK(cassette.has(hash));
  CHECK(cassette.load(hash) == "stored text");
  CHECK(std::filesystem::exists(cassette.entry_path(hash)));

  // Response text survives byte-for-byte, including newlines and quotes.
  const std::string gnarly = "line one\n\"quoted\"\n\ttabbed\né→漢\n";
  cassette.store("feedbeef", req, gnarly, "");
  CHECK(cassette.load("feedbeef") == gnarly);
}

TEST_CASE("cassette mode names round-trip") {
  CHECK(cassette_mode_from_name("live") == CassetteMode::kLive);
  CHECK(cassette_mode_from_name("record") == CassetteMode::kRecord);
  CHECK(cassette_mode_from_name("replay") == CassetteMode::kReplay);
  CHECK(cassette_mode_name(CassetteMode::kReplay) == "replay");
  CHECK_THROWS_AS(cassette_mode_from_name("offline"), ConfigError);
}

TEST_CASE("record then replay returns identical bytes with no network") {
  testsupport::TempDir dir("jmldoc-transport");
  const std::string content = "Here is the documentation.\n\n```java\n/** Doc. */\n```\n";
  const TransportRequest req = sample_request();

  std::string recorded;
  {
    auto http = ok_client(content);
    Transport transport(fast_config(), Cassette(CassetteMode::kRecord, dir.path()), http);
    recorded = transport.send(req);
    CHECK(http->calls == 1);
  }
  CHECK(recorded == content);

  {
    Transport transport(fast_config(), Cassette(CassetteMode::kReplay, dir.path()),
                        make_failing_http_client());
    CHECK(transport.send(req) == recorded);
  }

  // A request that was never recorded cannot be replayed.
  {
    Transport transport(fast_config(), Cassette(CassetteMode::kReplay, dir.path()),
                        make_failing_http_client());
    CHECK_THROWS_AS(transport.send(sample_request("unit/baseline/trial7")), TransportError);
  }
}

TEST_CASE("live mode stores nothing") {
  testsupport::TempDir dir("jmldoc-live");
  auto http = ok_client("answer");
  Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);
  CHECK(transport.send(sample_request()) == "answer");
  CHECK_FALSE(std::filesystem::exists(dir.path() / "store"));
  CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("the failing client proves a path is network-free") {
  auto failing = make_failing_http_client();
  CHECK_THROWS_AS(failing->post_json("http://example.invalid", "{}", {}), TransportError);
}

TEST_CASE("server errors are retried, client errors are final") {
  testsupport::TempDir dir("jmldoc-retry");

  SUBCASE("a 500 gives way to a later success") {
    int remaining_failures = 2;
    auto http = std::make_shared<FnHttpClient>(
        [&](const std::string&, const std::string&, const FnHttpClient::Headers&) {
          if (remaining_failures > 0) {
            --remaining_failures;
            return HttpClient::Response{503, "overloaded"};
          }
          return HttpClient::Response{200, testsupport::chat_envelope("late answer")};
        });
    Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK(transport.send(sample_request()) == "late answer");
    CHECK(http->calls == 3);
  }

  SUBCASE("retries are bounded by the configuration") {
    auto http = std::make_shared<FnHttpClient>(
        [](const std::string&, const std::string&, const FnHttpClient::Headers&) {
          return HttpClient::Response{500, "down"};
        });
    TransportConfig config = fast_config();
    config.max_retries = 1;
    Transport transport(config, Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK_THROWS_WITH_AS(transport.send(sample_request()), doctest::Contains("500"),
                         TransportError);
    CHECK(http->calls == 2);
  }

  SUBCASE("a 404 is not retried") {
    auto http = std::make_shared<FnHttpClient>(
        [](const std::string&, const std::string&, const FnHttpClient::Headers&) {
          return HttpClient::Response{404, "no such path"};
        });
    Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK_THROWS_AS(transport.send(sample_request()), TransportError);
    CHECK(http->calls == 1);
  }

  SUBCASE("connection failures are retried until attempts run out") {
    auto http = std::make_shared<FnHttpClient>(
        [](const std::string&, const std::string&,
           const FnHttpClient::Headers&) -> HttpClient::Response {
          throw TransportError("connection refused");
        });
    Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK_THROWS_WITH_AS(transport.send(sample_request()), doctest::Contains("refused"),
                         TransportError);
    CHECK(http->calls == 3);
  }
}

TEST_CASE("malformed completion bodies are final errors") {
  testsupport::TempDir dir("jmldoc-body");
  auto check_final = [&](const std::string& body, const char* fragment) {
    auto http = std::make_shared<FnHttpClient>(
        [body](const std::string&, const std::string&, const FnHttpClient::Headers&) {
          return HttpClient::Response{200, body};
        });
    Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);
    CHECK_THROWS_WITH_AS(transport.send(sample_request()), doctest::Contains(fragment),
                         TransportError);
    CHECK(http->calls == 1);
  };
  check_final("not json", "unparseable");
  check_final("{\"choices\":[]}", "no completion choices");
  check_final("{\"choices\":[{\"message\":{}}]}", "without text content");
}

TEST_CASE("the wire request carries the tag in a header, not the body") {
  testsupport::TempDir dir("jmldoc-wire");
  auto http = ok_client("fine");
  Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);

  unsetenv("JMLDOC_API_TOKEN");
  TransportRequest req = sample_request("unitX/jml/trial3");
  transport.send(req);

  CHECK(http->last_url == "http://example.invalid/v1/chat/completions");
  const std::string* tag = testsupport::header_value(http->last_headers, "X-Request-Tag");
  REQUIRE(tag != nullptr);
  CHECK(*tag == "unitX/jml/trial3");
  CHECK(http->last_body.find("unitX/jml/trial3") == std::string::npos);
  CHECK(http->last_body.find("docwriter-xl") != std::string::npos);
  CHECK(http->last_body.find("Document this class.") != std::string::npos);
  CHECK(testsupport::header_value(http->last_headers, "Authorization") == nullptr);

  setenv("JMLDOC_API_TOKEN", "sekrit", 1);
  transport.send(req);
  const std::string* auth = testsupport::header_value(http->last_headers, "Authorization");
  REQUIRE(auth != nullptr);
  CHECK(*auth == "Bearer sekrit");
  unsetenv("JMLDOC_API_TOKEN");
}

TEST_CASE("requests are validated before any network activity") {
  testsupport::TempDir dir("jmldoc-validate");
  auto http = ok_client("unused");
  Transport transport(fast_config(), Cassette(CassetteMode::kLive, dir.path()), http);

  TransportRequest empty;
  empty.model = "m";
  CHECK_THROWS_WITH_AS(transport.send(empty), doctest::Contains("no messages"), TransportError);

  TransportRequest negative = sample_request();
  negative.temperature = -1.0;
  CHECK_THROWS_AS(transport.send(negative), TransportError);
  CHECK(http->calls == 0);
}
