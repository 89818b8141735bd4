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

#ifndef JMLDOC_TRANSPORT_HPP_
#define JMLDOC_TRANSPORT_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jmldoc {

struct TransportMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct TransportRequest {
  std::string model;
  std::vector<TransportMessage> messages;
  double temperature = 0.0;
  std::string tag;  // provenance: "<unit>/<variant>/<trial>" or similar
  int max_output_tokens = 0;  // 0 means endpoint default
};

// Deterministic, platform-independent content hash over
// (model, messages, temperature, tag). Identical requests collide by design.
std::string hash_request(const TransportRequest& req);

enum class CassetteMode {
  kLive,
  kRecord,
  kReplay,
};

CassetteMode cassette_mode_from_name(std::string_view name);
std::string_view cassette_mode_name(CassetteMode mode);

// Content-addressed response store: one file per request hash, written with
// a write-then-rename discipline so readers never see partial entries.
class Cassette {
 public:
  Cassette(CassetteMode mode, std::filesystem::path dir);

  CassetteMode mode() const { return mode_; }
  const std::filesystem::path& dir() const { return dir_; }

  bool has(const std::string& hash) const;
  // Returns the stored response text; throws TransportError when absent.
  std::string load(const std::string& hash) const;
  void store(const std::string& hash, const TransportRequest& request,
             const std::string& response, const std::string& endpoint) const;

  std::filesystem::path entry_path(const std::string& hash) const;

 private:
  CassetteMode mode_;
  std::filesystem::path dir_;
};

// Minimal injectable network layer so tests can replace or forbid I/O.
class HttpClient {
 public:
  struct Response {
    int status = 0;
    std::string body;
  };

  virtual ~HttpClient() = default;
  virtual Response post_json(
      const std::string& url, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

// Real client over HTTP(S).
std::unique_ptr<HttpClient> make_http_client();
// Client whose every call throws; proves that a code path is network-free.
std::unique_ptr<HttpClient> make_failing_http_client();

struct TransportConfig {
  std::string endpoint;  // base locator, e.g. "http://127.0.0.1:8080/v1"
  std::string auth_token_env = "JMLDOC_API_TOKEN";
  int max_retries = 2;     // extra attempts after the first failure
  int retry_backoff_ms = 200;
};

// Chat-completion client routed through the cassette. Modes:
//   live:   network call, nothing stored
//   record: network call, response stored under the request hash
//   replay: stored response returned, the network layer is never touched
class Transport {
 public:
  Transport(TransportConfig config, Cassette cassette,
            std::shared_ptr<HttpClient> http);

  std::string send(const TransportRequest& req);

  const Cassette& cassette() const { return cassette_; }
  const TransportConfig& config() const { return config_; }

 private:
  std::string call_endpoint(const TransportRequest& req);

  TransportConfig config_;
  Cassette cassette_;
  std::shared_ptr<HttpClient> http_;
};

}  // namespace jmldoc

#endif  // JMLDOC_TRANSPORT_HPP_
