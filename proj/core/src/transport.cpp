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

#include "jmldoc/transport.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

// TLS endpoints need the OpenSSL-backed client.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "jmldoc/digest.hpp"
#include "jmldoc/error.hpp"

namespace jmldoc {

namespace {

nlohmann::json request_to_json(const TransportRequest& req) {
  nlohmann::json messages = nlohmann::json::array();
  for (const TransportMessage& m : req.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  return nlohmann::json{{"model", req.model},
                        {"messages", std::move(messages)},
                        {"temperature", req.temperature},
                        {"tag", req.tag}};
}

}  // namespace

std::string hash_request(const TransportRequest& req) {
  return sha256_hex(request_to_json(req).dump());
}

CassetteMode cassette_mode_from_name(std::string_view name) {
  if (name == "live") return CassetteMode::kLive;
  if (name == "record") return CassetteMode::kRecord;
  if (name == "replay") return CassetteMode::kReplay;
  throw ConfigError("unknown cassette mode \"" + std::string(name) +
                    "\" (expected live, record, or replay)");
}

std::string_view cassette_mode_name(CassetteMode mode) {
  switch (mode) {
    case CassetteMode::kLive:
      return "live";
    case CassetteMode::kRecord:
      return "record";
    case CassetteMode::kReplay:
      return "replay";
  }
  return "";
}

Cassette::Cassette(CassetteMode mode, std::filesystem::path dir)
    : mode_(mode), dir_(std::move(dir)) {}

std::filesystem::path Cassette::entry_path(const std::string& hash) const {
  return dir_ / (hash + ".json");
}

bool Cassette::has(const std::string& hash) const {
  std::error_code ec;
  return std::filesystem::exists(entry_path(hash), ec);
}

std::string Cassette::load(const std::string& hash) const {
  std::ifstream in(entry_path(hash), std::ios::binary);
  if (!in) {
    throw TransportError("replay cache miss for request hash " + hash);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json entry;
  try {
    entry = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw TransportError("corrupt cassette entry " + hash + ": " + e.what());
  }
  if (!entry.contains("response") || !entry["response"].is_string()) {
    throw TransportError("corrupt cassette entry " + hash +
                         ": missing response text");
  }
  return entry["response"].get<std::string>();
}

void Cassette::store(const std::string& hash, const TransportRequest& request,
                     const std::string& response,
                     const std::string& endpoint) const {
  std::filesystem::create_directories(dir_);
  nlohmann::json entry{
      {"hash", hash},
      {"request", request_to_json(request)},
      {"response", response},
      {"metadata",
       {{"endpoint", endpoint},
        {"recorded_at_unix",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()}}}};

  std::filesystem::path final_path = entry_path(hash);
  std::filesystem::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw TransportError("cannot write cassette entry " +
                           tmp_path.string());
    }
    out << entry.dump(2) << "\n";
  }
  std::filesystem::rename(tmp_path, final_path);
}

namespace {

class HttplibClient : public HttpClient {
 public:
  Response post_json(const std::string& url, const std::string& body,
                     const std::vector<std::pair<std::string, std::string>>&
                         headers) override {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw TransportError("endpoint locator missing scheme: " + url);
    }
    std::size_t path_start = url.find('/', scheme_end + 3);
    std::string origin =
        path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(60, 0);
    httplib::Headers hl;
    for (const auto& [k, v] : headers) hl.emplace(k, v);
    httplib::Result result = client.Post(path, hl, body, "application/json");
    if (!result) {
      throw TransportError("request to " + url + " failed: " +
                           httplib::to_string(result.error()));
    }
    return Response{result->status, result->body};
  }
};

class FailingHttpClient : public HttpClient {
 public:
  Response post_json(const std::string& url, const std::string&,
                     const std::vector<std::pair<std::string, std::string>>&)
      override {
    throw TransportError("network disabled, attempted call to " + url);
  }
};

}  // namespace

std::unique_ptr<HttpClient> make_http_client() {
  return std::make_unique<HttplibClient>();
}

std::unique_ptr<HttpClient> make_failing_http_client() {
  return std::make_unique<FailingHttpClient>();
}

Transport::Transport(TransportConfig config, Cassette cassette,
                     std::shared_ptr<HttpClient> http)
    : config_(std::move(config)),
      cassette_(std::move(cassette)),
      http_(std::move(http)) {}

std::string Transport::call_endpoint(const TransportRequest& req) {
  if (config_.endpoint.empty()) {
    throw TransportError("no endpoint configured for live/record mode");
  }
  nlohmann::json body{{"model", req.model},
                      {"temperature", req.temperature}};
  nlohmann::json messages = nlohmann::json::array();
  for (const TransportMessage& m : req.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  if (req.max_output_tokens > 0) {
    body["max_tokens"] = req.max_output_tokens;
  }

  std::vector<std::pair<std::string, std::string>> headers;
  if (const char* token = std::getenv(config_.auth_token_env.c_str());
      token != nullptr && *token != '\0') {
    headers.emplace_back("Authorization", std::string("Bearer ") + token);
  }
  // The tag never enters the wire body; the header lets recording proxies
  // and test doubles tell otherwise-identical requests apart.
  if (!req.tag.empty()) {
    headers.emplace_back("X-Request-Tag", req.tag);
  }

  std::string url = config_.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";

  std::string last_error;
  int attempts = config_.max_retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && config_.retry_backoff_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry_backoff_ms * attempt));
    }
    HttpClient::Response response;
    try {
      response = http_->post_json(url, body.dump(), headers);
    } catch (const std::exception& e) {
      // Connection-level trouble is transient; retry while attempts remain.
      last_error = e.what();
      if (attempt + 1 >= attempts) break;
      continue;
    }
    if (response.status < 200 || response.status >= 300) {
      // Retry server-side trouble; client errors are final.
      last_error = "endpoint " + url + " returned status " +
                   std::to_string(response.status);
      if (response.status >= 500 && attempt + 1 < attempts) continue;
      throw TransportError(last_error);
    }
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(response.body);
    } catch (const nlohmann::json::parse_error& e) {
      throw TransportError("endpoint " + url +
                           " returned unparseable body: " + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty()) {
      throw TransportError("endpoint " + url +
                           " returned no completion choices");
    }
    const nlohmann::json& message = parsed["choices"][0]["message"];
    if (!message.contains("content") || !message["content"].is_string()) {
      throw TransportError("endpoint " + url +
                           " returned a choice without text content");
    }
    return message["content"].get<std::string>();
  }
  throw TransportError(last_error.empty()
                           ? "request to " + url + " failed"
                           : last_error);
}

std::string Transport::send(const TransportRequest& req) {
  if (req.messages.empty()) {
    throw TransportError("request has no messages");
  }
  if (req.temperature < 0) {
    throw TransportError("request temperature must be >= 0");
  }
  std::string hash = hash_request(req);
  switch (cassette_.mode()) {
    case CassetteMode::kReplay:
      return cassette_.load(hash);
    case CassetteMode::kRecord: {
      std::string response = call_endpoint(req);
      cassette_.store(hash, req, response, config_.endpoint);
      return response;
    }
    case CassetteMode::kLive:
      return call_endpoint(req);
  }
  throw TransportError("invalid cassette mode");
}

}  // namespace jmldoc
