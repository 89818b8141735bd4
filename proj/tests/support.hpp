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
// Shared helpers for the test binaries: fixture lookup, scratch directories,
// and a scriptable HTTP client for exercising the transport without sockets.

#ifndef JMLDOC_TESTS_SUPPORT_HPP
#define JMLDOC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jmldoc/transport.hpp"

namespace testsupport {

// Root of the shipped fixture tree. CTest sets JMLDOC_FIXTURES; running a
// test binary by hand falls back to the source-relative location.
inline std::filesystem::path fixtures_root() {
  if (const char* env = std::getenv("JMLDOC_FIXTURES"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::filesystem::path(__FILE__).parent_path().parent_path() / "fixtures";
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

// Every .java file under fixtures/corpus, sorted for reproducible iteration.
inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  const std::filesystem::path corpus = fixtures_root() / "corpus";
  for (const auto& entry : std::filesystem::recursive_directory_iterator(corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& stem) {
    static std::atomic<unsigned> counter{0};
    const unsigned n = counter.fetch_add(1);
    const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            (stem + "-" + std::to_string(static_cast<long long>(now)) + "-" + std::to_string(n));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// HttpClient backed by a callable, with call accounting for assertions about
// how often (or whether) the network layer was touched.
class FnHttpClient : public jmldoc::HttpClient {
 public:
  using Headers = std::vector<std::pair<std::string, std::string>>;
  using Handler = std::function<Response(const std::string& url, const std::string& body,
                                         const Headers& headers)>;

  explicit FnHttpClient(Handler handler) : handler_(std::move(handler)) {}

  Response post_json(const std::string& url, const std::string& body,
                     const Headers& headers) override {
    ++calls;
    last_url = url;
    last_body = body;
    last_headers = headers;
    return handler_(url, body, headers);
  }

  int calls = 0;
  std::string last_url;
  std::string last_body;
  Headers last_headers;

 private:
  Handler handler_;
};

inline const std::string* header_value(const FnHttpClient::Headers& headers,
                                       const std::string& name) {
  for (const auto& [key, value] : headers) {
    if (key == name) {
      return &value;
    }
  }
  return nullptr;
}

// Minimal chat-completion envelope the transport unwraps.
inline std::string chat_envelope(const std::string& content) {
  std::string escaped;
  escaped.reserve(content.size());
  for (char c : content) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      case '\r': escaped += "\\r"; break;
      case '\t': escaped += "\\t"; break;
      default: escaped += c; break;
    }
  }
  return R"({"choices":[{"message":{"content":")" + escaped + R"("}}]})";
}

}  // namespace testsupport

#endif  // JMLDOC_TESTS_SUPPORT_HPP
