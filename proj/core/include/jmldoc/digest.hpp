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

#ifndef JMLDOC_DIGEST_HPP
#define JMLDOC_DIGEST_HPP

#include <string>
#include <string_view>

namespace jmldoc {

// SHA-256 of the input, lowercase hex (64 chars). Platform-independent.
std::string sha256_hex(std::string_view data);

// Short form used for human-facing identifiers (first 16 hex chars).
std::string sha256_hex16(std::string_view data);

}  // namespace jmldoc

#endif  // JMLDOC_DIGEST_HPP
