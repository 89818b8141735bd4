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

#ifndef JMLDOC_DOCGEN_HPP_
#define JMLDOC_DOCGEN_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jmldoc/source_model.hpp"
#include "jmldoc/transport.hpp"

namespace jmldoc {

enum class Variant {
  kBaseline,  // comment-stripped source, no annotations
  kJml,       // comment-stripped source with verified spec blocks injected
};

std::string_view variant_name(Variant variant);
Variant variant_from_name(std::string_view name);

struct PromptTemplate {
  std::string text;  // contains {class_source} and {instructions} exactly once
  Variant variant = Variant::kBaseline;
};

// Validates the placeholder invariant; throws ConfigError on violations.
PromptTemplate load_template(std::string_view text, Variant variant);
PromptTemplate load_template_file(const std::filesystem::path& path,
                                  Variant variant);

// Instruction text shared by both variants, so paired prompts differ only
// inside the embedded class source. Requests a class-level description plus
// summary, @param, @return and @throws per member, each block followed by the
// echoed declaration (which is what extract_docs keys on).
const std::string& default_instructions();

// Substitutes the placeholders. For the baseline variant the unit must be
// fully comment-stripped: any comment token in it is an error.
std::string build_prompt(const SourceUnit& unit, const PromptTemplate& tmpl,
                         std::string_view instructions);

struct GenerationConfig {
  std::string model;
  std::string endpoint;
  double temperature = 0.0;
  int max_output_tokens = 4096;
  int trials = 1;
};

struct GenerationResult {
  std::string response;
  std::string request_hash;  // transcript reference into the cassette store
};

// One generator call for one (unit, variant, trial); the tag makes the
// request hash unique per triple.
GenerationResult generate_docs(const std::string& prompt,
                               const GenerationConfig& config,
                               Transport& transport, const std::string& tag);

struct DocEntry {
  std::size_t anchor_index = 0;  // into unit.anchors
  std::string javadoc;           // begins "/**", ends "*/"
};

struct DocSet {
  std::string unit_id;
  Variant variant = Variant::kBaseline;
  int trial = 0;
  std::string transcript_ref;
  std::vector<DocEntry> entries;              // anchor order
  std::vector<std::size_t> undocumented;      // anchors with no block
  std::vector<std::string> unmatched_blocks;  // blocks matching no anchor

  const std::string* doc_for(std::size_t anchor_index) const;
};

// Pairs each Javadoc block in the response with the declaration echoed after
// it, then matches that declaration to a unit anchor by name and arity.
// Throws when the response contains no Javadoc blocks at all.
DocSet extract_docs(const std::string& response, const SourceUnit& unit,
                    Variant variant, int trial);

}  // namespace jmldoc

#endif  // JMLDOC_DOCGEN_HPP_
