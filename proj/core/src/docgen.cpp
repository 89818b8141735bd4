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

#include "jmldoc/docgen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "jmldoc/error.hpp"

namespace jmldoc {

std::string_view variant_name(Variant variant) {
  switch (variant) {
    case Variant::kBaseline:
      return "baseline";
    case Variant::kJml:
      return "jml";
  }
  return "";
}

Variant variant_from_name(std::string_view name) {
  if (name == "baseline") return Variant::kBaseline;
  if (name == "jml") return Variant::kJml;
  throw ConfigError("unknown variant \"" + std::string(name) +
                    "\" (expected baseline or jml)");
}

namespace {

std::size_t count_occurrences(std::string_view haystack,
                              std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

PromptTemplate load_template(std::string_view text, Variant variant) {
  for (std::string_view placeholder :
       {std::string_view("{class_source}"), std::string_view("{instructions}")}) {
    std::size_t n = count_occurrences(text, placeholder);
    if (n == 0) {
      throw ConfigError("prompt template is missing the " +
                        std::string(placeholder) + " placeholder");
    }
    if (n > 1) {
      throw ConfigError("prompt template contains " + std::string(placeholder) +
                        " more than once");
    }
  }
  PromptTemplate tmpl;
  tmpl.text = std::string(text);
  tmpl.variant = variant;
  return tmpl;
}

PromptTemplate load_template_file(const std::filesystem::path& path,
                                  Variant variant) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read prompt template " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_template(buf.str(), variant);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const std::string& default_instructions() {
  static const std::string kText =
      "Write Javadoc for the class below.\n"
      "Produce one class-level Javadoc block describing the purpose of the "
      "class, and one Javadoc block per method with a one-sentence summary, "
      "an @param tag for every parameter, an @return tag for non-void "
      "methods, and an @throws tag for every exception the method can "
      "raise.\n"
      "Print each Javadoc block immediately followed by the declaration it "
      "documents, exactly as the declaration appears in the source, and "
      "nothing else.";
  return kText;
}

std::string build_prompt(const SourceUnit& unit, const PromptTemplate& tmpl,
                         std::string_view instructions) {
  if (tmpl.variant == Variant::kBaseline) {
    SourceUnit reparsed = make_unit(unit.identifier, unit.text);
    for (const Token& token : reparsed.tokens) {
      if (token.kind == TokenKind::kLineComment ||
          token.kind == TokenKind::kBlockComment) {
        throw Error("baseline unit \"" + unit.identifier +
                    "\" still contains a comment at " + to_string(token.pos));
      }
    }
  }
  std::string prompt = tmpl.text;
  auto replace_once = [&prompt](std::string_view placeholder,
                                std::string_view value) {
    std::size_t pos = prompt.find(placeholder);
    prompt.replace(pos, placeholder.size(), value);
  };
  replace_once("{instructions}", instructions);
  replace_once("{class_source}", unit.text);
  return prompt;
}

GenerationResult generate_docs(const std::string& prompt,
                               const GenerationConfig& config,
                               Transport& transport, const std::string& tag) {
  TransportRequest request;
  request.model = config.model;
  request.messages.push_back({"user", prompt});
  request.temperature = config.temperature;
  request.max_output_tokens = config.max_output_tokens;
  request.tag = tag;

  GenerationResult result;
  result.request_hash = hash_request(request);
  result.response = transport.send(request);
  if (result.response.empty()) {
    throw TransportError("generator returned an empty response for " + tag);
  }
  return result;
}

const std::string* DocSet::doc_for(std::size_t anchor_index) const {
  for (const DocEntry& entry : entries) {
    if (entry.anchor_index == anchor_index) return &entry.javadoc;
  }
  return nullptr;
}

namespace {

struct DeclInfo {
  bool is_method = false;
  bool is_class = false;
  std::string name;
  std::size_t arity = 0;
};

// Reads the declaration snippet that follows a Javadoc block: everything up
// to the first '{' or ';', a blank line, or the next Javadoc block.
std::string declaration_snippet(const std::string& text, std::size_t from) {
  std::string snippet;
  std::size_t i = from;
  int newlines = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '{' || c == ';') break;
    if (text.compare(i, 3, "/**") == 0) break;
    if (c == '\n') {
      ++newlines;
      if (newlines >= 2 && !snippet.empty()) break;
      // Markdown fences around echoed code are tolerated.
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
      if (text.compare(j, 3, "```") == 0) {
        i = text.find('\n', j);
        if (i == std::string::npos) break;
        continue;
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      newlines = 0;
    }
    snippet += c;
    ++i;
  }
  return snippet;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

DeclInfo classify_declaration(const std::string& snippet) {
  DeclInfo info;
  // Method: a word directly before the first '(' that is not a keyword.
  std::size_t open = snippet.find('(');
  if (open != std::string::npos) {
    std::size_t e = open;
    while (e > 0 &&
           std::isspace(static_cast<unsigned char>(snippet[e - 1]))) {
      --e;
    }
    std::size_t b = e;
    while (b > 0 && word_char(snippet[b - 1])) --b;
    if (e > b) {
      info.name = snippet.substr(b, e - b);
      info.is_method = true;
      // Count top-level commas between the parens.
      int depth = 0;
      bool any = false;
      std::size_t commas = 0;
      for (std::size_t i = open + 1; i < snippet.size(); ++i) {
        char c = snippet[i];
        if (c == '(' || c == '<' || c == '[') ++depth;
        if (c == ')' && depth == 0) break;
        if (c == ')' || c == '>' || c == ']') --depth;
        if (c == ',' && depth == 0) ++commas;
        if (!std::isspace(static_cast<unsigned char>(c))) any = true;
      }
      info.arity = any ? commas + 1 : 0;
      return info;
    }
  }
  // Class-like declaration: "... class Name" / interface / enum.
  static const char* kKinds[] = {"class", "interface", "enum"};
  for (const char* kind : kKinds) {
    std::size_t pos = 0;
    std::string kw(kind);
    while ((pos = snippet.find(kw, pos)) != std::string::npos) {
      bool left_ok = pos == 0 || !word_char(snippet[pos - 1]);
      std::size_t after = pos + kw.size();
      bool right_ok = after < snippet.size() && !word_char(snippet[after]);
      if (left_ok && right_ok) {
        std::size_t b = after;
        while (b < snippet.size() &&
               std::isspace(static_cast<unsigned char>(snippet[b]))) {
          ++b;
        }
        std::size_t e = b;
        while (e < snippet.size() && word_char(snippet[e])) ++e;
        if (e > b) {
          info.is_class = true;
          info.name = snippet.substr(b, e - b);
          return info;
        }
      }
      pos = after;
    }
  }
  return info;
}

}  // namespace

DocSet extract_docs(const std::string& response, const SourceUnit& unit,
                    Variant variant, int trial) {
  DocSet docs;
  docs.unit_id = unit.identifier;
  docs.variant = variant;
  docs.trial = trial;

  std::vector<std::pair<std::size_t, std::string>> found;  // anchor → javadoc
  std::size_t pos = 0;
  std::size_t block_count = 0;
  while ((pos = response.find("/**", pos)) != std::string::npos) {
    std::size_t end = response.find("*/", pos + 3);
    if (end == std::string::npos) break;
    std::string javadoc = response.substr(pos, end + 2 - pos);
    ++block_count;
    std::string snippet = declaration_snippet(response, end + 2);
    DeclInfo decl = classify_declaration(snippet);

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t matched = kNone;
    if (decl.is_method) {
      for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
        const MemberAnchor& anchor = unit.anchors[i];
        if (anchor.kind != AnchorKind::kMethodDecl) continue;
        if (anchor.name() != decl.name) continue;
        if (anchor.parameter_types().size() != decl.arity) continue;
        matched = i;
        break;
      }
    } else if (decl.is_class) {
      for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
        const MemberAnchor& anchor = unit.anchors[i];
        if (anchor.kind != AnchorKind::kClassDecl) continue;
        if (anchor.name() != decl.name) continue;
        matched = i;
        break;
      }
    }

    if (matched == kNone) {
      docs.unmatched_blocks.push_back(std::move(javadoc));
    } else {
      bool duplicate = false;
      for (const auto& [idx, _] : found) {
        if (idx == matched) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        docs.unmatched_blocks.push_back(std::move(javadoc));
      } else {
        found.emplace_back(matched, std::move(javadoc));
      }
    }
    pos = end + 2;
  }

  if (block_count == 0) {
    throw Error("response for \"" + unit.identifier + "\" (" +
                std::string(variant_name(variant)) +
                ") contains no Javadoc blocks");
  }

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [idx, javadoc] : found) {
    docs.entries.push_back({idx, std::move(javadoc)});
  }
  for (std::size_t i = 0; i < unit.anchors.size(); ++i) {
    if (docs.doc_for(i) == nullptr) docs.undocumented.push_back(i);
  }
  return docs;
}

}  // namespace jmldoc
