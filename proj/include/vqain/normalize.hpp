#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vqain {

// Embedded copy of the shipped normalization data file.
extern const char* kAnswerNormalizationJson;

// Answer-normalization table: articles to drop, number words to map to
// digits, apostrophe-less contractions to repair. Ships as a versioned data
// file; its hash is recorded in every metric report.
struct NormTable {
  std::string version;
  std::set<std::string> articles;
  std::map<std::string, std::string> number_words;
  std::map<std::string, std::string> contractions;
  std::string sha256;

  static NormTable from_json_text(std::string_view text);
  static NormTable load(const std::filesystem::path& p);
  // Table compiled into the binary; identical to the shipped data file.
  static const NormTable& builtin();
};

// Split on ASCII whitespace; empty input yields no tokens.
std::vector<std::string> whitespace_tokens(std::string_view s);

// lowercase -> strip trailing punctuation -> fix contractions -> map number
// words -> drop articles -> collapse whitespace. Idempotent.
std::string normalize_answer(std::string_view s);
std::string normalize_answer(std::string_view s, const NormTable& table);

}  // namespace vqain
