#include "vqain/normalize.hpp"

#include <nlohmann/json.hpp>

#include <cctype>

#include "vqain/digest.hpp"
#include "vqain/error.hpp"
#include "vqain/io.hpp"

using json = nlohmann::json;

namespace vqain {

NormTable NormTable::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid normalization table: ") + e.what());
  }
  NormTable t;
  try {
    t.version = j.at("version").get<std::string>();
    for (const auto& a : j.at("articles")) t.articles.insert(a.get<std::string>());
    for (const auto& [k, v] : j.at("number_words").items())
      t.number_words[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("contractions").items())
      t.contractions[k] = v.get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid normalization table field: ") + e.what());
  }
  t.sha256 = sha256_hex(text);
  return t;
}

NormTable NormTable::load(const std::filesystem::path& p) {
  return from_json_text(read_text_file(p));
}

const NormTable& NormTable::builtin() {
  static const NormTable table = from_json_text(kAnswerNormalizationJson);
  return table;
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string normalize_answer(std::string_view s) {
  return normalize_answer(s, NormTable::builtin());
}

namespace {

std::string normalize_pass(std::string_view s, const NormTable& table) {
  std::string lowered;
  lowered.reserve(s.size());
  for (char c : s) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  while (!lowered.empty() &&
         std::ispunct(static_cast<unsigned char>(lowered.back())))
    lowered.pop_back();

  std::string out;
  for (auto& tok : whitespace_tokens(lowered)) {
    if (auto it = table.contractions.find(tok); it != table.contractions.end())
      tok = it->second;
    if (auto it = table.number_words.find(tok); it != table.number_words.end())
      tok = it->second;
    if (table.articles.count(tok)) continue;
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view s, const NormTable& table) {
  // Dropping a trailing article can expose new trailing punctuation, so run
  // the pass to a fixed point. Normalization must be idempotent.
  std::string cur = normalize_pass(s, table);
  for (;;) {
    std::string next = normalize_pass(cur, table);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

}  // namespace vqain
