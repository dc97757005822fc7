#pragma once

#include <filesystem>
#include <functional>
#include <string>

namespace vqain {

std::string read_text_file(const std::filesystem::path& p);

// Writes via a sibling temp file and rename so readers never observe a
// partially written artifact. Creates parent directories as needed.
void write_text_file_atomic(const std::filesystem::path& p, std::string_view content);

// Calls fn(line, line_number) for every line; line numbers are 1-based.
// A trailing newline does not produce an empty final line.
void for_each_line(const std::filesystem::path& p,
                   const std::function<void(std::string_view, size_t)>& fn);

}  // namespace vqain
