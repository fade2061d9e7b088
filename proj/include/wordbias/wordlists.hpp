#pragma once

#include <string>
#include <vector>

namespace wordbias {

/// Newline-delimited token list. Blank lines and lines starting with '#'
/// are skipped; duplicates keep their first occurrence.
std::vector<std::string> load_word_list(const std::string& path);

/// One word set per line, tokens comma-separated. Blank and '#' comment
/// lines are skipped.
std::vector<std::vector<std::string>> load_word_sets(const std::string& path);

void save_word_list(const std::vector<std::string>& words, const std::string& path);

}  // namespace wordbias
