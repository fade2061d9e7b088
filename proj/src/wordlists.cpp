#include "wordbias/wordlists.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "wordbias/errors.hpp"
#include "wordbias/io_util.hpp"

namespace wordbias {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool is_skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list file: " + path);
  return in;
}

}  // namespace

std::vector<std::string> load_word_list(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (is_skippable(line)) continue;
    const std::string token = trim(line);
    if (seen.insert(token).second) words.push_back(token);
  }
  return words;
}

std::vector<std::vector<std::string>> load_word_sets(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::vector<std::string>> sets;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::vector<std::string> set;
    std::istringstream ls(line);
    std::string piece;
    while (std::getline(ls, piece, ',')) {
      const std::string token = trim(piece);
      if (token.empty()) {
        throw DataError(path + ": line " + std::to_string(line_no) + ": empty token");
      }
      set.push_back(token);
    }
    if (set.empty()) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": empty set");
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

void save_word_list(const std::vector<std::string>& words, const std::string& path) {
  std::ostringstream out;
  for (const auto& w : words) out << w << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace wordbias
