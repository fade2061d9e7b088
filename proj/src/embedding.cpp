#include "wordbias/embedding.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wordbias/errors.hpp"
#include "wordbias/io_util.hpp"

namespace wordbias {

namespace {

bool is_valid_utf8(const std::string& s) {
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = p[i];
    int extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      if (c < 0xC2) return false;  // overlong
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      if (c > 0xF4) return false;  // beyond U+10FFFF
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;  // continuation bytes missing
    for (int k = 1; k <= extra; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

float read_le_float(const unsigned char* bytes) {
  std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) |
                       static_cast<std::uint32_t>(bytes[1]) << 8 |
                       static_cast<std::uint32_t>(bytes[2]) << 16 |
                       static_cast<std::uint32_t>(bytes[3]) << 24;
  float value;
  std::memcpy(&value, &bits, sizeof value);
  return value;
}

void write_le_float(float value, unsigned char* bytes) {
  std::uint32_t bits;
  std::memcpy(&bits, &value, sizeof bits);
  bytes[0] = static_cast<unsigned char>(bits & 0xFF);
  bytes[1] = static_cast<unsigned char>((bits >> 8) & 0xFF);
  bytes[2] = static_cast<unsigned char>((bits >> 16) & 0xFF);
  bytes[3] = static_cast<unsigned char>((bits >> 24) & 0xFF);
}

[[noreturn]] void truncated(const std::string& path, std::streamoff offset) {
  throw DataError(path + ": truncated file at byte offset " + std::to_string(offset));
}

}  // namespace

Embedding::Embedding(std::vector<std::string> vocab, RowMat matrix, bool normalized)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)), normalized_(normalized) {
  if (static_cast<Eigen::Index>(vocab_.size()) != matrix_.rows()) {
    throw DataError("embedding: vocab size " + std::to_string(vocab_.size()) +
                    " does not match matrix rows " + std::to_string(matrix_.rows()));
  }
  if (matrix_.cols() < 1) throw DataError("embedding: dimension must be positive");
  if (!matrix_.allFinite()) throw DataError("embedding: matrix contains non-finite values");
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    auto [it, inserted] = index_.emplace(vocab_[i], static_cast<int>(i));
    if (!inserted) throw DataError("embedding: duplicate token '" + vocab_[i] + "'");
  }
  if (normalized_) {
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      if (std::abs(matrix_.row(i).norm() - 1.0) > 1e-6) {
        throw DataError("embedding: row for '" + vocab_[i] +
                        "' is not unit norm but normalized flag is set");
      }
    }
  }
}

std::optional<int> Embedding::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Embedding::require(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw DataError("token '" + token + "' not in vocabulary");
  return it->second;
}

void VocabFilter::validate() const {
  if (max_rank < 1) throw ConfigError("vocab filter: max_rank must be >= 1");
  if (max_token_len < 1) throw ConfigError("vocab filter: max_token_len must be >= 1");
}

bool VocabFilter::keeps(const std::string& token) const {
  if (token.empty()) return false;
  if (static_cast<int>(token.size()) > max_token_len) return false;
  for (unsigned char c : token) {
    if ((c >= 'a' && c <= 'z') || c == '_') continue;  // underscore joins phrases
    if (c >= 'A' && c <= 'Z') {
      if (!allow_uppercase) return false;
      continue;
    }
    if (!allow_digits_punct) return false;
  }
  return true;
}

Embedding load_word2vec_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open embedding file: " + path);
  std::ostringstream raw;
  raw << in.rdbuf();
  const std::string data = raw.str();
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t pos = 0;

  const std::size_t header_end = data.find('\n');
  if (header_end == std::string::npos) truncated(path, static_cast<std::streamoff>(data.size()));
  long long vocab_size = 0, dim = 0;
  std::istringstream hs(data.substr(0, header_end));
  std::string extra;
  if (!(hs >> vocab_size >> dim) || (hs >> extra) || vocab_size < 1 || dim < 1) {
    throw DataError(path + ": malformed header '" + data.substr(0, header_end) + "'");
  }
  pos = header_end + 1;

  std::vector<std::string> vocab;
  vocab.reserve(vocab_size);
  RowMat matrix(vocab_size, dim);
  const std::size_t vector_bytes = static_cast<std::size_t>(dim) * 4;

  for (long long rec = 0; rec < vocab_size; ++rec) {
    while (pos < data.size() && data[pos] == '\n') ++pos;
    const std::size_t token_start = pos;
    while (pos < data.size() && data[pos] != ' ') ++pos;
    if (pos >= data.size()) truncated(path, static_cast<std::streamoff>(data.size()));
    std::string token = data.substr(token_start, pos - token_start);
    if (!is_valid_utf8(token)) {
      throw DataError(path + ": token in record " + std::to_string(rec) +
                      " is not valid UTF-8");
    }
    ++pos;  // the separating space
    if (pos + vector_bytes > data.size()) {
      truncated(path, static_cast<std::streamoff>(data.size()));
    }
    for (long long j = 0; j < dim; ++j) {
      matrix(rec, j) = static_cast<double>(read_le_float(bytes + pos + 4 * j));
    }
    pos += vector_bytes;
    vocab.push_back(std::move(token));
  }
  return Embedding(std::move(vocab), std::move(matrix), false);
}

Embedding load_text_embedding(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file: " + path);

  std::string line;
  long long line_no = 0;
  long long declared_vocab = -1, declared_dim = -1;
  if (has_header) {
    if (!std::getline(in, line)) throw DataError(path + ": missing header line");
    ++line_no;
    std::istringstream hs(line);
    if (!(hs >> declared_vocab >> declared_dim) || declared_vocab < 1 || declared_dim < 1) {
      throw DataError(path + ": malformed header '" + line + "'");
    }
  }

  std::vector<std::string> vocab;
  std::vector<double> values;
  long long dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    long long count = 0;
    double v;
    while (ls >> v) {
      values.push_back(v);
      ++count;
    }
    if (!ls.eof()) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": malformed number");
    }
    if (count == 0) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": no values after token");
    }
    if (dim < 0) {
      dim = count;
    } else if (count != dim) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, found " + std::to_string(count));
    }
    vocab.push_back(std::move(token));
  }
  if (vocab.empty()) throw DataError(path + ": no embedding rows");
  if (declared_vocab >= 0 && declared_vocab != static_cast<long long>(vocab.size())) {
    throw DataError(path + ": header declares " + std::to_string(declared_vocab) +
                    " rows, file has " + std::to_string(vocab.size()));
  }
  if (declared_dim >= 0 && declared_dim != dim) {
    throw DataError(path + ": header declares dim " + std::to_string(declared_dim) +
                    ", rows have " + std::to_string(dim));
  }

  RowMat matrix(static_cast<Eigen::Index>(vocab.size()), dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    for (long long j = 0; j < dim; ++j) matrix(static_cast<Eigen::Index>(i), j) = values[i * dim + j];
  }
  // The Embedding constructor reports duplicate tokens.
  return Embedding(std::move(vocab), std::move(matrix), false);
}

void save_embedding(const Embedding& emb, const std::string& path,
                    EmbeddingFormat format, bool text_header) {
  std::ostringstream out;
  if (format == EmbeddingFormat::kBinary) {
    out << emb.size() << ' ' << emb.dim() << '\n';
    std::vector<unsigned char> buffer(static_cast<std::size_t>(emb.dim()) * 4);
    for (int i = 0; i < emb.size(); ++i) {
      out << emb.vocab()[i] << ' ';
      for (int j = 0; j < emb.dim(); ++j) {
        write_le_float(static_cast<float>(emb.matrix()(i, j)), buffer.data() + 4 * j);
      }
      out.write(reinterpret_cast<const char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size()));
      out << '\n';
    }
  } else {
    if (text_header) out << emb.size() << ' ' << emb.dim() << '\n';
    char num[40];
    for (int i = 0; i < emb.size(); ++i) {
      out << emb.vocab()[i];
      for (int j = 0; j < emb.dim(); ++j) {
        std::snprintf(num, sizeof num, " %.9g", emb.matrix()(i, j));
        out << num;
      }
      out << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

Embedding filter_vocabulary(const Embedding& emb, const VocabFilter& filter) {
  filter.validate();
  const int limit = std::min(emb.size(), filter.max_rank);
  std::vector<int> kept;
  for (int i = 0; i < limit; ++i) {
    if (filter.keeps(emb.vocab()[i])) kept.push_back(i);
  }
  if (kept.empty()) throw DataError("filter removed all tokens");
  std::vector<std::string> vocab;
  vocab.reserve(kept.size());
  RowMat matrix(static_cast<Eigen::Index>(kept.size()), emb.dim());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    vocab.push_back(emb.vocab()[kept[r]]);
    matrix.row(static_cast<Eigen::Index>(r)) = emb.matrix().row(kept[r]);
  }
  return Embedding(std::move(vocab), std::move(matrix), emb.normalized());
}

Embedding normalize_rows(const Embedding& emb) {
  RowMat matrix = emb.matrix();
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    const double norm = matrix.row(i).norm();
    if (norm < 1e-300) {
      throw DataError("normalize: zero vector for token '" + emb.vocab()[i] + "'");
    }
    matrix.row(i) /= norm;
  }
  return Embedding(emb.vocab(), std::move(matrix), true);
}

}  // namespace wordbias
