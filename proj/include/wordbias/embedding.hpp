#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordbias/linalg.hpp"

namespace wordbias {

/// A vocabulary with one row vector per token. Immutable once built: every
/// transformation returns a fresh embedding, so a loaded instance can be
/// shared freely across threads.
class Embedding {
public:
  Embedding(std::vector<std::string> vocab, RowMat matrix, bool normalized);

  int size() const { return static_cast<int>(vocab_.size()); }
  int dim() const { return static_cast<int>(matrix_.cols()); }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const RowMat& matrix() const { return matrix_; }

  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  std::optional<int> index_of(const std::string& token) const;
  /// Row index of the token; throws DataError when absent.
  int require(const std::string& token) const;
  Vec vector_of(const std::string& token) const {
    return matrix_.row(require(token)).transpose();
  }

private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
  RowMat matrix_;
  bool normalized_;
};

/// Character rules used to keep or drop vocabulary entries. Input row order
/// is trusted as frequency order; only the first max_rank rows are examined.
struct VocabFilter {
  int max_rank = 50000;
  int max_token_len = 19;  // "fewer than 20 characters"
  bool allow_uppercase = false;
  bool allow_digits_punct = false;

  void validate() const;
  bool keeps(const std::string& token) const;
};

enum class EmbeddingFormat { kBinary, kText };

/// Reads the classic word2vec binary format: ASCII header "<vocab> <dim>\n",
/// then per record a space-terminated token followed by dim little-endian
/// float32 values and an optional '\n'.
Embedding load_word2vec_binary(const std::string& path);

/// Reads "token v1 ... vd" lines; when has_header the first line must be
/// "<vocab> <dim>".
Embedding load_text_embedding(const std::string& path, bool has_header);

/// Writes the embedding so the matching loader reproduces it: binary is
/// bit-exact at float32 precision, text round-trips within 1e-6.
void save_embedding(const Embedding& emb, const std::string& path,
                    EmbeddingFormat format, bool text_header = true);

/// Keeps tokens among the first max_rank rows that pass the character rules,
/// preserving relative order. Errors when nothing survives.
Embedding filter_vocabulary(const Embedding& emb, const VocabFilter& filter);

/// Rescales every row to unit length. Errors on a zero row, naming the token.
Embedding normalize_rows(const Embedding& emb);

}  // namespace wordbias
