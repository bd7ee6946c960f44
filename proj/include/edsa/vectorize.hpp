#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "edsa/preprocess.hpp"

namespace edsa::vectorize {

struct Vocabulary {
  std::vector<std::string> terms;                    // lexicographic
  std::unordered_map<std::string, uint32_t> index;   // term -> position
  std::vector<uint32_t> doc_freq;                    // n_j per term
  uint64_t total_docs = 0;                           // n

  size_t size() const { return terms.size(); }
  // -1 when absent.
  int64_t id_of(std::string_view term) const;
  // FNV-1a over terms joined by '\n'; model files pin this.
  uint64_t hash() const;

  static Vocabulary build(std::span<const preprocess::TokenizedDoc> docs,
                          uint32_t min_count = 0);
};

enum class Scheme { RawFreq, TF, TFIDF };

std::string_view scheme_name(Scheme s);

struct SparseRow {
  std::vector<uint32_t> idx;  // strictly increasing
  std::vector<double> val;

  size_t nnz() const { return idx.size(); }
};

struct DocTermMatrix {
  Scheme scheme = Scheme::RawFreq;
  size_t cols = 0;
  std::vector<SparseRow> rows;
  std::vector<uint64_t> doc_ids;
};

// (f / doc_len) * ln(n / n_j); natural log, unsmoothed.
double tfidf(double term_count, size_t doc_len, uint64_t n, uint64_t n_j);

// Vocabulary over all tokens plus weights per scheme.
std::pair<Vocabulary, DocTermMatrix> build_matrix(
    std::span<const preprocess::TokenizedDoc> docs, Scheme scheme,
    uint32_t min_count = 0);

// Vectorize against an existing vocabulary (held-out folds, prediction);
// unknown tokens are dropped, IDF uses the vocabulary's stored counts.
SparseRow vectorize_doc(const Vocabulary& vocab,
                        std::span<const std::string> tokens, Scheme scheme);
DocTermMatrix vectorize_docs(const Vocabulary& vocab,
                             std::span<const preprocess::TokenizedDoc> docs,
                             Scheme scheme);

}  // namespace edsa::vectorize
