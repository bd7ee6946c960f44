#include "edsa/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "edsa/error.hpp"
#include "edsa/rng.hpp"

namespace edsa::vectorize {

int64_t Vocabulary::id_of(std::string_view term) const {
  auto it = index.find(std::string(term));
  return it == index.end() ? -1 : static_cast<int64_t>(it->second);
}

uint64_t Vocabulary::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : terms) {
    h = fnv1a64(t, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

Vocabulary Vocabulary::build(std::span<const preprocess::TokenizedDoc> docs,
                             uint32_t min_count) {
  std::map<std::string, uint32_t> df;  // ordered -> lexicographic indexing
  std::map<std::string, uint64_t> tf;
  for (const auto& d : docs) {
    std::vector<std::string> uniq(d.tokens.begin(), d.tokens.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto& t : uniq) ++df[t];
    for (const auto& t : d.tokens) ++tf[t];
  }
  Vocabulary v;
  v.total_docs = docs.size();
  for (auto& [term, n_j] : df) {
    if (min_count > 0 && tf[term] < min_count) continue;
    v.index.emplace(term, static_cast<uint32_t>(v.terms.size()));
    v.terms.push_back(term);
    v.doc_freq.push_back(n_j);
  }
  return v;
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::RawFreq: return "rawfreq";
    case Scheme::TF: return "tf";
    case Scheme::TFIDF: return "tfidf";
  }
  return "?";
}

double tfidf(double term_count, size_t doc_len, uint64_t n, uint64_t n_j) {
  if (n_j == 0)
    throw Error("vectorize.unknown_term", "n_j = 0: term not in vocabulary");
  if (doc_len < 1)
    throw Error("vectorize.bad_doc_len", "doc_len must be >= 1");
  if (n_j > n)
    throw Error("vectorize.bad_counts", "n_j exceeds n");
  double tf = term_count / static_cast<double>(doc_len);
  double idf = std::log(static_cast<double>(n) / static_cast<double>(n_j));
  return tf * idf;
}

SparseRow vectorize_doc(const Vocabulary& vocab,
                        std::span<const std::string> tokens, Scheme scheme) {
  std::map<uint32_t, double> counts;
  for (const auto& t : tokens) {
    int64_t id = vocab.id_of(t);
    if (id >= 0) counts[static_cast<uint32_t>(id)] += 1.0;
  }
  SparseRow row;
  row.idx.reserve(counts.size());
  row.val.reserve(counts.size());
  size_t doc_len = tokens.size();
  for (auto& [id, f] : counts) {
    double w = f;
    if (scheme == Scheme::TF) {
      w = f / static_cast<double>(doc_len);
    } else if (scheme == Scheme::TFIDF) {
      w = tfidf(f, doc_len, vocab.total_docs, vocab.doc_freq[id]);
    }
    row.idx.push_back(id);
    row.val.push_back(w);
  }
  return row;
}

DocTermMatrix vectorize_docs(const Vocabulary& vocab,
                             std::span<const preprocess::TokenizedDoc> docs,
                             Scheme scheme) {
  DocTermMatrix m;
  m.scheme = scheme;
  m.cols = vocab.size();
  m.rows.reserve(docs.size());
  m.doc_ids.reserve(docs.size());
  for (const auto& d : docs) {
    m.rows.push_back(vectorize_doc(vocab, d.tokens, scheme));
    m.doc_ids.push_back(d.tweet_id);
  }
  return m;
}

std::pair<Vocabulary, DocTermMatrix> build_matrix(
    std::span<const preprocess::TokenizedDoc> docs, Scheme scheme,
    uint32_t min_count) {
  if (docs.empty())
    throw Error("vectorize.empty_corpus", "no documents");
  if (std::all_of(docs.begin(), docs.end(),
                  [](const auto& d) { return d.tokens.empty(); }))
    throw Error("vectorize.empty_corpus", "all documents are empty");
  Vocabulary v = Vocabulary::build(docs, min_count);
  DocTermMatrix m = vectorize_docs(v, docs, scheme);
  return {std::move(v), std::move(m)};
}

}  // namespace edsa::vectorize
