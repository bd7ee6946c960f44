#pragma once

#include <cstdint>
#include <string>

#include "edsa/corpus.hpp"

namespace edsa::synth {

// Deterministic Sentiment140-shaped fixture: binary-labeled tweets over the
// 2009 window with planted bursty topics at slice and sub-bin scale. Stands
// in for the real corpus when it is not available; same CSV format, same
// parsing path.
struct SynthParams {
  size_t n_tweets = 90000;
  int n_events = 116;
  uint64_t seed = 7;
  // paper window: 2009-04-06 22:19:45 .. 2009-06-25 10:28:31 UTC
  int64_t t_start = 1239056385;
  int64_t t_end = 1245925711;
};

void generate_corpus_csv(const std::string& path, const SynthParams& params);

// Label-informative dense vectors standing in for transformer sentence
// embeddings: mu * sign(label) + unit Gaussian noise per component.
void generate_embeddings_tsv(const std::string& path,
                             const corpus::Corpus& corpus, int dim,
                             uint64_t seed);

}  // namespace edsa::synth
