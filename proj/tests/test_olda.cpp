#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "edsa/error.hpp"
#include "edsa/events.hpp"
#include "edsa/rng.hpp"

using namespace edsa;
using namespace edsa::events;

namespace {

OldaState toy_state(uint64_t seed) {
  // 2 topics, 3 docs, 6 tokens over a 4-word vocabulary
  std::vector<std::vector<uint32_t>> docs = {{0, 1, 2}, {2, 3}, {1}};
  std::vector<double> alpha = {0.7, 1.3};
  std::vector<double> beta(2 * 4);
  for (size_t i = 0; i < beta.size(); ++i) beta[i] = 0.05 + 0.01 * i;
  return olda_init(std::move(docs), 4, 2, alpha, beta, seed);
}

void check_counts_consistent(const OldaState& s) {
  for (size_t d = 0; d < s.docs.size(); ++d) {
    int64_t total = 0;
    for (int k = 0; k < s.K; ++k) total += s.cdk(d, k);
    CHECK(total == static_cast<int64_t>(s.docs[d].size()));
  }
  std::vector<int64_t> col(s.K, 0);
  for (size_t v = 0; v < s.V; ++v)
    for (int k = 0; k < s.K; ++k) col[k] += s.cvk(static_cast<uint32_t>(v), k);
  for (int k = 0; k < s.K; ++k) CHECK(col[k] == s.topic_totals[k]);
}

}  // namespace

TEST_CASE("count conservation across sweeps") {
  OldaState s = toy_state(1);
  check_counts_consistent(s);
  for (int it = 0; it < 25; ++it) {
    olda_gibbs_step(s);
    check_counts_consistent(s);
  }
}

TEST_CASE("K = 1 assigns everything to topic 0 with conditional 1") {
  std::vector<std::vector<uint32_t>> docs = {{0, 1}, {1, 1, 0}};
  std::vector<double> alpha = {1.0};
  std::vector<double> beta(2, 0.1);
  OldaState s = olda_init(std::move(docs), 2, 1, alpha, beta, 3);
  olda_gibbs_step(s);
  for (const auto& zd : s.z)
    for (int z : zd) CHECK(z == 0);
  auto cond = olda_conditional(s, 0, 0);
  REQUIRE(cond.size() == 1);
  CHECK(cond[0] == doctest::Approx(1.0));
}

TEST_CASE("conditional is strictly positive with positive priors") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    int K = 2 + static_cast<int>(rng.below(4));
    size_t V = static_cast<size_t>(K) + rng.below(6);
    std::vector<std::vector<uint32_t>> docs;
    size_t nd = 1 + rng.below(4);
    for (size_t d = 0; d < nd; ++d) {
      std::vector<uint32_t> doc;
      size_t len = 1 + rng.below(8);
      for (size_t i = 0; i < len; ++i)
        doc.push_back(static_cast<uint32_t>(rng.below(V)));
      docs.push_back(doc);
    }
    std::vector<double> alpha(K);
    for (auto& a : alpha) a = rng.uniform(0.01, 2.0);
    std::vector<double> beta(K * V);
    for (auto& b : beta) b = rng.uniform(0.001, 1.0);
    OldaState s = olda_init(std::move(docs), V, K, alpha, beta, trial);
    auto cond = olda_conditional(s, 0, 0);
    double sum = 0.0;
    for (double p : cond) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("sampling frequencies match the conditional (Monte Carlo)") {
  OldaState s = toy_state(77);
  // a few mixing sweeps first so counts are arbitrary
  for (int it = 0; it < 5; ++it) olda_gibbs_step(s);

  const size_t d = 0, p = 1;
  auto expected = olda_conditional(s, d, p);
  std::vector<size_t> tally(s.K, 0);
  const int n_draws = 100000;
  for (int i = 0; i < n_draws; ++i) {
    olda_resample_token(s, d, p);
    ++tally[s.z[d][p]];
  }
  for (int k = 0; k < s.K; ++k) {
    double freq = static_cast<double>(tally[k]) / n_draws;
    CHECK(std::abs(freq - expected[k]) < 0.01);
  }
  // the conditional itself never changed while we resampled one token
  auto after = olda_conditional(s, d, p);
  for (int k = 0; k < s.K; ++k)
    CHECK(after[k] == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("conditional matches a direct evaluation of the count formula") {
  SplitMix64 rng(20);
  for (int trial = 0; trial < 100; ++trial) {
    OldaState s = toy_state(1000 + trial);
    for (int it = 0; it < 3; ++it) olda_gibbs_step(s);
    size_t d = rng.below(s.docs.size());
    size_t p = rng.below(s.docs[d].size());

    // independent computation from raw counts with the token removed
    uint32_t w = s.docs[d][p];
    int zk = s.z[d][p];
    std::vector<double> un(s.K);
    for (int k = 0; k < s.K; ++k) {
      double cvk = s.cvk(w, k) - (k == zk ? 1 : 0);
      double ctot = static_cast<double>(s.topic_totals[k]) - (k == zk ? 1 : 0);
      double beta_sum = 0.0;
      for (size_t v = 0; v < s.V; ++v) beta_sum += s.beta[size_t(k) * s.V + v];
      double cdk = s.cdk(d, k) - (k == zk ? 1 : 0);
      un[k] = (cvk + s.beta[size_t(k) * s.V + w]) / (ctot + beta_sum) *
              (cdk + s.alpha[k]);
    }
    double total = std::accumulate(un.begin(), un.end(), 0.0);
    auto got = olda_conditional(s, d, p);
    for (int k = 0; k < s.K; ++k)
      CHECK(got[k] == doctest::Approx(un[k] / total).epsilon(1e-12));
  }
}

namespace {

struct TwoVocabCorpus {
  corpus::Corpus corpus;
  std::vector<preprocess::TokenizedDoc> docs;
};

TwoVocabCorpus two_vocab_corpus(uint64_t seed) {
  SplitMix64 rng(seed);
  const std::string va[] = {"a", "b", "c"};
  const std::string vb[] = {"x", "y", "z"};
  std::vector<corpus::Tweet> tweets;
  TwoVocabCorpus out;
  for (int i = 0; i < 400; ++i) {
    bool first = i % 2 == 0;
    std::vector<std::string> toks;
    size_t len = 6 + rng.below(5);
    for (size_t k = 0; k < len; ++k)
      toks.push_back(first ? va[rng.below(3)] : vb[rng.below(3)]);
    corpus::Tweet t;
    t.id = i + 1;
    t.timestamp = 1000 + i * 10;
    t.label = corpus::SentimentLabel::Positive;
    t.user = "u";
    t.raw_text = "x";
    tweets.push_back(t);
    out.docs.push_back({static_cast<uint64_t>(i + 1), toks});
  }
  out.corpus = corpus::Corpus::from_tweets(std::move(tweets));
  return out;
}

}  // namespace

TEST_CASE("two disjoint vocabularies separate with purity > 0.95") {
  TwoVocabCorpus tc = two_vocab_corpus(5);
  TimeSlices slices = make_slices(tc.corpus, tc.docs, 2);
  OldaParams params;
  params.K = 2;
  params.iters = 80;
  params.min_docs = 1;
  params.top_k = 2;
  params.keywords = 3;  // the toy vocabularies only hold 3 words each
  params.seed = 11;
  auto events = olda_detect(slices, params);
  REQUIRE(events.size() == 2);

  size_t total_members = 0;
  for (const auto& e : events) {
    size_t va_members = 0;
    for (uint64_t id : e.tweet_ids) va_members += (id % 2 == 1);  // odd = vocab A
    double purity = std::max(static_cast<double>(va_members),
                             static_cast<double>(e.tweet_ids.size() - va_members)) /
                    e.tweet_ids.size();
    CHECK(purity > 0.95);
    total_members += e.tweet_ids.size();
  }
  // magnitudes sum to at most the corpus size (each doc counted once)
  double mag_sum = 0.0;
  for (const auto& e : events) mag_sum += e.magnitude;
  CHECK(mag_sum <= static_cast<double>(tc.corpus.size()));
  CHECK(total_members == tc.corpus.size());

  SUBCASE("same seed, same events") {
    auto again = olda_detect(slices, params);
    REQUIRE(again.size() == events.size());
    for (size_t i = 0; i < events.size(); ++i) {
      CHECK(again[i].magnitude == events[i].magnitude);
      CHECK(again[i].tweet_ids == events[i].tweet_ids);
      REQUIRE(again[i].keywords.size() == events[i].keywords.size());
      for (size_t k = 0; k < events[i].keywords.size(); ++k)
        CHECK(again[i].keywords[k].first == events[i].keywords[k].first);
    }
  }

  SUBCASE("keywords come from the dominant vocabulary") {
    for (const auto& e : events) {
      size_t va_members = 0;
      for (uint64_t id : e.tweet_ids) va_members += (id % 2 == 1);
      bool is_a = va_members * 2 > e.tweet_ids.size();
      const std::string expect = is_a ? "abc" : "xyz";
      // top-3 keywords should be the vocabulary itself
      for (size_t k = 0; k < e.keywords.size(); ++k)
        CHECK(expect.find(e.keywords[k].first) != std::string::npos);
    }
  }
}

TEST_CASE("K > vocabulary size is an error") {
  TwoVocabCorpus tc = two_vocab_corpus(6);
  TimeSlices slices = make_slices(tc.corpus, tc.docs, 2);
  OldaParams params;
  params.K = 100;  // vocab is 6 words
  CHECK_THROWS_AS(olda_detect(slices, params), Error);
  params.K = 1;
  CHECK_THROWS_AS(olda_detect(slices, params), Error);
}
