#include <algorithm>
#include <cmath>
#include <numeric>

#include "edsa/error.hpp"
#include "edsa/events.hpp"

namespace edsa::events {

OldaState olda_init(std::vector<std::vector<uint32_t>> docs, size_t V, int K,
                    std::span<const double> alpha, std::vector<double> beta,
                    uint64_t seed) {
  if (K < 1) throw Error("events.bad_k", "K must be >= 1");
  if (static_cast<size_t>(K) > V)
    throw Error("events.bad_k", "K exceeds vocabulary size");
  if (alpha.size() != static_cast<size_t>(K) ||
      beta.size() != static_cast<size_t>(K) * V)
    throw Error("events.bad_priors", "prior dimensions do not match");

  OldaState s;
  s.K = K;
  s.V = V;
  s.docs = std::move(docs);
  s.alpha.assign(alpha.begin(), alpha.end());
  s.beta = std::move(beta);
  s.beta_row_sum.assign(K, 0.0);
  for (int k = 0; k < K; ++k)
    s.beta_row_sum[k] = std::accumulate(s.beta.begin() + size_t(k) * V,
                                        s.beta.begin() + size_t(k + 1) * V,
                                        0.0);
  s.c_vk.assign(V * static_cast<size_t>(K), 0);
  s.c_dk.assign(s.docs.size() * static_cast<size_t>(K), 0);
  s.topic_totals.assign(K, 0);
  s.rng = SplitMix64(derive_seed(seed, "olda.assign"));

  s.z.resize(s.docs.size());
  for (size_t d = 0; d < s.docs.size(); ++d) {
    s.z[d].resize(s.docs[d].size());
    for (size_t p = 0; p < s.docs[d].size(); ++p) {
      int k = static_cast<int>(s.rng.below(static_cast<uint64_t>(K)));
      s.z[d][p] = k;
      ++s.c_vk[size_t(s.docs[d][p]) * K + k];
      ++s.c_dk[d * K + k];
      ++s.topic_totals[k];
    }
  }
  return s;
}

namespace {

// Unnormalized Gibbs conditional with the token already removed from the
// counts. The document-side denominator is constant in k and omitted.
void conditional_unnormalized(const OldaState& s, size_t d, uint32_t w,
                              std::vector<double>& out) {
  out.resize(s.K);
  for (int k = 0; k < s.K; ++k) {
    double term = (s.c_vk[size_t(w) * s.K + k] + s.beta[size_t(k) * s.V + w]) /
                  (static_cast<double>(s.topic_totals[k]) + s.beta_row_sum[k]);
    double doc = s.c_dk[d * s.K + k] + s.alpha[k];
    out[k] = term * doc;
  }
}

}  // namespace

void olda_resample_token(OldaState& s, size_t d, size_t p) {
  thread_local std::vector<double> probs;
  uint32_t w = s.docs[d][p];
  int old_k = s.z[d][p];
  --s.c_vk[size_t(w) * s.K + old_k];
  --s.c_dk[d * s.K + old_k];
  --s.topic_totals[old_k];

  conditional_unnormalized(s, d, w, probs);
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  double r = s.rng.uniform() * total;
  int new_k = s.K - 1;
  double acc = 0.0;
  for (int k = 0; k < s.K; ++k) {
    acc += probs[k];
    if (r < acc) {
      new_k = k;
      break;
    }
  }
  s.z[d][p] = new_k;
  ++s.c_vk[size_t(w) * s.K + new_k];
  ++s.c_dk[d * s.K + new_k];
  ++s.topic_totals[new_k];
}

void olda_gibbs_step(OldaState& s) {
  for (size_t d = 0; d < s.docs.size(); ++d)
    for (size_t p = 0; p < s.docs[d].size(); ++p) olda_resample_token(s, d, p);
}

std::vector<double> olda_conditional(const OldaState& s, size_t d, size_t p) {
  OldaState& mut = const_cast<OldaState&>(s);
  uint32_t w = s.docs[d][p];
  int k = s.z[d][p];
  --mut.c_vk[size_t(w) * s.K + k];
  --mut.c_dk[d * s.K + k];
  --mut.topic_totals[k];
  std::vector<double> probs;
  conditional_unnormalized(s, d, w, probs);
  ++mut.c_vk[size_t(w) * s.K + k];
  ++mut.c_dk[d * s.K + k];
  ++mut.topic_totals[k];
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& v : probs) v /= total;
  return probs;
}

std::vector<Event> olda_detect(const TimeSlices& slices,
                               const OldaParams& params) {
  const size_t V = slices.vocab.size();
  const int K = params.K;
  if (K < 2) throw Error("events.bad_k", "OLDA needs K >= 2");
  if (static_cast<size_t>(K) > V)
    throw Error("events.bad_k", "K exceeds vocabulary size");
  double alpha_val = params.alpha > 0 ? params.alpha : 50.0 / K;
  std::vector<double> alpha(K, alpha_val);

  std::vector<double> beta(static_cast<size_t>(K) * V, params.beta0);
  std::vector<int64_t> cvk_total(V * static_cast<size_t>(K), 0);
  // member docs per topic: (timestamp, tweet id)
  std::vector<std::vector<std::pair<int64_t, uint64_t>>> members(K);

  for (int sl = 0; sl < slices.num_slices; ++sl) {
    const auto& doc_idx = slices.slice_docs[sl];
    if (doc_idx.empty()) continue;
    std::vector<std::vector<uint32_t>> docs;
    docs.reserve(doc_idx.size());
    for (uint32_t d : doc_idx) docs.push_back(slices.doc_terms[d]);

    OldaState state =
        olda_init(std::move(docs), V, K, alpha, beta,
                  derive_seed(params.seed, "olda.slice." + std::to_string(sl)));
    for (int it = 0; it < params.iters; ++it) olda_gibbs_step(state);

    for (size_t v = 0; v < V; ++v)
      for (int k = 0; k < K; ++k)
        cvk_total[v * K + k] += state.c_vk[v * K + k];

    for (size_t d = 0; d < state.docs.size(); ++d) {
      if (state.docs[d].empty()) continue;
      int best = 0;
      for (int k = 1; k < K; ++k)
        if (state.cdk(d, k) > state.cdk(d, best)) best = k;
      uint32_t doc = doc_idx[d];
      members[best].push_back({slices.doc_ts[doc], slices.doc_ids[doc]});
    }

    // Evolutionary prior for the next slice from this slice's smoothed
    // topic-term distribution.
    for (int k = 0; k < K; ++k) {
      double denom = static_cast<double>(state.topic_totals[k]) +
                     state.beta_row_sum[k];
      for (size_t v = 0; v < V; ++v) {
        double phi = (state.c_vk[v * K + k] + state.beta[size_t(k) * V + v]) /
                     denom;
        beta[size_t(k) * V + v] = params.lambda * phi * static_cast<double>(V) +
                                  (1.0 - params.lambda) * params.beta0;
      }
    }
  }

  std::vector<Event> events;
  for (int k = 0; k < K; ++k) {
    if (members[k].size() < static_cast<size_t>(params.min_docs)) continue;
    std::vector<std::pair<uint32_t, int64_t>> ranked;  // (term, count)
    for (size_t v = 0; v < V; ++v)
      if (cvk_total[v * K + k] > 0)
        ranked.push_back({static_cast<uint32_t>(v), cvk_total[v * K + k]});
    if (ranked.size() < static_cast<size_t>(params.keywords)) continue;
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return slices.vocab.terms[a.first] < slices.vocab.terms[b.first];
    });

    Event e;
    e.method = Method::OLDA;
    for (int i = 0; i < params.keywords; ++i)
      e.keywords.push_back({slices.vocab.terms[ranked[i].first],
                            static_cast<double>(ranked[i].second)});
    auto [min_it, max_it] =
        std::minmax_element(members[k].begin(), members[k].end());
    e.start_ts = min_it->first;
    e.end_ts = max_it->first;
    e.magnitude = static_cast<double>(members[k].size());
    e.tweet_ids.reserve(members[k].size());
    for (auto& [ts, id] : members[k]) e.tweet_ids.push_back(id);
    std::sort(e.tweet_ids.begin(), e.tweet_ids.end());
    events.push_back(std::move(e));
  }

  rank_events(events);
  if (events.size() > static_cast<size_t>(params.top_k))
    events.resize(params.top_k);
  return events;
}

}  // namespace edsa::events
