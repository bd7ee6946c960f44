#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "edsa/error.hpp"
#include "edsa/events.hpp"

namespace edsa::events {

double mabed_candidate_weight(std::span<const double> series_t,
                              std::span<const double> series_tq, int a,
                              int b) {
  if (b <= a + 1) throw Error("events.bad_interval", "need b > a + 1");
  if (series_t.size() != series_tq.size() ||
      static_cast<size_t>(b) >= series_t.size() || a < 0)
    throw Error("events.bad_interval", "series do not cover [a, b]");

  double cross = 0.0, sq_t = 0.0, sq_q = 0.0;
  for (int i = a + 1; i <= b; ++i) {
    double dt = series_t[i] - series_t[i - 1];
    double dq = series_tq[i] - series_tq[i - 1];
    cross += dt * dq;
    sq_t += dt * dt;
    sq_q += dq * dq;
  }
  // A_t, A_tq are RMS first differences; zero variance leaves rho undefined
  // and we return the neutral weight.
  if (sq_t == 0.0 || sq_q == 0.0) return 0.5;
  double denom = static_cast<double>(b - a - 1) *
                 std::sqrt(sq_t / (b - a - 1)) * std::sqrt(sq_q / (b - a - 1));
  double rho = cross / denom;
  rho = std::clamp(rho, -1.0, 1.0);
  return (rho + 1.0) / 2.0;
}

namespace {

struct MainWord {
  uint32_t term;
  int a, b;
  double magnitude;
};

// Max-sum contiguous run of the anomaly series; endpoints of the optimum are
// necessarily positive. Ties resolve to the earliest, shortest run.
bool max_subarray(std::span<const double> x, int& best_a, int& best_b,
                  double& best_sum) {
  best_sum = 0.0;
  best_a = best_b = -1;
  double run = 0.0;
  int run_a = 0;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    if (run <= 0.0) {
      run = 0.0;
      run_a = i;
    }
    run += x[i];
    if (run > best_sum + 1e-12) {
      best_sum = run;
      best_a = run_a;
      best_b = i;
    }
  }
  return best_a >= 0;
}

}  // namespace

std::vector<Event> mabed_detect(const TimeSlices& slices,
                                const MabedParams& params) {
  const int S = slices.num_slices;
  const size_t V = slices.vocab.size();
  const double N = static_cast<double>(slices.total_docs());
  if (params.top_k <= 0) return {};

  // Expected-vs-observed mention anomaly per term, best positive run.
  std::vector<MainWord> mains;
  std::vector<double> anomaly(S);
  for (uint32_t t = 0; t < V; ++t) {
    double n_t = 0.0;
    for (int i = 0; i < S; ++i) n_t += slices.term_count(t, i);
    if (n_t == 0.0) continue;
    for (int i = 0; i < S; ++i) {
      double expected = n_t * (slices.slice_totals[i] / N);
      anomaly[i] = slices.term_count(t, i) - expected;
    }
    int a, b;
    double mag;
    if (max_subarray(anomaly, a, b, mag)) mains.push_back({t, a, b, mag});
  }
  if (mains.empty())
    throw Error("events.no_anomaly", "no positive-anomaly word found");

  std::sort(mains.begin(), mains.end(),
            [&](const MainWord& x, const MainWord& y) {
              if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
              if (x.a != y.a) return x.a < y.a;
              return slices.vocab.terms[x.term] < slices.vocab.terms[y.term];
            });
  size_t pool = params.main_word_pool > 0
                    ? static_cast<size_t>(params.main_word_pool)
                    : static_cast<size_t>(params.top_k) * 8;
  if (mains.size() > pool) mains.resize(pool);

  std::vector<Event> accepted;
  std::vector<std::unordered_set<std::string>> accepted_keys;
  std::vector<double> series_t(S), series_q(S);

  for (const MainWord& mw : mains) {
    if (accepted.size() >= static_cast<size_t>(params.top_k)) break;

    // Candidate words: co-occurrence with the main word inside the interval.
    std::unordered_map<uint32_t, uint32_t> co;
    for (int i = mw.a; i <= mw.b; ++i) {
      for (uint32_t d : slices.slice_docs[i]) {
        const auto& uniq = slices.doc_unique[d];
        if (!std::binary_search(uniq.begin(), uniq.end(), mw.term)) continue;
        for (uint32_t term : uniq)
          if (term != mw.term) ++co[term];
      }
    }
    std::vector<std::pair<uint32_t, uint32_t>> cand(co.begin(), co.end());
    std::sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return slices.vocab.terms[x.first] < slices.vocab.terms[y.first];
    });
    if (cand.size() > static_cast<size_t>(params.max_candidates))
      cand.resize(params.max_candidates);
    if (cand.size() < static_cast<size_t>(params.keywords - 1)) continue;

    // the autocorrelation weight needs at least two first differences;
    // widen short intervals symmetrically for the scoring only.
    int wa = mw.a, wb = mw.b;
    while (wb - wa < 2) {
      if (wa > 0) --wa;
      else if (wb < S - 1) ++wb;
      else break;
    }
    for (int i = 0; i < S; ++i) series_t[i] = slices.term_count(mw.term, i);

    std::vector<std::pair<uint32_t, double>> weighted;
    weighted.reserve(cand.size());
    for (auto& [term, cocount] : cand) {
      for (int i = 0; i < S; ++i) series_q[i] = slices.term_count(term, i);
      double w = wb - wa >= 2
                     ? mabed_candidate_weight(series_t, series_q, wa, wb)
                     : 0.5;
      weighted.push_back({term, w});
    }
    std::unordered_map<uint32_t, uint32_t> co_rank;
    for (auto& [term, cocount] : cand) co_rank[term] = cocount;
    std::sort(weighted.begin(), weighted.end(),
              [&](const auto& x, const auto& y) {
                if (x.second != y.second) return x.second > y.second;
                if (co_rank[x.first] != co_rank[y.first])
                  return co_rank[x.first] > co_rank[y.first];
                return slices.vocab.terms[x.first] <
                       slices.vocab.terms[y.first];
              });

    Event e;
    e.method = Method::MABED;
    e.start_ts = slices.slice_start(mw.a);
    e.end_ts = slices.slice_end(mw.b);
    e.magnitude = mw.magnitude;
    e.keywords.push_back({slices.vocab.terms[mw.term], 1.0});
    for (int k = 0; k < params.keywords - 1; ++k)
      e.keywords.push_back(
          {slices.vocab.terms[weighted[k].first], weighted[k].second});

    if (params.dedup) {
      std::unordered_set<std::string> keys;
      for (auto& [term, w] : e.keywords) keys.insert(term);
      bool dup = false;
      for (const auto& prev : accepted_keys) {
        int shared = 0;
        for (const auto& k : keys)
          if (prev.count(k)) ++shared;
        if (shared >= params.dedup_shared) {
          dup = true;
          break;
        }
      }
      if (dup) continue;  // merged into the higher-magnitude event
      accepted_keys.push_back(std::move(keys));
    }

    // Member tweets: interval docs containing at least one keyword.
    std::vector<uint32_t> key_ids;
    for (auto& [term, w] : e.keywords) {
      int64_t id = slices.vocab.id_of(term);
      if (id >= 0) key_ids.push_back(static_cast<uint32_t>(id));
    }
    std::sort(key_ids.begin(), key_ids.end());
    for (int i = mw.a; i <= mw.b; ++i) {
      for (uint32_t d : slices.slice_docs[i]) {
        const auto& uniq = slices.doc_unique[d];
        bool hit = std::any_of(key_ids.begin(), key_ids.end(),
                               [&](uint32_t k) {
                                 return std::binary_search(uniq.begin(),
                                                           uniq.end(), k);
                               });
        if (hit) e.tweet_ids.push_back(slices.doc_ids[d]);
      }
    }
    std::sort(e.tweet_ids.begin(), e.tweet_ids.end());
    accepted.push_back(std::move(e));
  }

  rank_events(accepted);
  return accepted;
}

}  // namespace edsa::events
