#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "edsa/error.hpp"
#include "edsa/events.hpp"

namespace edsa::events {

namespace {

struct SubBin {
  int slice = 0;
  int sub = 0;
  std::vector<uint32_t> docs;
};

}  // namespace

std::vector<Event> peaky_detect(const TimeSlices& slices,
                                const PeakyParams& params) {
  const int S = slices.num_slices;
  const int B = params.sub_bins;
  if (B < 3) throw Error("events.bad_sub_bins", "sub_bins must be >= 3");
  const int64_t span = slices.t_max - slices.t_min;

  auto sub_of = [&](int64_t ts, int slice) {
    int64_t x = ts - slices.t_min;
    int64_t rem = x * S - static_cast<int64_t>(slice) * span;  // in [0, span)
    int64_t sub = (rem * B) / span;
    if (sub >= B) sub = B - 1;
    if (sub < 0) sub = 0;
    return static_cast<int>(sub);
  };
  auto bin_start = [&](int slice, int sub) {
    // slice subdivided into B equal parts
    return slices.t_min +
           (span * (static_cast<int64_t>(slice) * B + sub)) / (int64_t(S) * B);
  };
  auto bin_end = [&](int slice, int sub) {
    if (slice == S - 1 && sub == B - 1) return slices.t_max;
    return slices.t_min + (span * (static_cast<int64_t>(slice) * B + sub + 1)) /
                              (int64_t(S) * B);
  };

  std::vector<SubBin> bins(static_cast<size_t>(S) * B);
  for (int sl = 0; sl < S; ++sl)
    for (int sb = 0; sb < B; ++sb)
      bins[size_t(sl) * B + sb] = {sl, sb, {}};
  size_t nonempty = 0;
  for (size_t d = 0; d < slices.total_docs(); ++d) {
    int sl = slices.doc_slice[d];
    int sb = sub_of(slices.doc_ts[d], sl);
    auto& bin = bins[size_t(sl) * B + sb];
    if (bin.docs.empty()) ++nonempty;
    bin.docs.push_back(static_cast<uint32_t>(d));
  }
  if (nonempty == 0)
    throw Error("events.empty_bins", "every sub-bin is empty");

  // Sub-bin acts as the "document" for the keyword TFIDF: n = all sub-bins,
  // n_j = number of sub-bins containing the term.
  const uint64_t n_docs = static_cast<uint64_t>(S) * B;
  std::unordered_map<uint32_t, uint32_t> bin_df;
  for (const auto& bin : bins) {
    std::unordered_set<uint32_t> seen;
    for (uint32_t d : bin.docs)
      for (uint32_t t : slices.doc_unique[d]) seen.insert(t);
    for (uint32_t t : seen) ++bin_df[t];
  }

  std::vector<Event> events;
  for (const auto& bin : bins) {
    const auto& siblings = bins;
    double mean = 0.0, var = 0.0;
    int others = 0;
    for (int sb = 0; sb < B; ++sb) {
      if (sb == bin.sub) continue;
      mean += siblings[size_t(bin.slice) * B + sb].docs.size();
      ++others;
    }
    mean /= others;
    for (int sb = 0; sb < B; ++sb) {
      if (sb == bin.sub) continue;
      double c = siblings[size_t(bin.slice) * B + sb].docs.size();
      var += (c - mean) * (c - mean);
    }
    var /= others;
    double stddev = std::sqrt(var);
    double count = static_cast<double>(bin.docs.size());
    if (!(count > mean + params.z_thresh * stddev)) continue;

    // term frequencies inside the spiking sub-bin
    std::unordered_map<uint32_t, uint32_t> tf;
    size_t doc_len = 0;
    for (uint32_t d : bin.docs)
      for (uint32_t t : slices.doc_terms[d]) {
        ++tf[t];
        ++doc_len;
      }
    if (doc_len == 0) continue;
    std::vector<std::pair<uint32_t, double>> ranked;
    ranked.reserve(tf.size());
    for (auto& [t, f] : tf)
      ranked.push_back(
          {t, vectorize::tfidf(f, doc_len, n_docs, bin_df.at(t))});
    if (ranked.size() < static_cast<size_t>(params.keywords)) continue;
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return slices.vocab.terms[a.first] < slices.vocab.terms[b.first];
    });

    double z = stddev > 0.0 ? (count - mean) / stddev : count - mean;
    Event e;
    e.method = Method::PeakyTopics;
    e.start_ts = bin_start(bin.slice, bin.sub);
    e.end_ts = bin_end(bin.slice, bin.sub);
    e.magnitude = count * z;
    for (int i = 0; i < params.keywords; ++i)
      e.keywords.push_back(
          {slices.vocab.terms[ranked[i].first], ranked[i].second});
    e.tweet_ids.reserve(bin.docs.size());
    for (uint32_t d : bin.docs) e.tweet_ids.push_back(slices.doc_ids[d]);
    std::sort(e.tweet_ids.begin(), e.tweet_ids.end());
    events.push_back(std::move(e));
  }

  rank_events(events);
  if (events.size() > static_cast<size_t>(params.top_k))
    events.resize(params.top_k);
  return events;
}

}  // namespace edsa::events
