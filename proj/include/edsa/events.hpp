#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edsa/corpus.hpp"
#include "edsa/preprocess.hpp"
#include "edsa/rng.hpp"
#include "edsa/vectorize.hpp"

namespace edsa::events {

// Equal-width temporal bins plus the per-term per-slice presence counts the
// detectors run on (N_t^i = tweets in slice i containing term t).
struct TimeSlices {
  int64_t t_min = 0;
  int64_t t_max = 0;
  int num_slices = 0;

  vectorize::Vocabulary vocab;
  std::vector<uint64_t> doc_ids;
  std::vector<int64_t> doc_ts;
  std::vector<std::vector<uint32_t>> doc_terms;   // token ids, doc order
  std::vector<std::vector<uint32_t>> doc_unique;  // sorted unique ids
  std::vector<int> doc_slice;
  std::vector<std::vector<uint32_t>> slice_docs;  // doc indices per slice
  std::vector<uint32_t> slice_totals;             // N^i
  std::vector<uint32_t> term_slice;               // V x S, row per term

  size_t total_docs() const { return doc_ids.size(); }
  uint32_t term_count(uint32_t term, int slice) const {
    return term_slice[static_cast<size_t>(term) * num_slices + slice];
  }
  int slice_of(int64_t ts) const;
  int64_t slice_start(int slice) const;
  int64_t slice_end(int slice) const;
};

TimeSlices make_slices(const corpus::Corpus& c,
                       std::span<const preprocess::TokenizedDoc> docs,
                       int num_slices);

enum class Method { MABED, OLDA, PeakyTopics };

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view s);

struct Event {
  Method method = Method::MABED;
  std::vector<std::pair<std::string, double>> keywords;  // 10, weight desc
  int64_t start_ts = 0;
  int64_t end_ts = 0;
  double magnitude = 0.0;
  std::vector<uint64_t> tweet_ids;
};

// Ranking used by every detector: magnitude desc, then earliest start, then
// lexicographic first keyword.
void rank_events(std::vector<Event>& events);

// ---------------------------------------------------------------------------
// MABED

// Candidate-word weight over [a, b]: first-order autocorrelation of the two
// mention series mapped to [0, 1]. Zero variance on either side -> 0.5.
double mabed_candidate_weight(std::span<const double> series_t,
                              std::span<const double> series_tq, int a, int b);

struct MabedParams {
  int top_k = 50;
  int keywords = 10;
  int main_word_pool = 0;    // 0 -> 8 * top_k ranked main words considered
  int max_candidates = 500;  // co-occurring words scored per main word
  bool dedup = true;
  int dedup_shared = 5;      // >= this many shared keywords -> duplicate
};

std::vector<Event> mabed_detect(const TimeSlices& slices,
                                const MabedParams& params);

// ---------------------------------------------------------------------------
// OLDA

struct OldaParams {
  int K = 50;
  int iters = 200;
  double alpha = -1.0;  // < 0 -> 50 / K
  double beta0 = 0.01;
  double lambda = 0.5;  // evolutionary prior mixing
  int min_docs = 5;
  int top_k = 50;
  int keywords = 10;
  uint64_t seed = 42;
};

// Collapsed-Gibbs state for one slice. Counts are exact at all times.
struct OldaState {
  int K = 0;
  size_t V = 0;
  std::vector<std::vector<uint32_t>> docs;  // token ids
  std::vector<std::vector<int>> z;          // one assignment per token
  std::vector<int32_t> c_vk;                // V x K term-topic
  std::vector<int32_t> c_dk;                // D x K doc-topic
  std::vector<int64_t> topic_totals;        // column sums of c_vk
  std::vector<double> alpha;                // K
  std::vector<double> beta;                 // K x V, row per topic
  std::vector<double> beta_row_sum;         // K
  SplitMix64 rng{0};

  int32_t cvk(uint32_t v, int k) const { return c_vk[size_t(v) * K + k]; }
  int32_t cdk(size_t d, int k) const { return c_dk[d * K + k]; }
};

OldaState olda_init(std::vector<std::vector<uint32_t>> docs, size_t V, int K,
                    std::span<const double> alpha,
                    std::vector<double> beta,  // K x V
                    uint64_t seed);

// One full sweep: every token resampled once from the collapsed conditional
// with the current token excluded.
void olda_gibbs_step(OldaState& state);

// Resample a single token in place (the unit gibbs_step iterates).
void olda_resample_token(OldaState& state, size_t doc, size_t pos);

// Normalized conditional for the token at (doc, pos), current token excluded.
std::vector<double> olda_conditional(const OldaState& state, size_t doc,
                                     size_t pos);

std::vector<Event> olda_detect(const TimeSlices& slices,
                               const OldaParams& params);

// ---------------------------------------------------------------------------
// Peaky Topics

struct PeakyParams {
  int sub_bins = 8;
  double z_thresh = 2.0;
  int top_k = 50;
  int keywords = 10;
};

std::vector<Event> peaky_detect(const TimeSlices& slices,
                                const PeakyParams& params);

// ---------------------------------------------------------------------------
// reports

std::string events_to_json(std::span<const Event> events,
                           std::string_view config_hash);
// Table with Magnitude / Start Date / End Date / Topic columns.
std::string events_table(std::span<const Event> events);
std::string format_utc(int64_t ts);

}  // namespace edsa::events
