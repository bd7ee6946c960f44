#include <algorithm>
#include <cinttypes>
#include <cstdio>

#include "edsa/error.hpp"
#include "edsa/events.hpp"
#include "json.hpp"

namespace edsa::events {

int TimeSlices::slice_of(int64_t ts) const {
  int64_t span = t_max - t_min;
  int64_t x = ts - t_min;
  int64_t i = (x * num_slices) / span;  // last bin right-closed via clamp
  if (i >= num_slices) i = num_slices - 1;
  if (i < 0) i = 0;
  return static_cast<int>(i);
}

int64_t TimeSlices::slice_start(int slice) const {
  int64_t span = t_max - t_min;
  return t_min + (span * slice) / num_slices;
}

int64_t TimeSlices::slice_end(int slice) const {
  if (slice == num_slices - 1) return t_max;
  int64_t span = t_max - t_min;
  return t_min + (span * (slice + 1)) / num_slices;
}

TimeSlices make_slices(const corpus::Corpus& c,
                       std::span<const preprocess::TokenizedDoc> docs,
                       int num_slices) {
  if (num_slices < 2)
    throw Error("events.bad_slices", "num_slices must be >= 2");
  if (docs.size() != c.size())
    throw Error("events.doc_mismatch", "tokenized docs do not match corpus");
  auto span = c.span();
  if (!span || span->first == span->second)
    throw Error("events.zero_span",
                "corpus span is empty (all tweets share one timestamp)");

  TimeSlices s;
  s.t_min = span->first;
  s.t_max = span->second;
  s.num_slices = num_slices;
  s.vocab = vectorize::Vocabulary::build(docs);

  size_t n = docs.size();
  s.doc_ids.resize(n);
  s.doc_ts.resize(n);
  s.doc_terms.resize(n);
  s.doc_unique.resize(n);
  s.doc_slice.resize(n);
  s.slice_docs.resize(num_slices);
  s.slice_totals.assign(num_slices, 0);
  s.term_slice.assign(s.vocab.size() * static_cast<size_t>(num_slices), 0);

  for (size_t d = 0; d < n; ++d) {
    if (docs[d].tweet_id != c.tweets[d].id)
      throw Error("events.doc_mismatch",
                  "tokenized doc order does not match corpus order");
    s.doc_ids[d] = c.tweets[d].id;
    s.doc_ts[d] = c.tweets[d].timestamp;
    std::vector<uint32_t> ids;
    ids.reserve(docs[d].tokens.size());
    for (const auto& t : docs[d].tokens) {
      int64_t id = s.vocab.id_of(t);
      if (id >= 0) ids.push_back(static_cast<uint32_t>(id));
    }
    std::vector<uint32_t> uniq = ids;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    int slice = s.slice_of(s.doc_ts[d]);
    s.doc_slice[d] = slice;
    s.slice_docs[slice].push_back(static_cast<uint32_t>(d));
    ++s.slice_totals[slice];
    for (uint32_t term : uniq)
      ++s.term_slice[static_cast<size_t>(term) * num_slices + slice];
    s.doc_terms[d] = std::move(ids);
    s.doc_unique[d] = std::move(uniq);
  }
  return s;
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MABED: return "mabed";
    case Method::OLDA: return "olda";
    case Method::PeakyTopics: return "peaky";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view s) {
  if (s == "mabed") return Method::MABED;
  if (s == "olda") return Method::OLDA;
  if (s == "peaky" || s == "peaky-topics") return Method::PeakyTopics;
  return std::nullopt;
}

void rank_events(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) {
                     if (a.magnitude != b.magnitude)
                       return a.magnitude > b.magnitude;
                     if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
                     const std::string& ka =
                         a.keywords.empty() ? std::string() : a.keywords[0].first;
                     const std::string& kb =
                         b.keywords.empty() ? std::string() : b.keywords[0].first;
                     return ka < kb;
                   });
}

std::string format_utc(int64_t ts) {
  // Days-from-epoch back to civil (Hinnant's civil_from_days).
  int64_t days = ts / 86400;
  int64_t rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int64_t z = days + 719468;
  int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  unsigned doe = static_cast<unsigned>(z - era * 146097);
  unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  int64_t y = static_cast<int64_t>(yoe) + era * 400;
  unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  unsigned mp = (5 * doy + 2) / 153;
  unsigned day = doy - (153 * mp + 2) / 5 + 1;
  unsigned month = mp < 10 ? mp + 3 : mp - 9;
  if (month <= 2) ++y;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04" PRId64 "-%02u-%02u %02u:%02u:%02u", y,
                month, day, static_cast<unsigned>(rem / 3600),
                static_cast<unsigned>((rem % 3600) / 60),
                static_cast<unsigned>(rem % 60));
  return buf;
}

std::string events_to_json(std::span<const Event> events,
                           std::string_view config_hash) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Event& e : events) {
    nlohmann::ordered_json j;
    j["method"] = method_name(e.method);
    j["magnitude"] = e.magnitude;
    j["start"] = e.start_ts;
    j["end"] = e.end_ts;
    nlohmann::ordered_json kws = nlohmann::ordered_json::array();
    for (const auto& [term, w] : e.keywords)
      kws.push_back(nlohmann::ordered_json{{"term", term}, {"weight", w}});
    j["keywords"] = std::move(kws);
    j["tweet_count"] = e.tweet_ids.size();
    j["tweet_ids"] = e.tweet_ids;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["config_hash"] = std::string(config_hash);
  root["events"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string events_table(std::span<const Event> events) {
  std::string out;
  out += "Magnitude     Start Date           End Date             Topic\n";
  char buf[64];
  for (const Event& e : events) {
    std::snprintf(buf, sizeof(buf), "%-13.1f ", e.magnitude);
    out += buf;
    out += format_utc(e.start_ts) + "  " + format_utc(e.end_ts) + "  ";
    for (size_t i = 0; i < e.keywords.size(); ++i) {
      if (i) out += ' ';
      out += e.keywords[i].first;
    }
    out += '\n';
  }
  return out;
}

}  // namespace edsa::events
