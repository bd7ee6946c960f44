#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edsa::corpus {

enum class SentimentLabel : int { Negative = 0, Neutral = 1, Positive = 2 };

// Fixed total order Negative < Neutral < Positive; vote tie-breaks and the
// stratified draws depend on it.
std::string_view label_name(SentimentLabel l);
std::optional<SentimentLabel> label_from_name(std::string_view s);
std::optional<SentimentLabel> label_from_polarity(int polarity);  // 0/2/4
int polarity_from_label(SentimentLabel l);

struct Tweet {
  uint64_t id = 0;
  int64_t timestamp = 0;  // epoch seconds UTC
  std::optional<SentimentLabel> label;
  std::string user;
  std::string raw_text;  // original, untouched
};

struct Corpus {
  std::vector<Tweet> tweets;  // ascending (timestamp, id); ids unique

  size_t size() const { return tweets.size(); }
  bool empty() const { return tweets.empty(); }
  // (min, max) timestamp over members; nullopt when empty.
  std::optional<std::pair<int64_t, int64_t>> span() const;
  bool labeled() const;

  // Sorts by (timestamp, id) and enforces id uniqueness / non-empty text.
  static Corpus from_tweets(std::vector<Tweet> tweets);
};

struct ParseReport {
  size_t total_rows = 0;
  size_t parsed = 0;
  size_t malformed = 0;
};

// Sentiment140 ingestion: 6-field CSV rows
// polarity, id, date, query, user, text. Malformed rows are counted and
// skipped; >1% malformed is a hard error (wrong file format).
Corpus parse_csv(const std::string& path, ParseReport* report = nullptr,
                 std::optional<size_t> limit = std::nullopt);

// Row-level helpers (also used by the dump/round-trip tests).
std::optional<std::array<std::string, 6>> split_csv_row(std::string_view line);
std::string format_csv_row(const std::array<std::string, 6>& fields);

// `DOW Mon DD HH:MM:SS TZ YYYY`, TZ in {UTC, PDT, PST}.
std::optional<int64_t> parse_s140_date(std::string_view s);
int64_t epoch_from_utc(int year, int month, int day, int hour, int minute,
                       int second);

// Replaces bytes that are not valid UTF-8 with U+FFFD.
std::string sanitize_utf8(std::string_view in);

// Nested stratified subsets (C1 c C2 c C3): label proportions within +-1
// tweet of the parent, pure function of (corpus, sizes, seed).
std::vector<Corpus> stratified_subsets(const Corpus& c,
                                       const std::vector<size_t>& sizes,
                                       uint64_t seed);

// Newline-delimited JSON debug dump (`ingest` CLI artifact). A non-empty
// config_hash is embedded as a leading {"_meta": ...} record, which the
// loader skips.
void dump_ndjson(const Corpus& c, std::ostream& out,
                 std::string_view config_hash = {});
Corpus load_ndjson(std::istream& in);

}  // namespace edsa::corpus
