#include "edsa/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "edsa/error.hpp"
#include "edsa/rng.hpp"
#include "json.hpp"

namespace edsa::corpus {

std::string_view label_name(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
    case SentimentLabel::Positive: return "positive";
  }
  return "?";
}

std::optional<SentimentLabel> label_from_name(std::string_view s) {
  if (s == "negative") return SentimentLabel::Negative;
  if (s == "neutral") return SentimentLabel::Neutral;
  if (s == "positive") return SentimentLabel::Positive;
  return std::nullopt;
}

std::optional<SentimentLabel> label_from_polarity(int polarity) {
  if (polarity == 0) return SentimentLabel::Negative;
  if (polarity == 2) return SentimentLabel::Neutral;
  if (polarity == 4) return SentimentLabel::Positive;
  return std::nullopt;
}

int polarity_from_label(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::Negative: return 0;
    case SentimentLabel::Neutral: return 2;
    case SentimentLabel::Positive: return 4;
  }
  return 2;
}

std::optional<std::pair<int64_t, int64_t>> Corpus::span() const {
  if (tweets.empty()) return std::nullopt;
  return std::make_pair(tweets.front().timestamp, tweets.back().timestamp);
}

bool Corpus::labeled() const {
  return !tweets.empty() &&
         std::all_of(tweets.begin(), tweets.end(),
                     [](const Tweet& t) { return t.label.has_value(); });
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

}  // namespace

Corpus Corpus::from_tweets(std::vector<Tweet> tweets) {
  for (const Tweet& t : tweets) {
    if (is_blank(t.raw_text))
      throw Error("corpus.empty_text", "tweet " + std::to_string(t.id) +
                                           " has empty text");
  }
  std::sort(tweets.begin(), tweets.end(), [](const Tweet& a, const Tweet& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
  });
  for (size_t i = 1; i < tweets.size(); ++i) {
    if (tweets[i].id == tweets[i - 1].id)
      throw Error("corpus.duplicate_id",
                  "duplicate tweet id " + std::to_string(tweets[i].id));
  }
  Corpus c;
  c.tweets = std::move(tweets);
  return c;
}

// ---------------------------------------------------------------------------
// dates

int64_t epoch_from_utc(int year, int month, int day, int hour, int minute,
                       int second) {
  // Howard Hinnant's days-from-civil; proleptic Gregorian.
  int y = year - (month <= 2 ? 1 : 0);
  int era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = (153u * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  int64_t days = static_cast<int64_t>(era) * 146097 +
                 static_cast<int64_t>(doe) - 719468;
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

namespace {

int month_from_abbrev(std::string_view m) {
  static constexpr std::string_view names[12] = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun",
      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  for (int i = 0; i < 12; ++i)
    if (m == names[i]) return i + 1;
  return 0;
}

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::optional<int64_t> parse_s140_date(std::string_view s) {
  // Mon Apr 06 22:19:45 PDT 2009
  std::vector<std::string_view> parts;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t sp = s.find(' ', pos);
    if (sp == std::string_view::npos) sp = s.size();
    if (sp > pos) parts.push_back(s.substr(pos, sp - pos));
    pos = sp + 1;
  }
  if (parts.size() != 6) return std::nullopt;
  int month = month_from_abbrev(parts[1]);
  if (month == 0) return std::nullopt;
  int day, year, hh, mm, ss;
  if (!parse_int(parts[2], day) || !parse_int(parts[5], year))
    return std::nullopt;
  std::string_view hms = parts[3];
  if (hms.size() != 8 || hms[2] != ':' || hms[5] != ':') return std::nullopt;
  if (!parse_int(hms.substr(0, 2), hh) || !parse_int(hms.substr(3, 2), mm) ||
      !parse_int(hms.substr(6, 2), ss))
    return std::nullopt;
  if (day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  // Dataset only carries these zones; anything else is a parse error.
  int64_t offset;
  std::string_view tz = parts[4];
  if (tz == "UTC" || tz == "GMT") offset = 0;
  else if (tz == "PDT") offset = -7 * 3600;
  else if (tz == "PST") offset = -8 * 3600;
  else return std::nullopt;
  return epoch_from_utc(year, month, day, hh, mm, ss) - offset;
}

// ---------------------------------------------------------------------------
// CSV

std::optional<std::array<std::string, 6>> split_csv_row(std::string_view line) {
  std::array<std::string, 6> fields;
  size_t field = 0;
  size_t i = 0;
  while (true) {
    if (field >= 6) return std::nullopt;
    std::string value;
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            value += '"';
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          value += line[i++];
        }
      }
      if (i < line.size() && line[i] != ',') return std::nullopt;
    } else {
      while (i < line.size() && line[i] != ',') value += line[i++];
    }
    fields[field++] = std::move(value);
    if (i >= line.size()) break;
    ++i;  // comma
    if (i == line.size()) {
      // trailing comma: empty last field
      if (field >= 6) return std::nullopt;
      fields[field++] = "";
      break;
    }
  }
  if (field != 6) return std::nullopt;
  return fields;
}

std::string format_csv_row(const std::array<std::string, 6>& fields) {
  std::string out;
  for (size_t i = 0; i < 6; ++i) {
    if (i) out += ',';
    out += '"';
    for (char c : fields[i]) {
      if (c == '"') out += "\"\"";
      else out += c;
    }
    out += '"';
  }
  return out;
}

std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  auto cont = [&](size_t k) {
    return i + k < in.size() &&
           (static_cast<unsigned char>(in[i + k]) & 0xC0) == 0x80;
  };
  while (i < in.size()) {
    unsigned char c = in[i];
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2 && cont(1)) {
      out.append(in.substr(i, 2));
      i += 2;
    } else if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) {
      out.append(in.substr(i, 3));
      i += 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4 && cont(1) && cont(2) &&
               cont(3)) {
      out.append(in.substr(i, 4));
      i += 4;
    } else {
      out += "\xEF\xBF\xBD";  // U+FFFD
      ++i;
    }
  }
  return out;
}

Corpus parse_csv(const std::string& path, ParseReport* report,
                 std::optional<size_t> limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("corpus.unreadable", "cannot open " + path);

  ParseReport rep;
  std::vector<Tweet> tweets;
  std::string line;
  while (std::getline(in, line)) {
    if (limit && tweets.size() >= *limit) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rep.total_rows;
    auto do_malformed = [&] { ++rep.malformed; };

    auto fields = split_csv_row(sanitize_utf8(line));
    if (!fields) {
      do_malformed();
      continue;
    }
    int polarity;
    uint64_t id;
    auto& f = *fields;
    if (!parse_int(f[0], polarity)) {
      do_malformed();
      continue;
    }
    auto label = label_from_polarity(polarity);
    auto ts = parse_s140_date(f[2]);
    auto [p, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), id);
    if (!label || !ts || ec != std::errc() ||
        p != f[1].data() + f[1].size() || is_blank(f[5])) {
      do_malformed();
      continue;
    }
    Tweet t;
    t.id = id;
    t.timestamp = *ts;
    t.label = label;
    t.user = f[4];
    t.raw_text = f[5];
    tweets.push_back(std::move(t));
    ++rep.parsed;
  }
  if (rep.total_rows > 0 && rep.malformed * 100 > rep.total_rows)
    throw Error("corpus.bad_format",
                std::to_string(rep.malformed) + "/" +
                    std::to_string(rep.total_rows) +
                    " malformed rows (>1%), wrong file format?");
  if (report) *report = rep;
  return Corpus::from_tweets(std::move(tweets));
}

// ---------------------------------------------------------------------------
// stratified subsets

std::vector<Corpus> stratified_subsets(const Corpus& c,
                                       const std::vector<size_t>& sizes,
                                       uint64_t seed) {
  if (!c.labeled())
    throw Error("corpus.unlabeled", "stratified subsets need labels");
  for (size_t s : sizes) {
    if (s > c.size())
      throw Error("corpus.subset_too_large",
                  "subset size " + std::to_string(s) + " exceeds corpus " +
                      std::to_string(c.size()));
  }

  // Group indices per label, shuffle each group with a label-derived stream.
  std::array<std::vector<uint32_t>, 3> groups;
  for (uint32_t i = 0; i < c.size(); ++i)
    groups[static_cast<int>(*c.tweets[i].label)].push_back(i);
  for (int l = 0; l < 3; ++l) {
    SplitMix64 rng(derive_seed(seed, std::string("stratify.") +
                                         std::string(label_name(
                                             static_cast<SentimentLabel>(l)))));
    rng.shuffle(groups[l]);
  }

  // Quota sequencing: at step k hand the slot to the label with the largest
  // deficit k*p - taken. Subsets are prefixes of this one sequence, so they
  // nest and every prefix keeps each label within +-1 of proportionality.
  double n = static_cast<double>(c.size());
  std::array<double, 3> p{};
  for (int l = 0; l < 3; ++l) p[l] = groups[l].size() / n;
  std::array<size_t, 3> taken{};
  size_t max_size = sizes.empty() ? 0 : *std::max_element(sizes.begin(),
                                                          sizes.end());
  std::vector<uint32_t> sequence;
  sequence.reserve(max_size);
  for (size_t k = 1; sequence.size() < max_size; ++k) {
    int best = -1;
    double best_deficit = -1e300;
    for (int l = 0; l < 3; ++l) {
      if (taken[l] >= groups[l].size()) continue;
      double deficit = static_cast<double>(k) * p[l] -
                       static_cast<double>(taken[l]);
      if (deficit > best_deficit + 1e-12) {
        best_deficit = deficit;
        best = l;
      }
    }
    sequence.push_back(groups[best][taken[best]++]);
  }

  std::vector<Corpus> out;
  out.reserve(sizes.size());
  for (size_t s : sizes) {
    std::vector<Tweet> sel;
    sel.reserve(s);
    for (size_t i = 0; i < s; ++i) sel.push_back(c.tweets[sequence[i]]);
    out.push_back(Corpus::from_tweets(std::move(sel)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// NDJSON dump

void dump_ndjson(const Corpus& c, std::ostream& out,
                 std::string_view config_hash) {
  if (!config_hash.empty()) {
    nlohmann::ordered_json meta;
    meta["_meta"] = {{"config_hash", std::string(config_hash)}};
    out << meta.dump() << '\n';
  }
  for (const Tweet& t : c.tweets) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["timestamp"] = t.timestamp;
    if (t.label) j["label"] = label_name(*t.label);
    else j["label"] = nullptr;
    j["user"] = t.user;
    j["text"] = t.raw_text;
    out << j.dump() << '\n';
  }
}

Corpus load_ndjson(std::istream& in) {
  std::vector<Tweet> tweets;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("_meta")) continue;
    Tweet t;
    t.id = j.at("id").get<uint64_t>();
    t.timestamp = j.at("timestamp").get<int64_t>();
    if (!j.at("label").is_null())
      t.label = label_from_name(j.at("label").get<std::string>());
    t.user = j.at("user").get<std::string>();
    t.raw_text = j.at("text").get<std::string>();
    tweets.push_back(std::move(t));
  }
  return Corpus::from_tweets(std::move(tweets));
}

}  // namespace edsa::corpus
