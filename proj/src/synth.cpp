#include "edsa/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "edsa/error.hpp"
#include "edsa/rng.hpp"

namespace edsa::synth {

namespace {

constexpr std::string_view kPositive[] = {
    "love", "loved", "awesome", "great", "happy", "amazing", "good", "fun",
    "sweet", "nice", "cool", "best", "excited", "glad", "wonderful", "yay",
    "beautiful", "perfect", "smile", "smiling", "laughing", "enjoy",
    "enjoyed", "thanks", "thank", "blessed", "lucky", "win", "winning",
    "proud", "cute", "adorable", "fantastic", "brilliant", "lovely",
    "pleased", "delighted", "thrilled", "super", "celebrate", "celebrating",
    "party", "sunshine", "relaxing", "relaxed", "peaceful", "chill",
    "stoked", "pumped", "excellent", "favorite", "fave", "congrats",
    "congratulations", "hug", "hugs", "kiss", "laugh", "laughed", "joy",
    "joyful", "cheers", "grin", "grinning", "rocks", "rocking", "winner",
    "victory", "success", "successful", "delicious", "yummy", "tasty",
    "refreshing", "gorgeous", "stunning", "charming", "friendly", "kind",
    "helpful", "positive", "optimistic", "hopeful", "satisfying", "satisfied",
    "comfy", "cozy", "warm", "bright", "shiny", "sparkly", "magic",
    "magical", "epic", "legend", "legendary", "smooth", "easy", "free",
    "freedom", "paradise", "heaven", "dream", "dreamy", "fresh", "alive",
    "energized", "strong", "healthy", "safe", "grateful", "thankful",
};

constexpr std::string_view kNegative[] = {
    "hate", "hated", "awful", "terrible", "sad", "horrible", "bad", "worst",
    "angry", "mad", "upset", "annoyed", "annoying", "sick", "tired", "cry",
    "crying", "cried", "hurt", "hurts", "pain", "painful", "broken", "broke",
    "fail", "failed", "failing", "failure", "lost", "losing", "lose",
    "miserable", "depressed", "depressing", "lonely", "alone", "scared",
    "afraid", "fear", "worried", "worry", "stress", "stressed", "stressful",
    "bored", "boring", "gross", "disgusting", "nasty", "ugly", "stupid",
    "dumb", "idiot", "sucks", "suck", "sucked", "ruined", "ruin", "wreck",
    "disaster", "mess", "messy", "dirty", "cold", "freezing", "hot",
    "sweaty", "exhausted", "exhausting", "headache", "migraine", "fever",
    "flu", "cough", "cancelled", "delayed", "stuck", "trapped", "jealous",
    "bitter", "cruel", "unfair", "wrong", "mistake", "regret", "sorry",
    "apologize", "blame", "guilty", "shame", "embarrassed", "embarrassing",
    "crash", "crashed", "slow", "laggy", "expensive", "poor", "cheap",
    "useless", "worthless", "pointless", "hopeless", "dark", "gloomy",
    "rainy", "storm", "nightmare", "dead", "dying", "ouch", "ow", "ugh",
};

constexpr std::string_view kNeutral[] = {
    "work", "working", "school", "class", "home", "house", "morning",
    "night", "tonight", "today", "tomorrow", "yesterday", "weekend", "week",
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
    "sunday", "breakfast", "lunch", "dinner", "coffee", "tea", "water",
    "food", "pizza", "burger", "chicken", "salad", "cake", "cookie",
    "chocolate", "milk", "juice", "beer", "wine", "movie", "movies", "film",
    "show", "episode", "season", "book", "books", "reading", "read",
    "music", "song", "songs", "album", "band", "concert", "guitar", "piano",
    "radio", "game", "games", "playing", "play", "played", "team", "match",
    "score", "phone", "iphone", "laptop", "computer", "internet", "online",
    "twitter", "facebook", "myspace", "email", "message", "text", "call",
    "called", "calling", "car", "bus", "train", "plane", "flight", "drive",
    "driving", "walk", "walking", "running", "gym", "exercise", "yoga",
    "sleep", "sleeping", "nap", "bed", "dream", "wake", "shower", "bath",
    "clothes", "shirt", "shoes", "dress", "hair", "haircut", "shopping",
    "store", "mall", "market", "money", "paid", "pay", "job", "office",
    "meeting", "boss", "project", "homework", "exam", "test", "study",
    "studying", "college", "university", "teacher", "student", "friend",
    "friends", "family", "mom", "dad", "brother", "sister", "baby", "kids",
    "dog", "puppy", "cat", "kitten", "bird", "fish", "garden", "park",
    "beach", "ocean", "lake", "river", "mountain", "city", "town", "street",
    "road", "trip", "travel", "vacation", "holiday", "summer", "winter",
    "spring", "autumn", "weather", "sun", "sunny", "rain", "raining",
    "snow", "wind", "cloud", "cloudy", "sky", "moon", "stars", "picture",
    "photo", "camera", "video", "youtube", "blog", "post", "news", "paper",
    "tv", "television", "watch", "watching", "watched", "kitchen", "room",
    "door", "window", "table", "chair", "couch", "garage", "yard",
    "birthday", "wedding", "church", "doctor", "dentist", "hospital",
    "medicine", "hour", "hours", "minute", "minutes", "moment", "time",
    "early", "late", "soon", "later", "tonite", "evening", "afternoon",
    "people", "person", "guy", "girl", "boy", "man", "woman", "everyone",
    "nobody", "somebody", "thing", "things", "stuff", "idea", "plan",
    "plans", "list", "word", "words", "story", "joke", "question", "answer",
};

constexpr std::string_view kFunction[] = {
    "i", "the", "to", "a", "my", "and", "is", "in", "it", "you", "of",
    "for", "on", "me", "so", "im", "that", "at", "with", "be", "have",
    "just", "this", "was", "but", "not", "are", "up", "all", "out", "day",
    "get", "like", "go", "going", "got", "now", "its", "we", "what",
    "when", "will", "there", "one", "about", "he", "she", "they", "them",
    "then", "than", "really", "very", "still", "again", "off", "back",
    "here", "who", "how", "why", "been", "would", "could", "should",
};

// "can't wait"-style positive idiom tails and negated-positive tails
constexpr std::string_view kAnticipation[] = {"wait", "miss", "bad",
                                              "complain", "lie"};

// event topic word pool; each planted event draws 10 distinct words
constexpr std::string_view kTopicPool[] = {
    "storm", "flood", "earthquake", "eclipse", "comet", "meteor", "volcano",
    "lakers", "playoffs", "finals", "marathon", "derby", "tournament",
    "grammy", "oscars", "premiere", "trailer", "sequel", "festival",
    "parade", "carnival", "circus", "expo", "convention", "summit",
    "election", "debate", "senate", "congress", "mayor", "governor",
    "shuttle", "launch", "orbit", "astronaut", "telescope", "satellite",
    "outbreak", "vaccine", "recall", "strike", "protest", "rally",
    "blackout", "heatwave", "blizzard", "tornado", "hurricane", "wildfire",
    "tsunami", "aftershock", "drought", "landslide", "avalanche",
    "graduation", "prom", "reunion", "contest", "lottery", "jackpot",
    "auction", "sale", "discount", "coupon", "release", "update", "patch",
    "upgrade", "beta", "demo", "keynote", "conference", "workshop",
    "seminar", "webinar", "broadcast", "podcast", "interview", "episode",
    "finale", "pilot", "casting", "audition", "rehearsal", "tour",
    "gig", "setlist", "encore", "album", "single", "remix", "cover",
    "chart", "billboard", "countdown", "premier", "kickoff", "halftime",
    "overtime", "penalty", "transfer", "signing", "draft", "rookie",
    "champion", "trophy", "medal", "record", "sprint", "relay", "jersey",
    "stadium", "arena", "venue", "tickets", "queue", "lineup", "headliner",
    "exhibit", "gallery", "museum", "statue", "monument", "landmark",
    "airport", "terminal", "runway", "customs", "visa", "passport",
    "embassy", "border", "checkpoint", "curfew", "lockdown", "evacuation",
    "shelter", "rescue", "salvage", "cleanup", "repair", "rebuild",
    "inspection", "audit", "verdict", "trial", "jury", "appeal", "ruling",
    "pardon", "treaty", "accord", "merger", "bailout", "bankruptcy",
    "layoffs", "hiring", "startup", "ipo", "stock", "dividend", "earnings",
    "forecast", "budget", "deficit", "surplus", "inflation", "recession",
};

struct Pools {
  std::vector<double> pos_cdf, neg_cdf, neu_cdf, fun_cdf;
};

// Zipf-ish CDF over a word list
std::vector<double> zipf_cdf(size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(i + 2), exponent);
    cdf[i] = acc;
  }
  for (auto& v : cdf) v /= acc;
  return cdf;
}

size_t pick(const std::vector<double>& cdf, SplitMix64& rng) {
  double r = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
  return std::min<size_t>(static_cast<size_t>(it - cdf.begin()),
                          cdf.size() - 1);
}

std::string format_s140_date(int64_t ts_utc, SplitMix64& rng) {
  // mostly PDT like the real file, occasionally UTC/PST
  static constexpr std::string_view dows[7] = {"Thu", "Fri", "Sat", "Sun",
                                               "Mon", "Tue", "Wed"};
  static constexpr std::string_view mons[12] = {"Jan", "Feb", "Mar", "Apr",
                                                "May", "Jun", "Jul", "Aug",
                                                "Sep", "Oct", "Nov", "Dec"};
  uint64_t roll = rng.below(20);
  int64_t offset = -7 * 3600;
  std::string_view tz = "PDT";
  if (roll == 0) {
    offset = 0;
    tz = "UTC";
  } else if (roll == 1) {
    offset = -8 * 3600;
    tz = "PST";
  }
  int64_t local = ts_utc + offset;
  int64_t days = local / 86400;
  int64_t rem = local % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int dow = static_cast<int>(((days % 7) + 7) % 7);
  // civil date from days
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
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %s %02u %02u:%02u:%02u %s %04d",
                dows[dow].data(), mons[month - 1].data(), day,
                static_cast<unsigned>(rem / 3600),
                static_cast<unsigned>((rem % 3600) / 60),
                static_cast<unsigned>(rem % 60), tz.data(),
                static_cast<int>(y));
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

struct PlantedEvent {
  int64_t start, end;
  std::vector<std::string> words;  // 10
  bool positive;
  size_t extra_tweets;
};

}  // namespace

void generate_corpus_csv(const std::string& path, const SynthParams& params) {
  if (params.n_tweets < 100)
    throw Error("synth.too_small", "need at least 100 tweets");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("synth.io", "cannot write " + path);

  SplitMix64 rng(derive_seed(params.seed, "synth.corpus"));
  Pools pools;
  pools.pos_cdf = zipf_cdf(std::size(kPositive), 0.9);
  pools.neg_cdf = zipf_cdf(std::size(kNegative), 0.9);
  pools.neu_cdf = zipf_cdf(std::size(kNeutral), 0.95);
  pools.fun_cdf = zipf_cdf(std::size(kFunction), 1.0);

  int64_t span = params.t_end - params.t_start;

  // Planted events on three time scales so every detector has material:
  // sub-bin spikes (Peaky, aligned to the default 32x8 grid), single-slice
  // and multi-slice runs (MABED/OLDA). Sub-bin spikes are sized to clear a
  // z = 2 sibling threshold even when two land in the same slice.
  constexpr int kSlices = 32, kSubBins = 8;
  std::vector<PlantedEvent> events;
  std::vector<std::string> topic_words;
  {
    size_t need = static_cast<size_t>(params.n_events) * 10;
    for (size_t i = 0; i < need; ++i) {
      std::string w(kTopicPool[i % std::size(kTopicPool)]);
      if (i >= std::size(kTopicPool))
        w += std::to_string(i / std::size(kTopicPool));
      topic_words.push_back(std::move(w));
    }
  }
  int n_spike = params.n_events / 2;
  for (int e = 0; e < params.n_events; ++e) {
    PlantedEvent pe;
    if (e < n_spike) {
      // aligned inside one sub-bin; at most two spikes share a slice
      int cell = (e * 13) % (kSlices * kSubBins);
      int slice = cell / kSubBins, sub = cell % kSubBins;
      int64_t bin_w = span / (kSlices * kSubBins);
      int64_t lo = span * (static_cast<int64_t>(slice) * kSubBins + sub) /
                   (kSlices * kSubBins);
      pe.start = params.t_start + lo + bin_w / 8;
      pe.end = pe.start + (bin_w * 6) / 8;
      pe.extra_tweets = 420 + rng.below(150);
    } else {
      bool wide = (e - n_spike) % 2 == 0;
      double frac = wide ? rng.uniform(0.045, 0.09)    // ~1.5-3 slices
                         : rng.uniform(0.02, 0.031);   // ~ one slice
      int64_t width = static_cast<int64_t>(frac * span);
      pe.start = params.t_start +
                 static_cast<int64_t>(rng.uniform(0.02, 0.92) * span);
      pe.end = std::min(params.t_end, pe.start + width);
      pe.extra_tweets = 160 + rng.below(140);
    }
    for (int w = 0; w < 10; ++w)
      pe.words.push_back(topic_words[static_cast<size_t>(e) * 10 + w]);
    pe.positive = rng.below(2) == 0;
    events.push_back(pe);
  }
  size_t burst_total = 0;
  for (const auto& e : events) burst_total += e.extra_tweets;
  if (burst_total > params.n_tweets * 6 / 10) {
    double scale = static_cast<double>(params.n_tweets * 6 / 10) / burst_total;
    for (auto& e : events)
      e.extra_tweets = std::max<size_t>(40,
          static_cast<size_t>(e.extra_tweets * scale));
  }

  uint64_t next_id = 1467810000;
  size_t written = 0;

  // Tweets carry a coherent tone: the label sets the tone up to a
  // tweet-level flip, and tokens follow the tone up to a smaller token-level
  // flip. The within-tweet coherence is what lets co-occurrence embeddings
  // separate the polarity words, as they do on real text.
  constexpr double kToneFlip = 0.20;
  constexpr double kTokenFlip = 0.17;

  auto sentiment_word = [&](bool tone_pos) -> std::string_view {
    bool use_pos = tone_pos != (rng.uniform() < kTokenFlip);
    return use_pos ? kPositive[pick(pools.pos_cdf, rng)]
                   : kNegative[pick(pools.neg_cdf, rng)];
  };

  auto build_text = [&](bool positive,
                        const PlantedEvent* event) -> std::string {
    std::vector<std::string> toks;
    bool tone_pos = positive != (rng.uniform() < kToneFlip);
    size_t len = 5 + rng.below(9) + rng.below(7);
    if (event) {
      size_t k = 3 + rng.below(3);
      for (size_t i = 0; i < k; ++i)
        toks.emplace_back(event->words[rng.below(event->words.size())]);
      len = 4 + rng.below(6);
    }
    for (size_t i = 0; i < len; ++i) {
      double r = rng.uniform();
      if (r < 0.44) toks.emplace_back(kFunction[pick(pools.fun_cdf, rng)]);
      else if (r < 0.78) toks.emplace_back(kNeutral[pick(pools.neu_cdf, rng)]);
      else toks.emplace_back(sentiment_word(tone_pos));
    }
    // negation idioms drive the SCT vs SFE split
    if (positive && rng.uniform() < 0.14) {
      std::string_view neg = rng.below(2) ? "can't" : "cant";
      toks.push_back(std::string(neg));
      toks.emplace_back(kAnticipation[rng.below(2)]);  // wait / miss
    }
    if (!positive && rng.uniform() < 0.14) {
      static constexpr std::string_view negs[] = {"don't", "dont", "not",
                                                  "never"};
      toks.push_back(std::string(negs[rng.below(4)]));
      toks.emplace_back(kPositive[pick(pools.pos_cdf, rng)]);
    }
    // corpus texture
    if (rng.uniform() < 0.07) toks.push_back("&quot;");
    if (rng.uniform() < 0.05) toks.push_back("&amp;");
    if (rng.uniform() < 0.10)
      toks.push_back("@user" + std::to_string(rng.below(9000)));
    if (rng.uniform() < 0.07)
      toks.push_back("http://bit.ly/" + std::to_string(rng.below(100000)));
    if (!toks.empty() && rng.uniform() < 0.12) toks.back() += "!!";

    std::string text;
    for (size_t i = 0; i < toks.size(); ++i) {
      if (i) text += ' ';
      text += toks[i];
    }
    return text;
  };

  auto emit = [&](int64_t ts, bool positive, const PlantedEvent* event) {
    std::string date = format_s140_date(ts, rng);
    std::string user = "user" + std::to_string(rng.below(20000));
    std::string text = build_text(positive, event);
    out << csv_quote(positive ? "4" : "0") << ','
        << csv_quote(std::to_string(next_id++)) << ',' << csv_quote(date)
        << ',' << csv_quote("NO_QUERY") << ',' << csv_quote(user) << ','
        << csv_quote(text) << '\n';
    ++written;
  };

  for (const auto& e : events) {
    for (size_t i = 0; i < e.extra_tweets && written < params.n_tweets; ++i) {
      int64_t ts = e.start + static_cast<int64_t>(
                                 rng.uniform() *
                                 static_cast<double>(e.end - e.start + 1));
      bool positive = rng.uniform() < (e.positive ? 0.8 : 0.2);
      emit(std::min(ts, params.t_end), positive, &e);
    }
  }
  while (written < params.n_tweets) {
    int64_t ts = params.t_start +
                 static_cast<int64_t>(rng.uniform() *
                                      static_cast<double>(span + 1));
    emit(std::min(ts, params.t_end), rng.below(2) == 0, nullptr);
  }
}

void generate_embeddings_tsv(const std::string& path,
                             const corpus::Corpus& corpus, int dim,
                             uint64_t seed) {
  if (dim < 2) throw Error("synth.bad_dim", "embedding dim must be >= 2");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("synth.io", "cannot write " + path);

  SplitMix64 dir_rng(derive_seed(seed, "synth.embed.dir"));
  std::vector<double> mu(dim);
  double norm = 0.0;
  for (auto& v : mu) {
    v = dir_rng.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  // class separation 2 * 0.74 / sigma 1.0 -> head accuracy ~ 0.77
  for (auto& v : mu) v = v / norm * 0.74;

  char buf[64];
  for (const auto& t : corpus.tweets) {
    SplitMix64 rng(derive_seed(seed ^ t.id, "synth.embed.vec"));
    double sign =
        t.label && *t.label == corpus::SentimentLabel::Positive ? 1.0 : -1.0;
    out << t.id << '\t';
    for (int d = 0; d < dim; ++d) {
      double v = sign * mu[d] + rng.normal();
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      if (d) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace edsa::synth
