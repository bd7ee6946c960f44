#include "edsa/preprocess.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>
#include <unordered_set>

#include "edsa/error.hpp"

namespace edsa::preprocess {

std::string_view pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::MT: return "mt";
    case Pipeline::PT: return "pt";
    case Pipeline::CT: return "ct";
    case Pipeline::SCT: return "sct";
    case Pipeline::SFE: return "sfe";
  }
  return "?";
}

std::optional<Pipeline> pipeline_from_name(std::string_view s) {
  if (s == "mt") return Pipeline::MT;
  if (s == "pt") return Pipeline::PT;
  if (s == "ct") return Pipeline::CT;
  if (s == "sct") return Pipeline::SCT;
  if (s == "sfe") return Pipeline::SFE;
  return std::nullopt;
}

PipelineSpec PipelineSpec::resolve(Pipeline p, bool sfe_lemma) {
  switch (p) {
    case Pipeline::MT:
      return {p, true, true, false, false, false, false};
    case Pipeline::PT:
      return {p, true, true, false, true, false, false};
    case Pipeline::CT:
      return {p, true, true, false, true, true, false};
    case Pipeline::SCT:
      // Keeps case, duplicated letters and stopwords.
      return {p, false, true, false, false, false, false};
    case Pipeline::SFE:
      return {p, false, true, true, false, sfe_lemma, true};
  }
  throw Error("preprocess.bad_pipeline", "unknown pipeline");
}

// ---------------------------------------------------------------------------
// word lists

namespace {

// Bundled English stopword list (~175 entries). Tests reference it verbatim;
// changing it changes every CT/PT artifact downstream.
constexpr std::string_view kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "cannot",
    "could", "did", "do", "does", "doing", "down", "during", "each", "few",
    "for", "from", "further", "had", "has", "have", "having", "he", "her",
    "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
    "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most",
    "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
    "same", "she", "should", "so", "some", "such", "than", "that", "the",
    "their", "theirs", "them", "themselves", "then", "there", "these",
    "they", "this", "those", "through", "to", "too", "under", "until", "up",
    "very", "was", "we", "were", "what", "when", "where", "which", "while",
    "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
    "yourself", "yourselves", "shall", "may", "might", "must", "ought",
    "also", "onto", "upon", "via", "yet",
    // stripped contraction remnants seen throughout the corpus
    "im", "ive", "youre", "youve", "hes", "shes", "weve", "theyre",
    "theyve", "isnt", "arent", "wasnt", "werent", "hasnt", "havent",
    "hadnt", "doesnt", "dont", "didnt", "wont", "wouldnt", "shant",
    "shouldnt", "cant", "couldnt", "mustnt", "lets", "thats", "whos",
    "whats", "heres", "theres", "wheres", "whys", "hows", "aint",
};

constexpr std::string_view kNegators[] = {"not", "no", "never"};

// Fixed contraction map. The strip-punctuation step runs first, so the
// apostrophe-less spellings must match too.
const std::unordered_map<std::string_view, std::string_view>&
contraction_map() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      {"don't", "do not"},     {"dont", "do not"},
      {"can't", "can not"},    {"cant", "can not"},
      {"won't", "will not"},   {"wont", "will not"},
      {"doesn't", "does not"}, {"doesnt", "does not"},
      {"didn't", "did not"},   {"didnt", "did not"},
      {"isn't", "is not"},     {"isnt", "is not"},
      {"aren't", "are not"},   {"arent", "are not"},
      {"wasn't", "was not"},   {"wasnt", "was not"},
      {"weren't", "were not"}, {"werent", "were not"},
      {"haven't", "have not"}, {"havent", "have not"},
      {"hasn't", "has not"},   {"hasnt", "has not"},
      {"hadn't", "had not"},   {"hadnt", "had not"},
      {"couldn't", "could not"}, {"couldnt", "could not"},
      {"wouldn't", "would not"}, {"wouldnt", "would not"},
      {"shouldn't", "should not"}, {"shouldnt", "should not"},
      {"mustn't", "must not"}, {"mustnt", "must not"},
      {"needn't", "need not"}, {"neednt", "need not"},
      {"shan't", "shall not"}, {"shant", "shall not"},
      {"ain't", "am not"},     {"aint", "am not"},
      {"i'm", "i am"},         {"it's", "it is"},
      {"let's", "let us"},
  };
  return m;
}

// Irregular lemma lookup (~200 entries), mostly noun plurals; the suffix
// stripper below handles the regular forms.
const std::unordered_map<std::string_view, std::string_view>&
irregular_lemmas() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      {"children", "child"},   {"men", "man"},         {"women", "woman"},
      {"feet", "foot"},        {"teeth", "tooth"},     {"geese", "goose"},
      {"mice", "mouse"},       {"lice", "louse"},      {"people", "person"},
      {"oxen", "ox"},          {"dice", "die"},        {"pence", "penny"},
      {"criteria", "criterion"}, {"phenomena", "phenomenon"},
      {"data", "datum"},       {"media", "medium"},    {"bacteria", "bacterium"},
      {"curricula", "curriculum"}, {"memoranda", "memorandum"},
      {"strata", "stratum"},   {"alumni", "alumnus"},  {"cacti", "cactus"},
      {"fungi", "fungus"},     {"nuclei", "nucleus"},  {"radii", "radius"},
      {"stimuli", "stimulus"}, {"syllabi", "syllabus"},
      {"analyses", "analysis"}, {"bases", "basis"},    {"crises", "crisis"},
      {"diagnoses", "diagnosis"}, {"hypotheses", "hypothesis"},
      {"oases", "oasis"},      {"parentheses", "parenthesis"},
      {"theses", "thesis"},    {"axes", "axis"},       {"appendices", "appendix"},
      {"indices", "index"},    {"matrices", "matrix"}, {"vertices", "vertex"},
      {"vortices", "vortex"},  {"aquaria", "aquarium"},
      {"gymnasia", "gymnasium"}, {"millennia", "millennium"},
      {"referenda", "referendum"}, {"stadia", "stadium"},
      {"symposia", "symposium"}, {"automata", "automaton"},
      {"corpora", "corpus"},   {"genera", "genus"},    {"opera", "opus"},
      {"loaves", "loaf"},      {"leaves", "leaf"},     {"calves", "calf"},
      {"halves", "half"},      {"knives", "knife"},    {"lives", "life"},
      {"selves", "self"},      {"shelves", "shelf"},   {"thieves", "thief"},
      {"wives", "wife"},       {"wolves", "wolf"},     {"scarves", "scarf"},
      {"elves", "elf"},        {"hooves", "hoof"},     {"dwarves", "dwarf"},
      {"wharves", "wharf"},    {"echoes", "echo"},     {"embargoes", "embargo"},
      {"heroes", "hero"},      {"potatoes", "potato"}, {"tomatoes", "tomato"},
      {"torpedoes", "torpedo"}, {"vetoes", "veto"},    {"volcanoes", "volcano"},
      {"mosquitoes", "mosquito"}, {"buffaloes", "buffalo"},
      {"dominoes", "domino"},  {"mangoes", "mango"},   {"cargoes", "cargo"},
      {"foci", "focus"},       {"loci", "locus"},      {"termini", "terminus"},
      {"larvae", "larva"},     {"antennae", "antenna"},
      {"formulae", "formula"}, {"nebulae", "nebula"},  {"vertebrae", "vertebra"},
      {"vitae", "vita"},       {"algae", "alga"},      {"amoebae", "amoeba"},
      {"series", "series"},    {"species", "species"}, {"deer", "deer"},
      {"sheep", "sheep"},      {"fish", "fish"},       {"moose", "moose"},
      {"aircraft", "aircraft"}, {"salmon", "salmon"},  {"trout", "trout"},
      {"bison", "bison"},      {"swine", "swine"},     {"cod", "cod"},
      {"shrimp", "shrimp"},    {"news", "news"},       {"means", "means"},
      {"went", "go"},          {"gone", "go"},         {"goes", "go"},
      {"ran", "run"},          {"ate", "eat"},         {"eaten", "eat"},
      {"began", "begin"},      {"begun", "begin"},     {"broke", "break"},
      {"broken", "break"},     {"brought", "bring"},   {"built", "build"},
      {"bought", "buy"},       {"caught", "catch"},    {"chose", "choose"},
      {"chosen", "choose"},    {"came", "come"},       {"cost", "cost"},
      {"cut", "cut"},          {"dealt", "deal"},      {"did", "do"},
      {"done", "do"},          {"drew", "draw"},       {"drawn", "draw"},
      {"drank", "drink"},      {"drunk", "drink"},     {"drove", "drive"},
      {"driven", "drive"},     {"fell", "fall"},       {"fallen", "fall"},
      {"felt", "feel"},        {"fought", "fight"},    {"found", "find"},
      {"flew", "fly"},         {"flown", "fly"},       {"forgot", "forget"},
      {"forgotten", "forget"}, {"froze", "freeze"},    {"frozen", "freeze"},
      {"got", "get"},          {"gotten", "get"},      {"gave", "give"},
      {"given", "give"},       {"grew", "grow"},       {"grown", "grow"},
      {"heard", "hear"},       {"held", "hold"},       {"hurt", "hurt"},
      {"kept", "keep"},        {"knew", "know"},       {"known", "know"},
      {"laid", "lay"},         {"led", "lead"},        {"left", "leave"},
      {"lent", "lend"},        {"lost", "lose"},       {"made", "make"},
      {"meant", "mean"},       {"met", "meet"},        {"paid", "pay"},
      {"put", "put"},          {"read", "read"},       {"rode", "ride"},
      {"ridden", "ride"},      {"rang", "ring"},       {"rung", "ring"},
      {"rose", "rise"},        {"risen", "rise"},      {"said", "say"},
      {"saw", "see"},          {"seen", "see"},        {"sold", "sell"},
      {"sent", "send"},        {"set", "set"},         {"shook", "shake"},
      {"shaken", "shake"},     {"shone", "shine"},     {"shot", "shoot"},
      {"showed", "show"},      {"shown", "show"},      {"shut", "shut"},
      {"sang", "sing"},        {"sung", "sing"},       {"sank", "sink"},
      {"sunk", "sink"},        {"sat", "sit"},         {"slept", "sleep"},
      {"spoke", "speak"},      {"spoken", "speak"},    {"spent", "spend"},
      {"stood", "stand"},      {"stole", "steal"},     {"stolen", "steal"},
      {"swam", "swim"},        {"swum", "swim"},       {"took", "take"},
      {"taken", "take"},       {"taught", "teach"},    {"tore", "tear"},
      {"torn", "tear"},        {"told", "tell"},       {"thought", "think"},
      {"threw", "throw"},      {"thrown", "throw"},    {"understood", "understand"},
      {"woke", "wake"},        {"woken", "wake"},      {"wore", "wear"},
      {"worn", "wear"},        {"won", "win"},         {"wrote", "write"},
      {"written", "write"},    {"better", "good"},     {"best", "good"},
      {"worse", "bad"},        {"worst", "bad"},
  };
  return m;
}

const std::unordered_set<std::string_view>& stopword_set() {
  static const std::unordered_set<std::string_view> s(std::begin(kStopwords),
                                                      std::end(kStopwords));
  return s;
}

bool is_ws_cp(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Punctuation and symbol codepoints stripped from tokens. ASCII is exact;
// beyond that the common punctuation/symbol blocks seen in the corpus.
bool is_punct_cp(uint32_t cp) {
  if (cp < 0x80) {
    char c = static_cast<char>(cp);
    return !((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
             (c >= 'A' && c <= 'Z')) && cp > 0x20;
  }
  if (cp >= 0xA1 && cp <= 0xBF) return true;   // latin-1 punct/symbols
  if (cp == 0xD7 || cp == 0xF7) return true;
  if (cp >= 0x2000 && cp <= 0x206F) return true;  // general punctuation
  if (cp >= 0x20A0 && cp <= 0x20CF) return true;  // currency
  if (cp >= 0x2190 && cp <= 0x2BFF) return true;  // arrows..misc symbols
  if (cp >= 0x2E00 && cp <= 0x2E7F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  if (cp >= 0xFE00 && cp <= 0xFE0F) return true;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;  // emoji
  return false;
}

// Minimal UTF-8 cursor; invalid bytes were already replaced upstream but we
// still fail soft by treating them as single codepoints.
uint32_t next_cp(std::string_view s, size_t& i) {
  unsigned char c = s[i];
  if (c < 0x80) { ++i; return c; }
  if ((c & 0xE0) == 0xC0 && i + 1 < s.size()) {
    uint32_t cp = (c & 0x1Fu) << 6 | (s[i + 1] & 0x3Fu);
    i += 2;
    return cp;
  }
  if ((c & 0xF0) == 0xE0 && i + 2 < s.size()) {
    uint32_t cp = (c & 0x0Fu) << 12 | (s[i + 1] & 0x3Fu) << 6 |
                  (s[i + 2] & 0x3Fu);
    i += 3;
    return cp;
  }
  if ((c & 0xF8) == 0xF0 && i + 3 < s.size()) {
    uint32_t cp = (c & 0x07u) << 18 | (s[i + 1] & 0x3Fu) << 12 |
                  (s[i + 2] & 0x3Fu) << 6 | (s[i + 3] & 0x3Fu);
    i += 4;
    return cp;
  }
  ++i;
  return c;
}

void append_cp(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c); });
}

std::string undouble(std::string stem) {
  size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

}  // namespace

std::span<const std::string_view> stopwords() {
  return {kStopwords, std::size(kStopwords)};
}

bool is_stopword(std::string_view token) {
  return stopword_set().count(token) > 0;
}

bool is_negator(std::string_view token) {
  std::string low = ascii_lower(token);
  for (std::string_view n : kNegators)
    if (low == n) return true;
  return false;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  size_t i = 0;
  while (i < text.size()) {
    size_t before = i;
    uint32_t cp = next_cp(text, i);
    if (is_ws_cp(cp)) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.append(text.substr(before, i - before));
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::string strip_punct_token(std::string_view token) {
  std::string out;
  size_t i = 0;
  while (i < token.size()) {
    uint32_t cp = next_cp(token, i);
    if (!is_punct_cp(cp)) append_cp(out, cp);
  }
  return out;
}

std::optional<std::vector<std::string>> expand_contraction(
    std::string_view token) {
  std::string low = ascii_lower(token);
  const auto& m = contraction_map();
  auto it = m.find(low);
  if (it == m.end()) {
    // generic suffix rules on apostrophe spellings only
    static constexpr std::pair<std::string_view, std::string_view> suffixes[] =
        {{"n't", "not"}, {"'m", "am"},   {"'re", "are"},
         {"'ve", "have"}, {"'ll", "will"}, {"'d", "would"}};
    for (auto [suf, word] : suffixes) {
      if (low.size() > suf.size() && low.ends_with(suf)) {
        std::string stem = low.substr(0, low.size() - suf.size());
        return std::vector<std::string>{stem, std::string(word)};
      }
    }
    return std::nullopt;
  }
  std::vector<std::string> words;
  std::string_view rep = it->second;
  size_t pos = 0;
  while (pos < rep.size()) {
    size_t sp = rep.find(' ', pos);
    if (sp == std::string_view::npos) sp = rep.size();
    words.emplace_back(rep.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return words;
}

std::string lemmatize_token(std::string_view token) {
  std::string low = ascii_lower(token);
  const auto& irr = irregular_lemmas();
  if (auto it = irr.find(low); it != irr.end()) return std::string(it->second);

  size_t n = low.size();
  if (n >= 5 && low.ends_with("ing")) {
    std::string stem = low.substr(0, n - 3);
    if (stem.size() >= 2 && has_vowel(stem)) return undouble(std::move(stem));
  }
  if (n >= 4 && low.ends_with("ed")) {
    std::string stem = low.substr(0, n - 2);
    if (stem.size() >= 2 && has_vowel(stem)) return undouble(std::move(stem));
  }
  if (n >= 5 && low.ends_with("sses")) return low.substr(0, n - 2);
  if (low.ends_with("ss")) return low;
  if (n >= 3 && low.ends_with("s")) return low.substr(0, n - 1);
  return low;
}

std::vector<std::string> apply_pipeline_text(std::string_view text,
                                             const PipelineSpec& spec) {
  std::string lowered;
  std::string_view src = text;
  if (spec.lowercase) {
    // ASCII lowering only; the corpus is overwhelmingly ASCII and keeping
    // non-ASCII codepoints untouched is deterministic.
    lowered = ascii_lower(text);
    src = lowered;
  }
  std::vector<std::string> tokens = tokenize(src);

  if (spec.strip_punct) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto& t : tokens) {
      std::string s = strip_punct_token(t);
      if (!s.empty()) kept.push_back(std::move(s));
    }
    tokens = std::move(kept);
  }

  if (spec.expand_contractions) {
    std::vector<std::string> expanded;
    expanded.reserve(tokens.size());
    for (auto& t : tokens) {
      if (auto words = expand_contraction(t)) {
        for (auto& w : *words) expanded.push_back(std::move(w));
      } else {
        expanded.push_back(std::move(t));
      }
    }
    tokens = std::move(expanded);
  }

  if (spec.remove_stopwords) {
    std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  }

  if (spec.lemmatize) {
    for (auto& t : tokens) t = lemmatize_token(t);
    std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  }

  if (spec.negation_fusion) {
    std::vector<std::string> fused;
    fused.reserve(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (is_negator(tokens[i]) && i + 1 < tokens.size()) {
        fused.push_back(tokens[i] + "_" + tokens[i + 1]);
        ++i;
      } else {
        fused.push_back(std::move(tokens[i]));
      }
    }
    tokens = std::move(fused);
  }

  return tokens;
}

TokenizedDoc apply_pipeline(const corpus::Tweet& tweet,
                            const PipelineSpec& spec) {
  return {tweet.id, apply_pipeline_text(tweet.raw_text, spec)};
}

std::vector<TokenizedDoc> apply_pipeline(const corpus::Corpus& c,
                                         const PipelineSpec& spec) {
  std::vector<TokenizedDoc> docs;
  docs.reserve(c.size());
  for (const auto& t : c.tweets) docs.push_back(apply_pipeline(t, spec));
  return docs;
}

}  // namespace edsa::preprocess
