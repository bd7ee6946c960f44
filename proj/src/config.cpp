#include "edsa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edsa/error.hpp"
#include "edsa/rng.hpp"

namespace edsa::config {

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      // paths
      "corpus", "embeddings", "model_dir", "report_dir", "data_dir",
      // global
      "seed", "threads", "dataset", "limit",
      // preprocessing
      "pipeline", "sfe_lemma",
      // vectorize
      "scheme", "min_count",
      "cbow.dim", "cbow.window", "cbow.epochs", "cbow.lr", "cbow.negatives",
      // events
      "events.num_slices", "events.top_k", "events.dedup",
      "mabed.max_candidates", "mabed.main_word_pool",
      "olda.k", "olda.iters", "olda.alpha", "olda.beta0", "olda.lambda",
      "olda.min_docs",
      "peaky.sub_bins", "peaky.z_thresh",
      // classifiers
      "model", "models",
      "linear.lr", "linear.epochs", "linear.lambda", "linear.c",
      "softmax.lr", "softmax.epochs", "softmax.batch",
      "lstm.hidden", "lstm.max_len", "lstm.batch", "lstm.lr", "lstm.epochs",
      "lstm.clip",
      // evaluation
      "eval.k",
      // synth fixture
      "synth.tweets", "synth.events", "synth.embedding_dim",
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw Error("config.unknown_key", "unknown config key '" + key + "'");
  kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

Config Config::from_text(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error("config.parse",
                  "line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config.io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string Config::get_str(const std::string& key,
                            const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

int64_t Config::get_int(const std::string& key, int64_t def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  int64_t v = 0;
  auto [p, ec] = std::from_chars(it->second.data(),
                                 it->second.data() + it->second.size(), v);
  if (ec != std::errc() || p != it->second.data() + it->second.size())
    throw Error("config.bad_value", key + " is not an integer");
  return v;
}

double Config::get_double(const std::string& key, double def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end != it->second.c_str() + it->second.size())
    throw Error("config.bad_value", key + " is not a number");
  return v;
}

bool Config::get_bool(const std::string& key, bool def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  if (it->second == "true" || it->second == "1" || it->second == "on")
    return true;
  if (it->second == "false" || it->second == "0" || it->second == "off")
    return false;
  throw Error("config.bad_value", key + " is not a boolean");
}

std::string Config::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : kv_) {  // std::map: already sorted
    if (k == "threads") continue;   // scheduling knob, not artifact semantics
    h = fnv1a64(k, h);
    h = fnv1a64("=", h);
    h = fnv1a64(v, h);
    h = fnv1a64("\n", h);
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace edsa::config
