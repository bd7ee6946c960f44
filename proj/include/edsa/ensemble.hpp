#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "edsa/classifiers.hpp"
#include "edsa/corpus.hpp"
#include "edsa/events.hpp"
#include "edsa/preprocess.hpp"

namespace edsa::ensemble {

using classifiers::Prediction;
using corpus::SentimentLabel;

// Most frequent label; ties go to the smallest in the fixed order
// Negative < Neutral < Positive.
SentimentLabel mode(std::span<const SentimentLabel> labels);

// A trained sentiment model exposed to the vote: its SA preprocessing
// pipeline plus a closure that predicts from the preprocessed tokens.
struct SentimentPredictor {
  std::string name;
  preprocess::Pipeline satp = preprocess::Pipeline::SCT;
  std::function<Prediction(const std::vector<std::string>& tokens,
                           const corpus::Tweet& tweet)>
      predict;
};

struct TweetVote {
  uint64_t tweet_id = 0;
  SentimentLabel vote = SentimentLabel::Negative;
  std::vector<std::pair<std::string, SentimentLabel>> per_model;
};

struct EventVote {
  events::Event event;
  SentimentLabel vote = SentimentLabel::Negative;
  std::vector<std::pair<std::string, SentimentLabel>> per_model;
  std::vector<TweetVote> tweets;  // the I_S rows for this event
};

struct MethodReport {
  events::Method method = events::Method::MABED;
  std::vector<EventVote> events;
};

struct EnsembleReport {
  std::vector<MethodReport> methods;
  std::vector<std::string> warnings;
};

// Vote over already-detected events. Output is a deterministic reduction
// over (method, event, model, tweet); identical for any thread count.
struct EdMethodRun {
  events::Method method;
  std::vector<events::Event> events;
};

EnsembleReport vote_events(const corpus::Corpus& corpus,
                           std::span<const EdMethodRun> runs,
                           std::span<const SentimentPredictor> models,
                           int threads = 1);

// Full Algorithm-1 pass: CT preprocessing, event detection per enabled
// method, then the vote.
struct EdConfig {
  std::vector<events::Method> methods = {events::Method::MABED,
                                         events::Method::OLDA,
                                         events::Method::PeakyTopics};
  int num_slices = 32;
  events::MabedParams mabed;
  events::OldaParams olda;
  events::PeakyParams peaky;
};

EnsembleReport run_edsa(const corpus::Corpus& corpus, const EdConfig& config,
                        std::span<const SentimentPredictor> models,
                        int threads = 1);

std::string report_to_json(const EnsembleReport& report,
                           std::string_view config_hash);
std::string report_to_csv(const EnsembleReport& report);

}  // namespace edsa::ensemble
