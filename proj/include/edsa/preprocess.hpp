#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edsa/corpus.hpp"

namespace edsa::preprocess {

enum class Pipeline { MT, PT, CT, SCT, SFE };

std::string_view pipeline_name(Pipeline p);
std::optional<Pipeline> pipeline_from_name(std::string_view s);

// Resolved step list. Order of application is fixed:
// lowercase -> tokenize -> strip punctuation -> expand contractions ->
// stopword removal -> lemmatize -> negation fusion.
struct PipelineSpec {
  Pipeline id;
  bool lowercase;
  bool strip_punct;
  bool expand_contractions;
  bool remove_stopwords;
  bool lemmatize;
  bool negation_fusion;

  // `sfe_lemma` toggles the lemma step of SFE only (on by default).
  static PipelineSpec resolve(Pipeline p, bool sfe_lemma = true);
};

struct TokenizedDoc {
  uint64_t tweet_id = 0;
  std::vector<std::string> tokens;
};

// Whitespace split only; punctuation handling is a separate step.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> apply_pipeline_text(std::string_view text,
                                             const PipelineSpec& spec);
TokenizedDoc apply_pipeline(const corpus::Tweet& tweet,
                            const PipelineSpec& spec);
std::vector<TokenizedDoc> apply_pipeline(const corpus::Corpus& c,
                                         const PipelineSpec& spec);

// Individual steps, exposed for tests.
std::string strip_punct_token(std::string_view token);
std::optional<std::vector<std::string>> expand_contraction(
    std::string_view token);
std::string lemmatize_token(std::string_view token);
bool is_stopword(std::string_view token);
bool is_negator(std::string_view token);
std::span<const std::string_view> stopwords();

}  // namespace edsa::preprocess
