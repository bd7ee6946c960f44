#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "edsa/classifiers.hpp"
#include "edsa/corpus.hpp"

namespace edsa::evaluation {

using classifiers::Prediction;
using corpus::SentimentLabel;

struct Metrics {
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  std::optional<double> precision;  // absent when tp + fp == 0
  std::optional<double> recall;     // absent when tp + fn == 0
};

Metrics score(std::span<const Prediction> preds,
              std::span<const SentimentLabel> truth,
              SentimentLabel positive_class = SentimentLabel::Positive);
Metrics score_labels(std::span<const SentimentLabel> preds,
                     std::span<const SentimentLabel> truth,
                     SentimentLabel positive_class = SentimentLabel::Positive);

// Stratified fold assignment; pure function of (labels, k, seed). Folds
// partition the index set exactly.
std::vector<std::vector<uint32_t>> kfold_indices(
    std::span<const SentimentLabel> labels, int k, uint64_t seed);

struct KfoldResult {
  Metrics mean;
  std::vector<Metrics> folds;
};

// trainer(train_indices) -> opaque model token used by predictor(token, i).
using TrainFn = std::function<size_t(std::span<const uint32_t>)>;
using PredictFn = std::function<Prediction(size_t, uint32_t)>;

KfoldResult kfold(std::span<const SentimentLabel> labels, int k, uint64_t seed,
                  const TrainFn& train, const PredictFn& predict);

}  // namespace edsa::evaluation
