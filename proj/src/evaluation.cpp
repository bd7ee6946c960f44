#include "edsa/evaluation.hpp"

#include <algorithm>
#include <array>

#include "edsa/error.hpp"
#include "edsa/rng.hpp"

namespace edsa::evaluation {

Metrics score_labels(std::span<const SentimentLabel> preds,
                     std::span<const SentimentLabel> truth,
                     SentimentLabel positive_class) {
  if (preds.size() != truth.size())
    throw Error("evaluation.length_mismatch", "preds / truth mismatch");
  Metrics m;
  for (size_t i = 0; i < preds.size(); ++i) {
    bool pred_pos = preds[i] == positive_class;
    bool true_pos = truth[i] == positive_class;
    if (pred_pos && true_pos) ++m.tp;
    else if (pred_pos && !true_pos) ++m.fp;
    else if (!pred_pos && true_pos) ++m.fn;
    else ++m.tn;
  }
  uint64_t total = m.tp + m.fp + m.tn + m.fn;
  m.accuracy = total ? static_cast<double>(m.tp + m.tn) / total : 0.0;
  if (m.tp + m.fp > 0)
    m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
  if (m.tp + m.fn > 0)
    m.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
  return m;
}

Metrics score(std::span<const Prediction> preds,
              std::span<const SentimentLabel> truth,
              SentimentLabel positive_class) {
  std::vector<SentimentLabel> labels;
  labels.reserve(preds.size());
  for (const auto& p : preds) labels.push_back(p.label);
  return score_labels(labels, truth, positive_class);
}

std::vector<std::vector<uint32_t>> kfold_indices(
    std::span<const SentimentLabel> labels, int k, uint64_t seed) {
  if (k < 2) throw Error("evaluation.bad_k", "k must be >= 2");
  if (static_cast<size_t>(k) > labels.size())
    throw Error("evaluation.fold_too_small",
                "k exceeds the corpus size; folds would be empty");
  std::array<std::vector<uint32_t>, 3> groups;
  for (uint32_t i = 0; i < labels.size(); ++i)
    groups[static_cast<int>(labels[i])].push_back(i);

  std::vector<std::vector<uint32_t>> folds(k);
  size_t cursor = 0;  // continues across label groups so no fold starves
  for (int l = 0; l < 3; ++l) {
    if (groups[l].empty()) continue;
    SplitMix64 rng(derive_seed(seed, "kfold." + std::to_string(l)));
    rng.shuffle(groups[l]);
    // deal round-robin so every fold holds a proportional share per label
    for (size_t i = 0; i < groups[l].size(); ++i)
      folds[cursor++ % k].push_back(groups[l][i]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

KfoldResult kfold(std::span<const SentimentLabel> labels, int k, uint64_t seed,
                  const TrainFn& train, const PredictFn& predict) {
  auto folds = kfold_indices(labels, k, seed);
  KfoldResult result;
  double acc = 0.0, prec = 0.0, rec = 0.0;
  int prec_n = 0, rec_n = 0;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<uint32_t> train_idx;
    for (int other = 0; other < k; ++other) {
      if (other == fold) continue;
      train_idx.insert(train_idx.end(), folds[other].begin(),
                       folds[other].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    size_t token = train(train_idx);
    std::vector<Prediction> preds;
    std::vector<SentimentLabel> truth;
    preds.reserve(folds[fold].size());
    for (uint32_t i : folds[fold]) {
      preds.push_back(predict(token, i));
      truth.push_back(labels[i]);
    }
    Metrics m = score(preds, truth);
    acc += m.accuracy;
    if (m.precision) {
      prec += *m.precision;
      ++prec_n;
    }
    if (m.recall) {
      rec += *m.recall;
      ++rec_n;
    }
    result.folds.push_back(std::move(m));
  }
  result.mean.accuracy = acc / k;
  if (prec_n) result.mean.precision = prec / prec_n;
  if (rec_n) result.mean.recall = rec / rec_n;
  for (const auto& f : result.folds) {
    result.mean.tp += f.tp;
    result.mean.fp += f.fp;
    result.mean.tn += f.tn;
    result.mean.fn += f.fn;
  }
  return result;
}

}  // namespace edsa::evaluation
