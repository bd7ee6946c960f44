#include <algorithm>
#include <cmath>

#include "edsa/classifiers.hpp"
#include "edsa/error.hpp"

namespace edsa::classifiers {

std::vector<int> binary_labels(std::span<const SentimentLabel> labels) {
  std::vector<int> y;
  y.reserve(labels.size());
  bool has[2] = {false, false};
  for (SentimentLabel l : labels) {
    if (l == SentimentLabel::Neutral)
      throw Error("classifiers.not_binary",
                  "neutral label in binary training set");
    int v = l == SentimentLabel::Positive ? 1 : 0;
    has[v] = true;
    y.push_back(v);
  }
  if (labels.empty() || !has[0] || !has[1])
    throw Error("classifiers.single_class",
                "training set must contain both classes");
  return y;
}

NbModel train_nb(const vectorize::DocTermMatrix& matrix,
                 std::span<const SentimentLabel> labels, uint64_t vocab_hash) {
  if (matrix.scheme != vectorize::Scheme::RawFreq)
    throw Error("classifiers.bad_scheme", "NB needs raw-frequency features");
  if (matrix.rows.size() != labels.size())
    throw Error("classifiers.length_mismatch", "rows / labels mismatch");
  std::vector<int> y = binary_labels(labels);

  size_t v = matrix.cols;
  NbModel model;
  model.vocab_size = v;
  model.vocab_hash = vocab_hash;
  model.log_lik.assign(2 * v, 0.0);
  std::vector<double> counts(2 * v, 0.0);
  double class_docs[2] = {0.0, 0.0};
  double class_tokens[2] = {0.0, 0.0};
  for (size_t d = 0; d < matrix.rows.size(); ++d) {
    int cls = y[d];
    class_docs[cls] += 1.0;
    const auto& row = matrix.rows[d];
    for (size_t k = 0; k < row.nnz(); ++k) {
      counts[static_cast<size_t>(cls) * v + row.idx[k]] += row.val[k];
      class_tokens[cls] += row.val[k];
    }
  }
  double n = static_cast<double>(matrix.rows.size());
  model.log_prior = {std::log(class_docs[0] / n), std::log(class_docs[1] / n)};
  for (int cls = 0; cls < 2; ++cls) {
    double denom = class_tokens[cls] + static_cast<double>(v);  // Laplace
    for (size_t t = 0; t < v; ++t)
      model.log_lik[static_cast<size_t>(cls) * v + t] =
          std::log((counts[static_cast<size_t>(cls) * v + t] + 1.0) / denom);
  }
  return model;
}

std::array<double, 2> nb_posterior(const NbModel& model,
                                   const vectorize::SparseRow& row) {
  double s[2];
  for (int cls = 0; cls < 2; ++cls) {
    double acc = model.log_prior[cls];
    for (size_t k = 0; k < row.nnz(); ++k)
      acc += row.val[k] * model.loglik(cls, row.idx[k]);
    s[cls] = acc;
  }
  // normalize in log space; the multinomial coefficient cancels
  double mx = std::max(s[0], s[1]);
  double e0 = std::exp(s[0] - mx), e1 = std::exp(s[1] - mx);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

Prediction predict(const NbModel& model, const vectorize::SparseRow& row) {
  auto post = nb_posterior(model, row);
  Prediction p;
  p.score = post[1];
  p.label = post[1] >= post[0] ? SentimentLabel::Positive
                               : SentimentLabel::Negative;
  return p;
}

}  // namespace edsa::classifiers
