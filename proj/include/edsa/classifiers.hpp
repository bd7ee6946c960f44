#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edsa/corpus.hpp"
#include "edsa/vectorize.hpp"

namespace edsa::classifiers {

using corpus::SentimentLabel;

struct Prediction {
  SentimentLabel label = SentimentLabel::Positive;
  double score = 0.0;  // P(positive) for probabilistic models, w.x+b for SVM
};

// Binary training: labels must be Negative/Positive only, both present.
// Returns 0/1 indices (Negative -> 0, Positive -> 1).
std::vector<int> binary_labels(std::span<const SentimentLabel> labels);

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes (raw-frequency features, Laplace alpha = 1)

struct NbModel {
  std::vector<double> log_prior;  // [neg, pos]
  std::vector<double> log_lik;    // 2 x V, row per class
  size_t vocab_size = 0;
  uint64_t vocab_hash = 0;

  double loglik(int cls, uint32_t term) const {
    return log_lik[static_cast<size_t>(cls) * vocab_size + term];
  }
};

NbModel train_nb(const vectorize::DocTermMatrix& matrix,
                 std::span<const SentimentLabel> labels,
                 uint64_t vocab_hash = 0);
Prediction predict(const NbModel& model, const vectorize::SparseRow& row);
// Posterior P(class | doc) for both classes (checked against Bayes rule).
std::array<double, 2> nb_posterior(const NbModel& model,
                                   const vectorize::SparseRow& row);

// ---------------------------------------------------------------------------
// Linear models: logistic regression, ridge-penalized logistic, linear SVM

enum class LinearKind { LR, Ridge, SVM };

std::string_view linear_kind_name(LinearKind k);

struct LinearParams {
  double lr = 0.1;      // per-feature scaled by column max
  int epochs = 100;
  double lambda = 0.25; // Ridge penalty (intercept included)
  double C = 0.1;       // SVM error-term penalty
  double tol = 1e-4;    // stop when ||grad||_inf drops below
};

struct LinearModel {
  LinearKind kind = LinearKind::LR;
  std::vector<double> beta;  // m + 1, beta[0] is the intercept
  uint64_t vocab_hash = 0;
};

LinearModel train_linear(const vectorize::DocTermMatrix& matrix,
                         std::span<const SentimentLabel> labels,
                         LinearKind kind, const LinearParams& params = {},
                         uint64_t vocab_hash = 0);
Prediction predict(const LinearModel& model, const vectorize::SparseRow& row);
double decision_value(const LinearModel& model,
                      const vectorize::SparseRow& row);  // beta . [1|x]

// Log-likelihood of the logistic model (lambda > 0 adds the quadratic
// penalty, intercept included) and its gradient; exposed for the
// finite-difference oracle.
double lr_objective(std::span<const double> beta,
                    std::span<const vectorize::SparseRow> rows,
                    std::span<const int> y01, double lambda);
void lr_gradient(std::span<const double> beta,
                 std::span<const vectorize::SparseRow> rows,
                 std::span<const int> y01, double lambda,
                 std::span<double> grad);
double svm_objective(std::span<const double> wb,
                     std::span<const vectorize::SparseRow> rows,
                     std::span<const int> ypm1, double C);

// ---------------------------------------------------------------------------
// Softmax head over dense sentence vectors

struct SoftmaxParams {
  double lr = 0.05;
  int epochs = 50;
  int batch = 64;
  uint64_t seed = 42;
};

struct SoftmaxHead {
  size_t dim = 0;
  size_t classes = 2;
  std::vector<double> w;  // classes x dim
  std::vector<double> b;  // classes
};

SoftmaxHead train_softmax_head(std::span<const std::vector<double>> x,
                               std::span<const SentimentLabel> labels,
                               const SoftmaxParams& params = {});
std::vector<double> softmax_forward(const SoftmaxHead& head,
                                    std::span<const double> x);
Prediction predict(const SoftmaxHead& head, std::span<const double> x);
// Cross-entropy loss and gradients for one example (finite-difference hook).
double softmax_loss_grad(const SoftmaxHead& head, std::span<const double> x,
                         int label, std::span<double> grad_w,
                         std::span<double> grad_b);

// ---------------------------------------------------------------------------
// LSTM with the standard gate updates + softmax head on h_T

struct LstmParams {
  int hidden = 128;
  int max_len = 30;
  int batch = 64;
  double lr = 1e-3;   // adaptive-moment step size
  int epochs = 10;
  double clip = 5.0;  // global gradient-norm clip
  uint64_t seed = 42;
};

struct LstmModel {
  int n = 0;  // hidden size
  int m = 0;  // input size
  // gate weights (n x m), recurrent weights (n x n), biases (n)
  std::vector<double> wi, wf, wo, wc;
  std::vector<double> vi, vf, vo, vc;
  std::vector<double> bi, bf, bo, bc;
  SoftmaxHead head;  // over h_T
  std::vector<double> epoch_loss;
};

struct LstmTrace {
  // per-step activations, kept for backprop; index 0 is t = 1
  std::vector<std::vector<double>> i, f, o, ctilde, c, h;
  const std::vector<double>& h_last() const { return h.back(); }
};

LstmTrace lstm_forward(const LstmModel& model,
                       std::span<const std::vector<double>> seq);

struct LstmGrads {
  std::vector<double> wi, wf, wo, wc, vi, vf, vo, vc, bi, bf, bo, bc;
  std::vector<double> head_w, head_b;

  void init(const LstmModel& model);
  void accumulate(const LstmGrads& other, double scale);
  double squared_norm() const;
  void scale_all(double s);
};

// Cross-entropy of head(h_T) against the label; fills full BPTT gradients.
double lstm_loss_grad(const LstmModel& model,
                      std::span<const std::vector<double>> seq, int label,
                      LstmGrads& grads);

LstmModel train_lstm(std::span<const std::vector<std::vector<double>>> seqs,
                     std::span<const SentimentLabel> labels,
                     int input_dim, const LstmParams& params = {});
Prediction predict(const LstmModel& model,
                   std::span<const std::vector<double>> seq);

}  // namespace edsa::classifiers
