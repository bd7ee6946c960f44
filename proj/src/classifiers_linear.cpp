#include <algorithm>
#include <cmath>

#include "edsa/classifiers.hpp"
#include "edsa/error.hpp"

namespace edsa::classifiers {

std::string_view linear_kind_name(LinearKind k) {
  switch (k) {
    case LinearKind::LR: return "lr";
    case LinearKind::Ridge: return "ridge";
    case LinearKind::SVM: return "svm";
  }
  return "?";
}

namespace {

// beta . [1 | x] on a sparse row
double dot_row(std::span<const double> beta, const vectorize::SparseRow& row) {
  double s = beta[0];
  for (size_t k = 0; k < row.nnz(); ++k) s += beta[row.idx[k] + 1] * row.val[k];
  return s;
}

double log1pexp(double z) {
  // numerically safe log(1 + e^z)
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> column_max(const vectorize::DocTermMatrix& matrix) {
  std::vector<double> cmax(matrix.cols + 1, 0.0);
  cmax[0] = 1.0;  // intercept column
  for (const auto& row : matrix.rows)
    for (size_t k = 0; k < row.nnz(); ++k)
      cmax[row.idx[k] + 1] = std::max(cmax[row.idx[k] + 1],
                                      std::abs(row.val[k]));
  for (auto& v : cmax)
    if (v == 0.0) v = 1.0;
  return cmax;
}

}  // namespace

double lr_objective(std::span<const double> beta,
                    std::span<const vectorize::SparseRow> rows,
                    std::span<const int> y01, double lambda) {
  double l = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double z = dot_row(beta, rows[i]);
    l += y01[i] * z - log1pexp(z);
  }
  if (lambda > 0.0) {
    double pen = 0.0;
    for (double b : beta) pen += b * b;  // j from 0: intercept included
    l -= lambda * pen;
  }
  return l;
}

void lr_gradient(std::span<const double> beta,
                 std::span<const vectorize::SparseRow> rows,
                 std::span<const int> y01, double lambda,
                 std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (size_t i = 0; i < rows.size(); ++i) {
    double r = y01[i] - sigmoid(dot_row(beta, rows[i]));
    grad[0] += r;
    const auto& row = rows[i];
    for (size_t k = 0; k < row.nnz(); ++k)
      grad[row.idx[k] + 1] += r * row.val[k];
  }
  if (lambda > 0.0)
    for (size_t j = 0; j < beta.size(); ++j) grad[j] -= 2.0 * lambda * beta[j];
}

double svm_objective(std::span<const double> wb,
                     std::span<const vectorize::SparseRow> rows,
                     std::span<const int> ypm1, double C) {
  // wb = [b | w]; objective C * sum hinge + 0.5 ||w||^2
  double hinge = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double z = dot_row(wb, rows[i]);
    hinge += std::max(0.0, 1.0 - ypm1[i] * z);
  }
  double reg = 0.0;
  for (size_t j = 1; j < wb.size(); ++j) reg += wb[j] * wb[j];
  return C * hinge + 0.5 * reg;
}

namespace {

LinearModel train_logistic(const vectorize::DocTermMatrix& matrix,
                           std::span<const int> y01, double lambda,
                           const LinearParams& params) {
  size_t dim = matrix.cols + 1;
  std::vector<double> beta(dim, 0.0), grad(dim, 0.0);
  std::vector<double> cmax = column_max(matrix);
  double inv_n = 1.0 / static_cast<double>(matrix.rows.size());

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    // full gradient (penalty included) drives the stopping check
    lr_gradient(beta, matrix.rows, y01, lambda, grad);
    double ginf = 0.0;
    for (double g : grad) ginf = std::max(ginf, std::abs(g));
    if (ginf < params.tol) break;
    // ascent on the mean log-likelihood, per-feature scaled by column max;
    // the quadratic penalty is applied as a proximal shrink so arbitrarily
    // large lambda stays stable
    for (size_t j = 0; j < dim; ++j) {
      double eta = params.lr * inv_n / cmax[j];
      double lik = grad[j] + 2.0 * lambda * beta[j];  // penalty stripped
      beta[j] = (beta[j] + eta * lik) / (1.0 + 2.0 * eta * lambda);
    }
    if (!std::isfinite(beta[0]))
      throw Error("classifiers.diverged",
                  "non-finite weights; lower the learning rate");
  }
  double obj = lr_objective(beta, matrix.rows, y01, lambda);
  if (!std::isfinite(obj))
    throw Error("classifiers.diverged",
                "non-finite loss; lower the learning rate");
  LinearModel model;
  model.kind = lambda > 0.0 ? LinearKind::Ridge : LinearKind::LR;
  model.beta = std::move(beta);
  return model;
}

// Per-sample subgradient descent (Pegasos schedule) on
// C * sum hinge + 0.5 ||w||^2, equivalently lambda/2 ||w||^2 + mean hinge
// with lambda = 1 / (C n). Cyclic sample order keeps it deterministic.
LinearModel train_svm(const vectorize::DocTermMatrix& matrix,
                      std::span<const int> y01, const LinearParams& params) {
  size_t dim = matrix.cols + 1;
  size_t n = matrix.rows.size();
  std::vector<int> ypm1(y01.size());
  for (size_t i = 0; i < y01.size(); ++i) ypm1[i] = y01[i] ? 1 : -1;
  double lambda = 1.0 / (params.C * static_cast<double>(n));

  // w kept as scale * v so the (1 - eta*lambda) shrink is O(1); the
  // unregularized bias lives outside the scaled block
  std::vector<double> v(dim - 1, 0.0);
  double b = 0.0;
  double scale = 1.0;
  double t = static_cast<double>(n);  // warm offset tames the first steps
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (size_t i = 0; i < n; ++i) {
      t += 1.0;
      double eta = params.lr / (lambda * t);
      const auto& row = matrix.rows[i];
      double z = b;
      for (size_t k = 0; k < row.nnz(); ++k)
        z += scale * v[row.idx[k]] * row.val[k];
      bool violated = ypm1[i] * z < 1.0;
      scale *= 1.0 - eta * lambda;
      if (violated) {
        double g = eta * ypm1[i] / scale;
        for (size_t k = 0; k < row.nnz(); ++k)
          v[row.idx[k]] += g * row.val[k];
        b += ypm1[i] * params.lr / t;
      }
      if (scale < 1e-9) {
        for (auto& x : v) x *= scale;
        scale = 1.0;
      }
    }
    if (!std::isfinite(scale) || !std::isfinite(b))
      throw Error("classifiers.diverged",
                  "non-finite weights; lower the learning rate");
  }
  LinearModel model;
  model.kind = LinearKind::SVM;
  model.beta.resize(dim);
  model.beta[0] = b;
  for (size_t j = 1; j < dim; ++j) model.beta[j] = scale * v[j - 1];
  return model;
}

}  // namespace

LinearModel train_linear(const vectorize::DocTermMatrix& matrix,
                         std::span<const SentimentLabel> labels,
                         LinearKind kind, const LinearParams& params,
                         uint64_t vocab_hash) {
  if (matrix.rows.size() != labels.size())
    throw Error("classifiers.length_mismatch", "rows / labels mismatch");
  if (matrix.rows.empty())
    throw Error("classifiers.empty", "no training rows");
  std::vector<int> y = binary_labels(labels);

  LinearModel model;
  switch (kind) {
    case LinearKind::LR:
      model = train_logistic(matrix, y, 0.0, params);
      break;
    case LinearKind::Ridge:
      model = train_logistic(matrix, y, params.lambda, params);
      model.kind = LinearKind::Ridge;
      break;
    case LinearKind::SVM:
      model = train_svm(matrix, y, params);
      break;
  }
  model.vocab_hash = vocab_hash;
  return model;
}

double decision_value(const LinearModel& model,
                      const vectorize::SparseRow& row) {
  return dot_row(model.beta, row);
}

Prediction predict(const LinearModel& model, const vectorize::SparseRow& row) {
  double z = decision_value(model, row);
  Prediction p;
  if (model.kind == LinearKind::SVM) {
    p.score = z;
    p.label = z >= 0.0 ? SentimentLabel::Positive : SentimentLabel::Negative;
  } else {
    p.score = sigmoid(z);
    p.label = p.score >= 0.5 ? SentimentLabel::Positive
                             : SentimentLabel::Negative;
  }
  return p;
}

}  // namespace edsa::classifiers
