#include <algorithm>
#include <cmath>
#include <numeric>

#include "edsa/classifiers.hpp"
#include "edsa/error.hpp"
#include "edsa/kernels.hpp"
#include "edsa/rng.hpp"

namespace edsa::classifiers {

std::vector<double> softmax_forward(const SoftmaxHead& head,
                                    std::span<const double> x) {
  if (x.size() != head.dim)
    throw Error("classifiers.dim_mismatch", "input dim does not match head");
  std::vector<double> z(head.classes);
  kernels::matvec(head.w.data(), head.classes, head.dim, x.data(), z.data());
  for (size_t c = 0; c < head.classes; ++c) z[c] += head.b[c];
  double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return z;
}

double softmax_loss_grad(const SoftmaxHead& head, std::span<const double> x,
                         int label, std::span<double> grad_w,
                         std::span<double> grad_b) {
  std::vector<double> p = softmax_forward(head, x);
  double loss = -std::log(std::max(p[label], 1e-300));
  for (size_t c = 0; c < head.classes; ++c) {
    double d = p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    grad_b[c] += d;
    kernels::axpy(d, x.data(), grad_w.data() + c * head.dim, head.dim);
  }
  return loss;
}

SoftmaxHead train_softmax_head(std::span<const std::vector<double>> x,
                               std::span<const SentimentLabel> labels,
                               const SoftmaxParams& params) {
  if (x.empty()) throw Error("classifiers.empty", "no training vectors");
  if (x.size() != labels.size())
    throw Error("classifiers.length_mismatch", "vectors / labels mismatch");
  size_t dim = x[0].size();
  for (const auto& v : x)
    if (v.size() != dim)
      throw Error("classifiers.dim_mismatch", "inconsistent vector dims");
  std::vector<int> y = binary_labels(labels);

  SoftmaxHead head;
  head.dim = dim;
  head.classes = 2;
  head.w.assign(2 * dim, 0.0);
  head.b.assign(2, 0.0);

  SplitMix64 rng(derive_seed(params.seed, "softmax.shuffle"));
  std::vector<uint32_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> gw(2 * dim), gb(2);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(params.batch)) {
      size_t end = std::min(order.size(),
                            start + static_cast<size_t>(params.batch));
      std::fill(gw.begin(), gw.end(), 0.0);
      std::fill(gb.begin(), gb.end(), 0.0);
      for (size_t i = start; i < end; ++i)
        softmax_loss_grad(head, x[order[i]], y[order[i]], gw, gb);
      double scale = -params.lr / static_cast<double>(end - start);
      kernels::axpy(scale, gw.data(), head.w.data(), head.w.size());
      kernels::axpy(scale, gb.data(), head.b.data(), head.b.size());
    }
  }
  return head;
}

Prediction predict(const SoftmaxHead& head, std::span<const double> x) {
  std::vector<double> p = softmax_forward(head, x);
  Prediction out;
  out.score = p[1];
  out.label = p[1] >= p[0] ? SentimentLabel::Positive
                           : SentimentLabel::Negative;
  return out;
}

}  // namespace edsa::classifiers
