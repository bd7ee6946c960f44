#include <cmath>

#include "doctest.h"
#include "edsa/classifiers.hpp"
#include "edsa/error.hpp"
#include "edsa/rng.hpp"

using namespace edsa;
using namespace edsa::classifiers;
using edsa::corpus::SentimentLabel;
using edsa::vectorize::DocTermMatrix;
using edsa::vectorize::Scheme;
using edsa::vectorize::SparseRow;

namespace {

SparseRow row(std::initializer_list<std::pair<uint32_t, double>> cells) {
  SparseRow r;
  for (auto [i, v] : cells) {
    r.idx.push_back(i);
    r.val.push_back(v);
  }
  return r;
}

DocTermMatrix matrix(Scheme scheme, size_t cols,
                     std::initializer_list<SparseRow> rows) {
  DocTermMatrix m;
  m.scheme = scheme;
  m.cols = cols;
  uint64_t id = 1;
  for (const auto& r : rows) {
    m.rows.push_back(r);
    m.doc_ids.push_back(id++);
  }
  return m;
}

constexpr SentimentLabel P = SentimentLabel::Positive;
constexpr SentimentLabel N = SentimentLabel::Negative;

}  // namespace

TEST_CASE("naive bayes on a separable toy set") {
  // vocab: 0 = good, 1 = bad
  auto m = matrix(Scheme::RawFreq, 2, {row({{0, 1.0}}), row({{1, 1.0}})});
  std::vector<SentimentLabel> y = {P, N};
  NbModel nb = train_nb(m, y);
  CHECK(predict(nb, row({{0, 1.0}})).label == P);
  CHECK(predict(nb, row({{1, 2.0}})).label == N);

  SUBCASE("empty doc falls back to the priors, tie goes positive") {
    CHECK(predict(nb, SparseRow{}).label == P);  // equal priors -> Positive
    auto skewed = matrix(Scheme::RawFreq, 2,
                         {row({{0, 1.0}}), row({{1, 1.0}}), row({{1, 1.0}})});
    std::vector<SentimentLabel> y3 = {P, N, N};
    NbModel nb3 = train_nb(skewed, y3);
    CHECK(predict(nb3, SparseRow{}).label == N);
  }

  SUBCASE("errors") {
    std::vector<SentimentLabel> single = {P, P};
    CHECK_THROWS_AS(train_nb(m, single), Error);
    auto tf = matrix(Scheme::TFIDF, 2, {row({{0, 1.0}}), row({{1, 1.0}})});
    CHECK_THROWS_AS(train_nb(tf, y), Error);
    std::vector<SentimentLabel> neutral = {P, SentimentLabel::Neutral};
    CHECK_THROWS_AS(train_nb(m, neutral), Error);
  }
}

TEST_CASE("naive bayes posterior equals a direct Bayes-rule evaluation") {
  // 6-doc toy corpus over 3 terms
  auto m = matrix(Scheme::RawFreq, 3,
                  {row({{0, 2.0}, {1, 1.0}}), row({{0, 1.0}}),
                   row({{0, 1.0}, {2, 1.0}}), row({{1, 3.0}}),
                   row({{1, 1.0}, {2, 2.0}}), row({{2, 1.0}})});
  std::vector<SentimentLabel> y = {P, P, P, N, N, N};
  NbModel nb = train_nb(m, y);

  // oracle: recompute Laplace likelihoods and the posterior from counts
  double count[2][3] = {{0, 4, 3}, {4, 1, 1}};  // [class][term], neg=0
  double tot[2] = {7, 6};
  auto posterior = [&](const SparseRow& doc) {
    double logp[2];
    for (int c = 0; c < 2; ++c) {
      logp[c] = std::log(0.5);
      for (size_t k = 0; k < doc.nnz(); ++k)
        logp[c] += doc.val[k] *
                   std::log((count[c][doc.idx[k]] + 1.0) / (tot[c] + 3.0));
    }
    double mx = std::max(logp[0], logp[1]);
    double e0 = std::exp(logp[0] - mx), e1 = std::exp(logp[1] - mx);
    return std::array<double, 2>{e0 / (e0 + e1), e1 / (e0 + e1)};
  };

  for (const auto& doc :
       {row({{0, 1.0}, {1, 1.0}}), row({{2, 3.0}}), row({{0, 2.0}, {2, 1.0}}),
        SparseRow{}}) {
    auto got = nb_posterior(nb, doc);
    auto want = posterior(doc);
    CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-12));
  }
}

TEST_CASE("nb likelihoods normalize and priors sum to one") {
  auto m = matrix(Scheme::RawFreq, 3,
                  {row({{0, 2.0}, {1, 1.0}}), row({{2, 4.0}}),
                   row({{0, 1.0}}), row({{1, 2.0}, {2, 1.0}})});
  std::vector<SentimentLabel> y = {P, N, P, N};
  NbModel nb = train_nb(m, y);
  CHECK(std::exp(nb.log_prior[0]) + std::exp(nb.log_prior[1]) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (int cls = 0; cls < 2; ++cls) {
    double sum = 0.0;
    for (uint32_t t = 0; t < 3; ++t) sum += std::exp(nb.loglik(cls, t));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("naive bayes argmax invariant under count scaling") {
  SplitMix64 rng(8);
  auto m = matrix(Scheme::RawFreq, 4,
                  {row({{0, 2.0}, {1, 1.0}}), row({{2, 2.0}}),
                   row({{0, 1.0}, {3, 1.0}}), row({{1, 2.0}, {2, 1.0}})});
  std::vector<SentimentLabel> y = {P, N, P, N};
  NbModel nb = train_nb(m, y);
  for (int trial = 0; trial < 100; ++trial) {
    SparseRow doc;
    for (uint32_t t = 0; t < 4; ++t) {
      if (rng.below(2)) {
        doc.idx.push_back(t);
        doc.val.push_back(static_cast<double>(1 + rng.below(4)));
      }
    }
    double k = static_cast<double>(2 + rng.below(5));
    SparseRow scaled = doc;
    for (auto& v : scaled.val) v *= k;
    CHECK(predict(nb, doc).label == predict(nb, scaled).label);
  }
}

TEST_CASE("logistic regression") {
  SUBCASE("separable 2-point set drives the loss toward 0") {
    auto m = matrix(Scheme::TFIDF, 1, {row({{0, 10.0}}), row({{0, -10.0}})});
    std::vector<SentimentLabel> y = {P, N};
    LinearParams params;
    params.epochs = 500;
    params.lr = 0.5;
    LinearModel lr = train_linear(m, y, LinearKind::LR, params);
    std::vector<int> y01 = {1, 0};
    double obj = lr_objective(lr.beta, m.rows, y01, 0.0);
    CHECK(std::abs(obj) < 0.05);  // log-likelihood -> 0 from below
    CHECK(predict(lr, m.rows[0]).label == P);
    CHECK(predict(lr, m.rows[1]).label == N);
  }

  SUBCASE("analytic gradient vs central finite differences") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
      const size_t dim = 10;
      std::vector<SparseRow> rows;
      std::vector<int> y01;
      for (int i = 0; i < 8; ++i) {
        SparseRow r;
        for (uint32_t j = 0; j < dim; ++j)
          if (rng.below(3)) {
            r.idx.push_back(j);
            r.val.push_back(rng.uniform(-2, 2));
          }
        rows.push_back(r);
        y01.push_back(static_cast<int>(rng.below(2)));
      }
      std::vector<double> beta(dim + 1);
      for (auto& b : beta) b = rng.uniform(-1, 1);
      double lambda = trial % 2 ? 0.3 : 0.0;  // penalized variant too
      std::vector<double> grad(dim + 1);
      lr_gradient(beta, rows, y01, lambda, grad);
      double max_rel = 0.0;
      const double h = 1e-6;
      for (size_t j = 0; j <= dim; ++j) {
        auto bp = beta, bm = beta;
        bp[j] += h;
        bm[j] -= h;
        double fd = (lr_objective(bp, rows, y01, lambda) -
                     lr_objective(bm, rows, y01, lambda)) /
                    (2 * h);
        double denom = std::max({std::abs(fd), std::abs(grad[j]), 1e-8});
        max_rel = std::max(max_rel, std::abs(fd - grad[j]) / denom);
      }
      CHECK(max_rel < 1e-5);
    }
  }

  SUBCASE("probability is monotone in the decision value; boundary at 0.5") {
    auto m = matrix(Scheme::TFIDF, 2,
                    {row({{0, 1.0}}), row({{1, 1.0}}), row({{0, 2.0}}),
                     row({{1, 2.0}})});
    std::vector<SentimentLabel> y = {P, N, P, N};
    LinearModel lr = train_linear(m, y, LinearKind::LR);
    SplitMix64 rng(3);
    double prev_z = -1e9, prev_p = -1.0;
    std::vector<std::pair<double, double>> zs;
    for (int i = 0; i < 50; ++i) {
      SparseRow r = row({{0, rng.uniform(-3, 3)}, {1, rng.uniform(-3, 3)}});
      zs.push_back({decision_value(lr, r), predict(lr, r).score});
    }
    std::sort(zs.begin(), zs.end());
    for (auto& [z, p] : zs) {
      CHECK(p >= prev_p - 1e-12);
      prev_p = p;
      if (z >= 0) CHECK(p >= 0.5);
      if (z < 0) CHECK(p < 0.5);
    }
    (void)prev_z;
  }
}

TEST_CASE("ridge: giant lambda collapses the non-intercept weights") {
  SplitMix64 rng(5);
  std::vector<SparseRow> rows;
  std::vector<SentimentLabel> y;
  for (int i = 0; i < 40; ++i) {
    // centered features
    rows.push_back(row({{0, rng.uniform(-1, 1)}, {1, rng.uniform(-1, 1)}}));
    y.push_back(rng.below(2) ? P : N);
  }
  DocTermMatrix m;
  m.scheme = Scheme::RawFreq;
  m.cols = 2;
  m.rows = rows;
  m.doc_ids.resize(rows.size());
  LinearParams params;
  params.lambda = 1e6;
  params.epochs = 200;
  LinearModel rc = train_linear(m, y, LinearKind::Ridge, params);
  for (size_t j = 1; j < rc.beta.size(); ++j)
    CHECK(std::abs(rc.beta[j]) < 1e-3);
}

TEST_CASE("svm") {
  SUBCASE("separable set reaches zero hinge within 500 epochs") {
    auto m = matrix(Scheme::TFIDF, 1, {row({{0, 10.0}}), row({{0, -10.0}})});
    std::vector<SentimentLabel> y = {P, N};
    LinearParams params;
    params.epochs = 500;
    params.lr = 1.0;
    params.C = 1.0;
    LinearModel svm = train_linear(m, y, LinearKind::SVM, params);
    std::vector<int> ypm1 = {1, -1};
    double hinge = 0.0;
    for (size_t i = 0; i < 2; ++i)
      hinge += std::max(0.0, 1.0 - ypm1[i] * decision_value(svm, m.rows[i]));
    CHECK(hinge == doctest::Approx(0.0).epsilon(1e-6));
  }

  SUBCASE("predictions invariant under positive rescaling of (w, b)") {
    LinearModel svm;
    svm.kind = LinearKind::SVM;
    svm.beta = {0.3, -1.2, 0.7};
    SplitMix64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      SparseRow r = row({{0, rng.uniform(-2, 2)}, {1, rng.uniform(-2, 2)}});
      LinearModel scaled = svm;
      double k = rng.uniform(0.1, 9.0);
      for (auto& b : scaled.beta) b *= k;
      CHECK(predict(svm, r).label == predict(scaled, r).label);
    }
  }

  SUBCASE("decision value exactly 0 resolves to Positive") {
    LinearModel svm;
    svm.kind = LinearKind::SVM;
    svm.beta = {0.0, 0.0};
    CHECK(predict(svm, row({{0, 3.0}})).label == P);
  }
}

TEST_CASE("softmax head") {
  SoftmaxHead head;
  head.dim = 3;
  head.classes = 2;
  head.w = {0.2, -0.4, 1.0, -0.3, 0.5, 0.1};
  head.b = {0.05, -0.02};

  SUBCASE("outputs sum to one") {
    SplitMix64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x = {rng.uniform(-5, 5), rng.uniform(-5, 5),
                               rng.uniform(-5, 5)};
      auto p = softmax_forward(head, x);
      CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(p[0] >= 0.0);
    }
  }

  SUBCASE("shifting all logits by a constant changes nothing") {
    std::vector<double> x = {1.0, -2.0, 0.5};
    auto p1 = softmax_forward(head, x);
    SoftmaxHead shifted = head;
    shifted.b[0] += 7.5;
    shifted.b[1] += 7.5;
    auto p2 = softmax_forward(shifted, x);
    CHECK(p1[0] == doctest::Approx(p2[0]).epsilon(1e-9));
    CHECK(p1[1] == doctest::Approx(p2[1]).epsilon(1e-9));
  }

  SUBCASE("gradient vs finite differences") {
    SplitMix64 rng(9);
    double max_rel = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2),
                               rng.uniform(-2, 2)};
      int label = static_cast<int>(rng.below(2));
      std::vector<double> gw(6, 0.0), gb(2, 0.0);
      softmax_loss_grad(head, x, label, gw, gb);
      const double h = 1e-6;
      for (size_t j = 0; j < 6; ++j) {
        SoftmaxHead hp = head, hm = head;
        hp.w[j] += h;
        hm.w[j] -= h;
        std::vector<double> t1(6, 0.0), t2(2, 0.0);
        double fd = (softmax_loss_grad(hp, x, label, t1, t2) -
                     softmax_loss_grad(hm, x, label, t1, t2)) /
                    (2 * h);
        double denom = std::max({std::abs(fd), std::abs(gw[j]), 1e-8});
        max_rel = std::max(max_rel, std::abs(fd - gw[j]) / denom);
      }
    }
    CHECK(max_rel < 1e-5);
  }

  SUBCASE("training separates a simple set deterministically") {
    std::vector<std::vector<double>> x;
    std::vector<SentimentLabel> y;
    SplitMix64 rng(31);
    for (int i = 0; i < 200; ++i) {
      bool pos = i % 2 == 0;
      x.push_back({pos ? 1.0 + rng.uniform(-0.2, 0.2)
                       : -1.0 + rng.uniform(-0.2, 0.2),
                   rng.uniform(-1, 1), rng.uniform(-1, 1)});
      y.push_back(pos ? P : N);
    }
    SoftmaxParams params;
    params.epochs = 30;
    SoftmaxHead trained = train_softmax_head(x, y, params);
    int correct = 0;
    for (size_t i = 0; i < x.size(); ++i)
      correct += predict(trained, x[i]).label == y[i];
    CHECK(correct >= 195);
    SoftmaxHead again = train_softmax_head(x, y, params);
    CHECK(again.w == trained.w);
  }
}

TEST_CASE("batch predict equals per-item predict") {
  auto m = matrix(Scheme::RawFreq, 3,
                  {row({{0, 1.0}}), row({{1, 2.0}}), row({{2, 1.0}}),
                   row({{0, 1.0}, {2, 2.0}})});
  std::vector<SentimentLabel> y = {P, N, P, N};
  NbModel nb = train_nb(m, y);
  std::vector<Prediction> batch;
  for (const auto& r : m.rows) batch.push_back(predict(nb, r));
  for (size_t i = 0; i < m.rows.size(); ++i) {
    Prediction single = predict(nb, m.rows[i]);
    CHECK(single.label == batch[i].label);
    CHECK(single.score == batch[i].score);
  }
}
