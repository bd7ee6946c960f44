#include <algorithm>
#include <cmath>
#include <numeric>

#include "edsa/classifiers.hpp"
#include "edsa/error.hpp"
#include "edsa/kernels.hpp"
#include "edsa/rng.hpp"

namespace edsa::classifiers {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// z = W x + V h_prev + b for one gate
void gate_preact(const std::vector<double>& w, const std::vector<double>& v,
                 const std::vector<double>& b, std::span<const double> x,
                 std::span<const double> h_prev, int n, int m,
                 std::vector<double>& z) {
  z.resize(n);
  kernels::matvec(w.data(), n, m, x.data(), z.data());
  for (int r = 0; r < n; ++r)
    z[r] += kernels::dot(v.data() + size_t(r) * n, h_prev.data(), n) + b[r];
}

}  // namespace

LstmTrace lstm_forward(const LstmModel& model,
                       std::span<const std::vector<double>> seq) {
  if (seq.empty())
    throw Error("classifiers.empty_sequence", "sequence length must be >= 1");
  int n = model.n, m = model.m;
  for (const auto& x : seq)
    if (static_cast<int>(x.size()) != m)
      throw Error("classifiers.dim_mismatch", "input vector dim != m");

  LstmTrace tr;
  size_t T = seq.size();
  tr.i.resize(T);
  tr.f.resize(T);
  tr.o.resize(T);
  tr.ctilde.resize(T);
  tr.c.resize(T);
  tr.h.resize(T);

  std::vector<double> h_prev(n, 0.0), c_prev(n, 0.0), z;
  for (size_t t = 0; t < T; ++t) {
    const auto& x = seq[t];
    auto& i_t = tr.i[t];
    auto& f_t = tr.f[t];
    auto& o_t = tr.o[t];
    auto& g_t = tr.ctilde[t];
    gate_preact(model.wi, model.vi, model.bi, x, h_prev, n, m, z);
    i_t.resize(n);
    for (int r = 0; r < n; ++r) i_t[r] = sigmoid(z[r]);
    gate_preact(model.wf, model.vf, model.bf, x, h_prev, n, m, z);
    f_t.resize(n);
    for (int r = 0; r < n; ++r) f_t[r] = sigmoid(z[r]);
    gate_preact(model.wo, model.vo, model.bo, x, h_prev, n, m, z);
    o_t.resize(n);
    for (int r = 0; r < n; ++r) o_t[r] = sigmoid(z[r]);
    gate_preact(model.wc, model.vc, model.bc, x, h_prev, n, m, z);
    g_t.resize(n);
    for (int r = 0; r < n; ++r) g_t[r] = std::tanh(z[r]);

    tr.c[t].resize(n);
    tr.h[t].resize(n);
    for (int r = 0; r < n; ++r) {
      tr.c[t][r] = i_t[r] * g_t[r] + f_t[r] * c_prev[r];
      tr.h[t][r] = o_t[r] * std::tanh(tr.c[t][r]);
    }
    h_prev = tr.h[t];
    c_prev = tr.c[t];
  }
  return tr;
}

void LstmGrads::init(const LstmModel& model) {
  size_t nm = static_cast<size_t>(model.n) * model.m;
  size_t nn = static_cast<size_t>(model.n) * model.n;
  wi.assign(nm, 0.0); wf.assign(nm, 0.0); wo.assign(nm, 0.0); wc.assign(nm, 0.0);
  vi.assign(nn, 0.0); vf.assign(nn, 0.0); vo.assign(nn, 0.0); vc.assign(nn, 0.0);
  bi.assign(model.n, 0.0); bf.assign(model.n, 0.0); bo.assign(model.n, 0.0);
  bc.assign(model.n, 0.0);
  head_w.assign(model.head.classes * model.head.dim, 0.0);
  head_b.assign(model.head.classes, 0.0);
}

namespace {

void acc(std::vector<double>& dst, const std::vector<double>& src, double s) {
  kernels::axpy(s, src.data(), dst.data(), dst.size());
}

}  // namespace

void LstmGrads::accumulate(const LstmGrads& g, double s) {
  acc(wi, g.wi, s); acc(wf, g.wf, s); acc(wo, g.wo, s); acc(wc, g.wc, s);
  acc(vi, g.vi, s); acc(vf, g.vf, s); acc(vo, g.vo, s); acc(vc, g.vc, s);
  acc(bi, g.bi, s); acc(bf, g.bf, s); acc(bo, g.bo, s); acc(bc, g.bc, s);
  acc(head_w, g.head_w, s);
  acc(head_b, g.head_b, s);
}

double LstmGrads::squared_norm() const {
  double s = 0.0;
  for (const auto* v : {&wi, &wf, &wo, &wc, &vi, &vf, &vo, &vc, &bi, &bf,
                        &bo, &bc, &head_w, &head_b})
    s += kernels::dot(v->data(), v->data(), v->size());
  return s;
}

void LstmGrads::scale_all(double s) {
  for (auto* v : {&wi, &wf, &wo, &wc, &vi, &vf, &vo, &vc, &bi, &bf, &bo, &bc,
                  &head_w, &head_b})
    kernels::scal(s, v->data(), v->size());
}

double lstm_loss_grad(const LstmModel& model,
                      std::span<const std::vector<double>> seq, int label,
                      LstmGrads& grads) {
  int n = model.n, m = model.m;
  LstmTrace tr = lstm_forward(model, seq);
  size_t T = seq.size();

  // head on h_T
  std::vector<double> p = softmax_forward(model.head, tr.h_last());
  double loss = -std::log(std::max(p[label], 1e-300));
  std::vector<double> dh(n, 0.0), dc(n, 0.0);
  for (size_t cls = 0; cls < model.head.classes; ++cls) {
    double d = p[cls] - (static_cast<int>(cls) == label ? 1.0 : 0.0);
    grads.head_b[cls] += d;
    kernels::axpy(d, tr.h_last().data(),
                  grads.head_w.data() + cls * model.head.dim, n);
    kernels::axpy(d, model.head.w.data() + cls * model.head.dim, dh.data(),
                  n);
  }

  std::vector<double> dzi(n), dzf(n), dzo(n), dzc(n), dh_prev(n), dc_prev(n);
  const std::vector<double> zero_h(n, 0.0);
  for (size_t t = T; t-- > 0;) {
    const auto& x = seq[t];
    const auto& i_t = tr.i[t];
    const auto& f_t = tr.f[t];
    const auto& o_t = tr.o[t];
    const auto& g_t = tr.ctilde[t];
    const auto& c_t = tr.c[t];
    const std::vector<double>* c_prev = t > 0 ? &tr.c[t - 1] : nullptr;
    const std::vector<double>* h_prev = t > 0 ? &tr.h[t - 1] : nullptr;

    for (int r = 0; r < n; ++r) {
      double tc = std::tanh(c_t[r]);
      double d_o = dh[r] * tc;
      dc[r] += dh[r] * o_t[r] * (1.0 - tc * tc);
      double d_i = dc[r] * g_t[r];
      double d_g = dc[r] * i_t[r];
      double d_f = dc[r] * (c_prev ? (*c_prev)[r] : 0.0);
      dc_prev[r] = dc[r] * f_t[r];
      dzi[r] = d_i * i_t[r] * (1.0 - i_t[r]);
      dzf[r] = d_f * f_t[r] * (1.0 - f_t[r]);
      dzo[r] = d_o * o_t[r] * (1.0 - o_t[r]);
      dzc[r] = d_g * (1.0 - g_t[r] * g_t[r]);
    }

    std::span<const double> hp = h_prev ? std::span<const double>(*h_prev)
                                        : std::span<const double>(zero_h);

    auto add_outer = [&](std::vector<double>& dw, std::vector<double>& dv,
                         std::vector<double>& db,
                         const std::vector<double>& dz) {
      for (int r = 0; r < n; ++r) {
        kernels::axpy(dz[r], x.data(), dw.data() + size_t(r) * m, m);
        kernels::axpy(dz[r], hp.data(), dv.data() + size_t(r) * n, n);
        db[r] += dz[r];
      }
    };
    add_outer(grads.wi, grads.vi, grads.bi, dzi);
    add_outer(grads.wf, grads.vf, grads.bf, dzf);
    add_outer(grads.wo, grads.vo, grads.bo, dzo);
    add_outer(grads.wc, grads.vc, grads.bc, dzc);

    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    kernels::matvec_t_acc(model.vi.data(), n, n, dzi.data(), dh_prev.data());
    kernels::matvec_t_acc(model.vf.data(), n, n, dzf.data(), dh_prev.data());
    kernels::matvec_t_acc(model.vo.data(), n, n, dzo.data(), dh_prev.data());
    kernels::matvec_t_acc(model.vc.data(), n, n, dzc.data(), dh_prev.data());
    dh = dh_prev;
    dc = dc_prev;
  }
  return loss;
}

namespace {

struct AdamState {
  std::vector<double> m, v;
  void init(size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
  }
};

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 AdamState& st, double lr, double t) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double bc1 = 1.0 - std::pow(b1, t);
  double bc2 = 1.0 - std::pow(b2, t);
  for (size_t i = 0; i < param.size(); ++i) {
    st.m[i] = b1 * st.m[i] + (1.0 - b1) * grad[i];
    st.v[i] = b2 * st.v[i] + (1.0 - b2) * grad[i] * grad[i];
    param[i] -= lr * (st.m[i] / bc1) / (std::sqrt(st.v[i] / bc2) + eps);
  }
}

}  // namespace

LstmModel train_lstm(std::span<const std::vector<std::vector<double>>> seqs,
                     std::span<const SentimentLabel> labels, int input_dim,
                     const LstmParams& params) {
  if (seqs.empty()) throw Error("classifiers.empty", "no training sequences");
  if (seqs.size() != labels.size())
    throw Error("classifiers.length_mismatch", "sequences / labels mismatch");
  std::vector<int> y = binary_labels(labels);

  int n = params.hidden, m = input_dim;
  LstmModel model;
  model.n = n;
  model.m = m;
  size_t nm = static_cast<size_t>(n) * m, nn = static_cast<size_t>(n) * n;
  SplitMix64 rng(derive_seed(params.seed, "lstm.init"));
  double r = 0.08;
  auto init_mat = [&](std::vector<double>& w, size_t len) {
    w.resize(len);
    for (auto& v : w) v = rng.uniform(-r, r);
  };
  init_mat(model.wi, nm); init_mat(model.wf, nm);
  init_mat(model.wo, nm); init_mat(model.wc, nm);
  init_mat(model.vi, nn); init_mat(model.vf, nn);
  init_mat(model.vo, nn); init_mat(model.vc, nn);
  model.bi.assign(n, 0.0);
  model.bf.assign(n, 1.0);  // open forget gate at start
  model.bo.assign(n, 0.0);
  model.bc.assign(n, 0.0);
  model.head.dim = n;
  model.head.classes = 2;
  model.head.w.assign(2 * static_cast<size_t>(n), 0.0);
  model.head.b.assign(2, 0.0);

  std::vector<std::pair<std::vector<double>*, AdamState>> adam;
  std::vector<std::vector<double>*> param_ptrs = {
      &model.wi, &model.wf, &model.wo, &model.wc, &model.vi, &model.vf,
      &model.vo, &model.vc, &model.bi, &model.bf, &model.bo, &model.bc,
      &model.head.w, &model.head.b};
  std::vector<AdamState> states(param_ptrs.size());
  for (size_t i = 0; i < param_ptrs.size(); ++i)
    states[i].init(param_ptrs[i]->size());

  SplitMix64 shuffle_rng(derive_seed(params.seed, "lstm.shuffle"));
  std::vector<uint32_t> order(seqs.size());
  std::iota(order.begin(), order.end(), 0);
  LstmGrads batch_grads, sample_grads;
  double adam_t = 0.0;

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(params.batch)) {
      size_t end = std::min(order.size(),
                            start + static_cast<size_t>(params.batch));
      batch_grads.init(model);
      for (size_t i = start; i < end; ++i) {
        sample_grads.init(model);
        epoch_loss += lstm_loss_grad(model, seqs[order[i]], y[order[i]],
                                     sample_grads);
        batch_grads.accumulate(sample_grads, 1.0);
      }
      batch_grads.scale_all(1.0 / static_cast<double>(end - start));
      double norm = std::sqrt(batch_grads.squared_norm());
      if (norm > params.clip) batch_grads.scale_all(params.clip / norm);

      adam_t += 1.0;
      const std::vector<double>* grad_ptrs[] = {
          &batch_grads.wi, &batch_grads.wf, &batch_grads.wo, &batch_grads.wc,
          &batch_grads.vi, &batch_grads.vf, &batch_grads.vo, &batch_grads.vc,
          &batch_grads.bi, &batch_grads.bf, &batch_grads.bo, &batch_grads.bc,
          &batch_grads.head_w, &batch_grads.head_b};
      for (size_t i = 0; i < param_ptrs.size(); ++i)
        adam_update(*param_ptrs[i], *grad_ptrs[i], states[i], params.lr,
                    adam_t);
    }
    epoch_loss /= static_cast<double>(seqs.size());
    if (!std::isfinite(epoch_loss))
      throw Error("classifiers.diverged", "LSTM training loss diverged");
    model.epoch_loss.push_back(epoch_loss);
  }
  return model;
}

Prediction predict(const LstmModel& model,
                   std::span<const std::vector<double>> seq) {
  LstmTrace tr = lstm_forward(model, seq);
  return predict(model.head, tr.h_last());
}

}  // namespace edsa::classifiers
