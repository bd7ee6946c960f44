#include "edsa/cbow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "edsa/error.hpp"
#include "edsa/kernels.hpp"
#include "edsa/rng.hpp"
#include "json.hpp"

namespace edsa::vectorize {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One CBOW step against v_hat (mean of context rows). Returns the loss;
// fills d_vhat and the per-output-row coefficients g_j so callers can apply
// either an SGD update or full-matrix gradients with identical math.
struct StepSamples {
  std::vector<uint32_t> rows;   // target + negatives
  std::vector<double> labels;   // 1 for target, 0 for negatives
};

double ns_step(const double* u, int dim, const double* v_hat,
               const StepSamples& s, std::vector<double>& g,
               double* d_vhat) {
  std::fill(d_vhat, d_vhat + dim, 0.0);
  g.assign(s.rows.size(), 0.0);
  double loss = 0.0;
  for (size_t j = 0; j < s.rows.size(); ++j) {
    const double* u_row = u + size_t(s.rows[j]) * dim;
    double z = kernels::dot(u_row, v_hat, dim);
    double p = sigmoid(z);
    double label = s.labels[j];
    loss += label > 0.5 ? -std::log(std::max(p, 1e-300))
                        : -std::log(std::max(1.0 - p, 1e-300));
    g[j] = p - label;  // dL/dz
    kernels::axpy(g[j], u_row, d_vhat, dim);
  }
  return loss;
}

std::vector<double> unigram_cdf(std::span<const uint64_t> counts) {
  std::vector<double> cdf(counts.size());
  double acc = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    acc += std::pow(static_cast<double>(counts[i]), 0.75);
    cdf[i] = acc;
  }
  for (auto& v : cdf) v /= acc;
  return cdf;
}

uint32_t draw_from_cdf(const std::vector<double>& cdf, SplitMix64& rng) {
  double r = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
  size_t i = static_cast<size_t>(it - cdf.begin());
  return static_cast<uint32_t>(std::min(i, cdf.size() - 1));
}

}  // namespace

double cbow_loss_grad(std::span<const double> v_in, std::span<const double> u,
                      int dim, std::span<const uint32_t> context,
                      uint32_t target, std::span<const uint32_t> negatives,
                      std::span<double> grad_v_in, std::span<double> grad_u) {
  if (context.empty()) throw Error("cbow.no_context", "empty context");
  std::vector<double> v_hat(dim, 0.0);
  for (uint32_t c : context)
    kernels::axpy(1.0, v_in.data() + size_t(c) * dim, v_hat.data(), dim);
  kernels::scal(1.0 / static_cast<double>(context.size()), v_hat.data(), dim);

  StepSamples s;
  s.rows.push_back(target);
  s.labels.push_back(1.0);
  for (uint32_t n : negatives) {
    s.rows.push_back(n);
    s.labels.push_back(0.0);
  }
  std::vector<double> g;
  std::vector<double> d_vhat(dim);
  double loss = ns_step(u.data(), dim, v_hat.data(), s, g, d_vhat.data());

  std::fill(grad_v_in.begin(), grad_v_in.end(), 0.0);
  std::fill(grad_u.begin(), grad_u.end(), 0.0);
  for (size_t j = 0; j < s.rows.size(); ++j)
    kernels::axpy(g[j], v_hat.data(),
                  grad_u.data() + size_t(s.rows[j]) * dim, dim);
  double inv = 1.0 / static_cast<double>(context.size());
  for (uint32_t c : context)
    kernels::axpy(inv, d_vhat.data(), grad_v_in.data() + size_t(c) * dim, dim);
  return loss;
}

CbowModel train_cbow(std::span<const preprocess::TokenizedDoc> docs,
                     const CbowParams& params) {
  if (params.dim <= 0) throw Error("cbow.bad_dim", "dim must be positive");
  if (params.window <= 0)
    throw Error("cbow.bad_window", "window must be positive");
  if (docs.empty()) throw Error("cbow.empty_corpus", "no documents");

  CbowModel model;
  model.dim = params.dim;
  model.window = params.window;
  model.seed = params.seed;
  model.vocab = Vocabulary::build(docs, params.min_count);
  size_t vsize = model.vocab.size();
  if (vsize == 0) throw Error("cbow.empty_corpus", "empty vocabulary");
  int dim = params.dim;

  // Token-id streams and unigram counts.
  std::vector<std::vector<uint32_t>> streams;
  streams.reserve(docs.size());
  std::vector<uint64_t> counts(vsize, 0);
  uint64_t total_positions = 0;
  for (const auto& d : docs) {
    std::vector<uint32_t> ids;
    ids.reserve(d.tokens.size());
    for (const auto& t : d.tokens) {
      int64_t id = model.vocab.id_of(t);
      if (id >= 0) {
        ids.push_back(static_cast<uint32_t>(id));
        ++counts[static_cast<size_t>(id)];
      }
    }
    total_positions += ids.size();
    streams.push_back(std::move(ids));
  }
  std::vector<double> cdf = unigram_cdf(counts);

  SplitMix64 init_rng(derive_seed(params.seed, "cbow.init"));
  model.v_in.resize(vsize * dim);
  model.u.assign(vsize * dim, 0.0);
  double half = 0.5 / dim;
  for (auto& w : model.v_in) w = init_rng.uniform(-half, half);

  SplitMix64 rng(derive_seed(params.seed, "cbow.train"));
  std::vector<double> v_hat(dim), d_vhat(dim), g;
  StepSamples s;
  uint64_t processed = 0;
  uint64_t planned = total_positions * static_cast<uint64_t>(params.epochs);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    double epoch_loss = 0.0;
    uint64_t epoch_samples = 0;
    for (const auto& ids : streams) {
      int len = static_cast<int>(ids.size());
      for (int pos = 0; pos < len; ++pos, ++processed) {
        int lo = std::max(0, pos - params.window);
        int hi = std::min(len - 1, pos + params.window);
        int ctx = hi - lo;  // excluding the target itself
        if (ctx <= 0) continue;

        double lr = params.lr *
                    std::max(1e-4, 1.0 - static_cast<double>(processed) /
                                             static_cast<double>(planned));
        std::fill(v_hat.begin(), v_hat.end(), 0.0);
        for (int j = lo; j <= hi; ++j) {
          if (j == pos) continue;
          kernels::axpy(1.0, model.in_row(ids[j]), v_hat.data(), dim);
        }
        kernels::scal(1.0 / ctx, v_hat.data(), dim);

        uint32_t target = ids[pos];
        s.rows.clear();
        s.labels.clear();
        s.rows.push_back(target);
        s.labels.push_back(1.0);
        for (int k = 0; k < params.negatives; ++k) {
          uint32_t neg = target;
          for (int tries = 0; tries < 10 && neg == target; ++tries)
            neg = draw_from_cdf(cdf, rng);
          if (neg == target) continue;
          s.rows.push_back(neg);
          s.labels.push_back(0.0);
        }

        epoch_loss += ns_step(model.u.data(), dim, v_hat.data(), s, g,
                              d_vhat.data());
        ++epoch_samples;

        for (size_t j = 0; j < s.rows.size(); ++j)
          kernels::axpy(-lr * g[j], v_hat.data(),
                        model.u.data() + size_t(s.rows[j]) * dim, dim);
        double scale = -lr / ctx;
        for (int j = lo; j <= hi; ++j) {
          if (j == pos) continue;
          kernels::axpy(scale, d_vhat.data(),
                        model.v_in.data() + size_t(ids[j]) * dim, dim);
        }
      }
    }
    model.epoch_loss.push_back(
        epoch_samples ? epoch_loss / static_cast<double>(epoch_samples) : 0.0);
  }
  return model;
}

std::vector<std::vector<double>> embed_doc(const CbowModel& model,
                                           std::span<const std::string> tokens,
                                           size_t max_len) {
  std::vector<std::vector<double>> out;
  out.reserve(max_len);
  for (size_t i = 0; i < max_len; ++i) {
    std::vector<double> v(model.dim, 0.0);
    if (i < tokens.size()) {
      int64_t id = model.vocab.id_of(tokens[i]);
      if (id >= 0) {
        const double* row = model.in_row(static_cast<uint32_t>(id));
        std::copy(row, row + model.dim, v.begin());
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<double>> embed_doc_seq(
    const CbowModel& model, std::span<const std::string> tokens,
    size_t max_len) {
  size_t len = std::min(tokens.size(), max_len);
  if (len == 0) return {std::vector<double>(model.dim, 0.0)};
  return embed_doc(model, tokens.subspan(0, len), len);
}

std::vector<double> embed_doc_mean(const CbowModel& model,
                                   std::span<const std::string> tokens) {
  std::vector<double> mean(model.dim, 0.0);
  if (tokens.empty()) return mean;
  for (const auto& t : tokens) {
    int64_t id = model.vocab.id_of(t);
    if (id >= 0)
      kernels::axpy(1.0, model.in_row(static_cast<uint32_t>(id)), mean.data(),
                    model.dim);
  }
  kernels::scal(1.0 / static_cast<double>(tokens.size()), mean.data(),
                model.dim);
  return mean;
}

namespace {

void write_f32_block(std::ofstream& out, std::span<const double> values) {
  std::vector<float> buf(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    buf[i] = static_cast<float>(values[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

void read_f32_block(std::ifstream& in, std::span<double> values) {
  std::vector<float> buf(values.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw Error("cbow.truncated", "parameter block truncated");
  for (size_t i = 0; i < values.size(); ++i)
    values[i] = static_cast<double>(buf[i]);
}

}  // namespace

void save_cbow(const CbowModel& model, const std::string& prefix,
               std::string_view config_hash) {
  nlohmann::ordered_json j;
  j["format"] = "edsa-cbow-v1";
  if (!config_hash.empty()) j["config_hash"] = std::string(config_hash);
  j["dim"] = model.dim;
  j["window"] = model.window;
  j["seed"] = model.seed;
  j["vocab"] = model.vocab.terms;
  j["doc_freq"] = model.vocab.doc_freq;
  j["total_docs"] = model.vocab.total_docs;
  std::ofstream mj(prefix + ".json", std::ios::binary);
  if (!mj) throw Error("cbow.io", "cannot write " + prefix + ".json");
  mj << j.dump(2) << '\n';

  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw Error("cbow.io", "cannot write " + prefix + ".bin");
  write_f32_block(bin, model.v_in);
  write_f32_block(bin, model.u);
}

CbowModel load_cbow(const std::string& prefix) {
  std::ifstream mj(prefix + ".json", std::ios::binary);
  if (!mj) throw Error("cbow.io", "cannot read " + prefix + ".json");
  nlohmann::json j = nlohmann::json::parse(mj);
  if (j.value("format", "") != "edsa-cbow-v1")
    throw Error("cbow.bad_format", "not a cbow model manifest");

  CbowModel model;
  model.dim = j.at("dim").get<int>();
  model.window = j.at("window").get<int>();
  model.seed = j.at("seed").get<uint64_t>();
  auto terms = j.at("vocab").get<std::vector<std::string>>();
  model.vocab.doc_freq = j.at("doc_freq").get<std::vector<uint32_t>>();
  model.vocab.total_docs = j.at("total_docs").get<uint64_t>();
  for (size_t i = 0; i < terms.size(); ++i)
    model.vocab.index.emplace(terms[i], static_cast<uint32_t>(i));
  model.vocab.terms = std::move(terms);

  size_t n = model.vocab.size() * static_cast<size_t>(model.dim);
  model.v_in.resize(n);
  model.u.resize(n);
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw Error("cbow.io", "cannot read " + prefix + ".bin");
  read_f32_block(bin, model.v_in);
  read_f32_block(bin, model.u);
  return model;
}

}  // namespace edsa::vectorize
