#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edsa/preprocess.hpp"
#include "edsa/vectorize.hpp"

namespace edsa::vectorize {

struct CbowParams {
  int dim = 100;
  int window = 5;      // m tokens each side
  int epochs = 5;
  double lr = 0.025;   // linearly decayed
  int negatives = 5;   // k, unigram^0.75 noise
  uint32_t min_count = 1;
  uint64_t seed = 42;
};

struct CbowModel {
  int dim = 0;
  int window = 0;
  uint64_t seed = 0;
  Vocabulary vocab;
  std::vector<double> v_in;  // |V| x dim, input word matrix
  std::vector<double> u;     // |V| x dim, output word matrix
  std::vector<double> epoch_loss;

  const double* in_row(uint32_t id) const { return v_in.data() + size_t(id) * dim; }
  const double* out_row(uint32_t id) const { return u.data() + size_t(id) * dim; }
};

// Negative-sampling CBOW, single-threaded and deterministic for a fixed seed.
CbowModel train_cbow(std::span<const preprocess::TokenizedDoc> docs,
                     const CbowParams& params);

// Loss and full gradients of one negative-sampling step; the training loop
// routes through the same math. Used by the finite-difference check.
double cbow_loss_grad(std::span<const double> v_in, std::span<const double> u,
                      int dim, std::span<const uint32_t> context,
                      uint32_t target, std::span<const uint32_t> negatives,
                      std::span<double> grad_v_in, std::span<double> grad_u);

// Per-token vectors (unknown -> zero), truncated / zero-padded to max_len.
std::vector<std::vector<double>> embed_doc(const CbowModel& model,
                                           std::span<const std::string> tokens,
                                           size_t max_len);
// True-length sequence capped at max_len (training/prediction input).
std::vector<std::vector<double>> embed_doc_seq(
    const CbowModel& model, std::span<const std::string> tokens,
    size_t max_len);
// Mean of the per-token vectors over all tokens (empty doc -> zero vector).
std::vector<double> embed_doc_mean(const CbowModel& model,
                                   std::span<const std::string> tokens);

// JSON manifest (<prefix>.json) + little-endian float32 blocks (<prefix>.bin).
void save_cbow(const CbowModel& model, const std::string& prefix,
               std::string_view config_hash = {});
CbowModel load_cbow(const std::string& prefix);

}  // namespace edsa::vectorize
