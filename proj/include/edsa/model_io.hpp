#pragma once

#include <string>
#include <string_view>

#include "edsa/cbow.hpp"
#include "edsa/classifiers.hpp"

// Versioned model containers: <prefix>.json manifest (kind, dims,
// hyperparams, seed, vocab-hash) + <prefix>.bin little-endian float32
// parameter blocks. Loading verifies the vocab hash when one is supplied.
namespace edsa::model_io {

void save_nb(const classifiers::NbModel& model, const std::string& prefix,
             std::string_view config_hash = {});
classifiers::NbModel load_nb(const std::string& prefix,
                             uint64_t expect_vocab_hash = 0);

void save_linear(const classifiers::LinearModel& model,
                 const std::string& prefix, std::string_view config_hash = {});
classifiers::LinearModel load_linear(const std::string& prefix,
                                     uint64_t expect_vocab_hash = 0);

void save_softmax(const classifiers::SoftmaxHead& head,
                  const std::string& prefix, std::string_view config_hash = {});
classifiers::SoftmaxHead load_softmax(const std::string& prefix);

void save_lstm(const classifiers::LstmModel& model, const std::string& prefix,
               std::string_view config_hash = {});
classifiers::LstmModel load_lstm(const std::string& prefix);

// Kind string from a manifest ("nb", "lr", "ridge", "svm", "softmax", "lstm").
std::string peek_kind(const std::string& prefix);

}  // namespace edsa::model_io
