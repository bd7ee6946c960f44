#include "edsa/model_io.hpp"

#include <cstdio>
#include <fstream>

#include "edsa/error.hpp"
#include "json.hpp"

namespace edsa::model_io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string hash_hex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

uint64_t hash_from_hex(const std::string& s) {
  return std::strtoull(s.c_str(), nullptr, 16);
}

void write_manifest(const std::string& prefix, ordered_json j,
                    std::string_view config_hash = {}) {
  if (!config_hash.empty()) j["config_hash"] = std::string(config_hash);
  std::ofstream out(prefix + ".json", std::ios::binary);
  if (!out) throw Error("model.io", "cannot write " + prefix + ".json");
  out << j.dump(2) << '\n';
}

json read_manifest(const std::string& prefix) {
  std::ifstream in(prefix + ".json", std::ios::binary);
  if (!in) throw Error("model.io", "cannot read " + prefix + ".json");
  json j = json::parse(in);
  if (j.value("format", "") != "edsa-model-v1")
    throw Error("model.bad_format", prefix + " is not a model container");
  return j;
}

class BlockWriter {
 public:
  explicit BlockWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("model.io", "cannot write " + path);
  }
  void write(std::span<const double> values) {
    std::vector<float> buf(values.size());
    for (size_t i = 0; i < values.size(); ++i)
      buf[i] = static_cast<float>(values[i]);
    out_.write(reinterpret_cast<const char*>(buf.data()),
               static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }

 private:
  std::ofstream out_;
};

class BlockReader {
 public:
  explicit BlockReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw Error("model.io", "cannot read " + path);
  }
  void read(std::vector<double>& values, size_t n) {
    values.resize(n);
    std::vector<float> buf(n);
    in_.read(reinterpret_cast<char*>(buf.data()),
             static_cast<std::streamsize>(n * sizeof(float)));
    if (!in_) throw Error("model.truncated", "parameter block truncated");
    for (size_t i = 0; i < n; ++i) values[i] = static_cast<double>(buf[i]);
  }

 private:
  std::ifstream in_;
};

void check_vocab_hash(const json& j, uint64_t expect, const std::string& prefix) {
  if (expect == 0) return;
  uint64_t have = hash_from_hex(j.value("vocab_hash", "0"));
  if (have != expect)
    throw Error("model.vocab_mismatch",
                prefix + ": model was trained against a different vocabulary");
}

}  // namespace

std::string peek_kind(const std::string& prefix) {
  return read_manifest(prefix).value("kind", "");
}

void save_nb(const classifiers::NbModel& model, const std::string& prefix,
             std::string_view config_hash) {
  ordered_json j;
  j["format"] = "edsa-model-v1";
  j["kind"] = "nb";
  j["vocab_size"] = model.vocab_size;
  j["vocab_hash"] = hash_hex(model.vocab_hash);
  write_manifest(prefix, std::move(j), config_hash);
  BlockWriter bw(prefix + ".bin");
  bw.write(model.log_prior);
  bw.write(model.log_lik);
}

classifiers::NbModel load_nb(const std::string& prefix,
                             uint64_t expect_vocab_hash) {
  json j = read_manifest(prefix);
  if (j.value("kind", "") != "nb")
    throw Error("model.bad_kind", prefix + " is not an NB model");
  check_vocab_hash(j, expect_vocab_hash, prefix);
  classifiers::NbModel model;
  model.vocab_size = j.at("vocab_size").get<size_t>();
  model.vocab_hash = hash_from_hex(j.value("vocab_hash", "0"));
  BlockReader br(prefix + ".bin");
  br.read(model.log_prior, 2);
  br.read(model.log_lik, 2 * model.vocab_size);
  return model;
}

void save_linear(const classifiers::LinearModel& model,
                 const std::string& prefix, std::string_view config_hash) {
  ordered_json j;
  j["format"] = "edsa-model-v1";
  j["kind"] = std::string(classifiers::linear_kind_name(model.kind));
  j["dim"] = model.beta.size();
  j["vocab_hash"] = hash_hex(model.vocab_hash);
  write_manifest(prefix, std::move(j), config_hash);
  BlockWriter bw(prefix + ".bin");
  bw.write(model.beta);
}

classifiers::LinearModel load_linear(const std::string& prefix,
                                     uint64_t expect_vocab_hash) {
  json j = read_manifest(prefix);
  std::string kind = j.value("kind", "");
  classifiers::LinearModel model;
  if (kind == "lr") model.kind = classifiers::LinearKind::LR;
  else if (kind == "ridge") model.kind = classifiers::LinearKind::Ridge;
  else if (kind == "svm") model.kind = classifiers::LinearKind::SVM;
  else throw Error("model.bad_kind", prefix + " is not a linear model");
  check_vocab_hash(j, expect_vocab_hash, prefix);
  model.vocab_hash = hash_from_hex(j.value("vocab_hash", "0"));
  BlockReader br(prefix + ".bin");
  br.read(model.beta, j.at("dim").get<size_t>());
  return model;
}

void save_softmax(const classifiers::SoftmaxHead& head,
                  const std::string& prefix, std::string_view config_hash) {
  ordered_json j;
  j["format"] = "edsa-model-v1";
  j["kind"] = "softmax";
  j["dim"] = head.dim;
  j["classes"] = head.classes;
  write_manifest(prefix, std::move(j), config_hash);
  BlockWriter bw(prefix + ".bin");
  bw.write(head.w);
  bw.write(head.b);
}

classifiers::SoftmaxHead load_softmax(const std::string& prefix) {
  json j = read_manifest(prefix);
  if (j.value("kind", "") != "softmax")
    throw Error("model.bad_kind", prefix + " is not a softmax head");
  classifiers::SoftmaxHead head;
  head.dim = j.at("dim").get<size_t>();
  head.classes = j.at("classes").get<size_t>();
  BlockReader br(prefix + ".bin");
  br.read(head.w, head.classes * head.dim);
  br.read(head.b, head.classes);
  return head;
}

void save_lstm(const classifiers::LstmModel& model, const std::string& prefix,
               std::string_view config_hash) {
  ordered_json j;
  j["format"] = "edsa-model-v1";
  j["kind"] = "lstm";
  j["hidden"] = model.n;
  j["input"] = model.m;
  write_manifest(prefix, std::move(j), config_hash);
  BlockWriter bw(prefix + ".bin");
  for (const auto* block :
       {&model.wi, &model.wf, &model.wo, &model.wc, &model.vi, &model.vf,
        &model.vo, &model.vc, &model.bi, &model.bf, &model.bo, &model.bc,
        &model.head.w, &model.head.b})
    bw.write(*block);
}

classifiers::LstmModel load_lstm(const std::string& prefix) {
  json j = read_manifest(prefix);
  if (j.value("kind", "") != "lstm")
    throw Error("model.bad_kind", prefix + " is not an LSTM model");
  classifiers::LstmModel model;
  model.n = j.at("hidden").get<int>();
  model.m = j.at("input").get<int>();
  size_t nm = static_cast<size_t>(model.n) * model.m;
  size_t nn = static_cast<size_t>(model.n) * model.n;
  size_t nb = static_cast<size_t>(model.n);
  model.head.dim = nb;
  model.head.classes = 2;
  BlockReader br(prefix + ".bin");
  for (auto [block, len] : std::initializer_list<
           std::pair<std::vector<double>*, size_t>>{
           {&model.wi, nm}, {&model.wf, nm}, {&model.wo, nm}, {&model.wc, nm},
           {&model.vi, nn}, {&model.vf, nn}, {&model.vo, nn}, {&model.vc, nn},
           {&model.bi, nb}, {&model.bf, nb}, {&model.bo, nb}, {&model.bc, nb},
           {&model.head.w, 2 * nb}, {&model.head.b, 2}})
    br.read(*block, len);
  return model;
}

}  // namespace edsa::model_io
