// edsa: batch CLI for the event-detection + sentiment-ensemble pipeline.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "edsa/cbow.hpp"
#include "edsa/classifiers.hpp"
#include "edsa/config.hpp"
#include "edsa/corpus.hpp"
#include "edsa/embeddings.hpp"
#include "edsa/ensemble.hpp"
#include "edsa/error.hpp"
#include "edsa/evaluation.hpp"
#include "edsa/events.hpp"
#include "edsa/model_io.hpp"
#include "edsa/preprocess.hpp"
#include "edsa/synth.hpp"
#include "edsa/vectorize.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace edsa;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Cli {
  config::Config cfg;
  std::string out;
  int threads = 1;
  uint64_t seed = 42;
  std::string dataset = "c1";
  std::string pipeline = "sct";
  std::string method = "all";
  std::string model = "nb";
  std::string models = "nb,lr,rc,svm";
  std::string embeddings_path;
  int top = 50;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

void write_file(const std::string& path, const std::string& content) {
  if (auto dir = fs::path(path).parent_path(); !dir.empty())
    fs::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cli.io", "cannot write " + path);
  out << content;
}

void write_manifest(const Cli& cli, const std::string& command,
                    const std::string& artifact) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - cli.t0)
                .count();
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = cli.cfg.hash();
  j["seed"] = cli.seed;
  j["version"] = kVersion;
  j["wall_time_ms"] = ms;
  write_file(artifact + ".manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// dataset resolution

std::string corpus_path(const Cli& cli) {
  std::string p = cli.cfg.get_str("corpus", "");
  if (!p.empty()) return p;
  std::string dir = cli.cfg.get_str("data_dir", "");
  if (dir.empty()) {
    if (const char* env = std::getenv("EDSA_DATA_DIR")) dir = env;
  }
  if (!dir.empty()) {
    for (const char* name : {"sentiment140.csv", "training.1600000.csv",
                             "corpus.csv"}) {
      fs::path cand = fs::path(dir) / name;
      if (fs::exists(cand)) return cand.string();
    }
  }
  throw Error("cli.no_corpus",
              "no corpus configured; set corpus=, data_dir= or EDSA_DATA_DIR");
}

corpus::Corpus resolve_corpus(const Cli& cli,
                              corpus::ParseReport* report = nullptr) {
  std::optional<size_t> limit;
  if (int64_t l = cli.cfg.get_int("limit", 0); l > 0) limit = l;

  std::string ds = cli.dataset;
  if (ds != "c1" && ds != "c2" && ds != "c3")
    return corpus::parse_csv(ds, report, limit);
  corpus::Corpus full = corpus::parse_csv(corpus_path(cli), report, limit);
  size_t n = full.size();
  std::vector<size_t> sizes = {std::min<size_t>(20000, n),
                               std::min<size_t>(500000, n), n};
  auto subsets = corpus::stratified_subsets(full, sizes, cli.seed);
  if (ds == "c1") return std::move(subsets[0]);
  if (ds == "c2") return std::move(subsets[1]);
  return std::move(subsets[2]);
}

preprocess::PipelineSpec pipeline_spec(const Cli& cli,
                                       const std::string& name) {
  auto p = preprocess::pipeline_from_name(name);
  if (!p) throw Error("cli.bad_pipeline", "unknown pipeline '" + name + "'");
  return preprocess::PipelineSpec::resolve(
      *p, cli.cfg.get_bool("sfe_lemma", true));
}

// ---------------------------------------------------------------------------
// model construction shared by train / evaluate / ensemble

struct TrainedModel {
  std::string name;  // nb, lr, rc, svm, lstm, softmax
  preprocess::Pipeline satp = preprocess::Pipeline::SCT;
  vectorize::Scheme scheme = vectorize::Scheme::RawFreq;

  std::optional<classifiers::NbModel> nb;
  std::optional<classifiers::LinearModel> linear;
  std::optional<classifiers::SoftmaxHead> softmax;
  std::optional<classifiers::LstmModel> lstm;
  std::shared_ptr<vectorize::Vocabulary> vocab;
  std::shared_ptr<vectorize::CbowModel> cbow;
  std::shared_ptr<vectorize::ExternalEmbeddings> ext;
  int lstm_max_len = 30;
};

vectorize::Scheme scheme_for(const std::string& model) {
  if (model == "lr" || model == "svm") return vectorize::Scheme::TFIDF;
  return vectorize::Scheme::RawFreq;  // nb, rc per the experiment table
}

classifiers::LinearParams linear_params(const Cli& cli) {
  classifiers::LinearParams p;
  p.lr = cli.cfg.get_double("linear.lr", p.lr);
  p.epochs = static_cast<int>(cli.cfg.get_int("linear.epochs", p.epochs));
  p.lambda = cli.cfg.get_double("linear.lambda", p.lambda);
  p.C = cli.cfg.get_double("linear.c", p.C);
  return p;
}

vectorize::CbowParams cbow_params(const Cli& cli) {
  vectorize::CbowParams p;
  p.dim = static_cast<int>(cli.cfg.get_int("cbow.dim", p.dim));
  p.window = static_cast<int>(cli.cfg.get_int("cbow.window", p.window));
  p.epochs = static_cast<int>(cli.cfg.get_int("cbow.epochs", p.epochs));
  p.lr = cli.cfg.get_double("cbow.lr", p.lr);
  p.negatives =
      static_cast<int>(cli.cfg.get_int("cbow.negatives", p.negatives));
  p.seed = derive_seed(cli.seed, "cbow");
  return p;
}

classifiers::LstmParams lstm_params(const Cli& cli) {
  classifiers::LstmParams p;
  p.hidden = static_cast<int>(cli.cfg.get_int("lstm.hidden", p.hidden));
  p.max_len = static_cast<int>(cli.cfg.get_int("lstm.max_len", p.max_len));
  p.batch = static_cast<int>(cli.cfg.get_int("lstm.batch", p.batch));
  p.lr = cli.cfg.get_double("lstm.lr", p.lr);
  p.epochs = static_cast<int>(cli.cfg.get_int("lstm.epochs", p.epochs));
  p.clip = cli.cfg.get_double("lstm.clip", p.clip);
  p.seed = derive_seed(cli.seed, "lstm");
  return p;
}

classifiers::SoftmaxParams softmax_params(const Cli& cli) {
  classifiers::SoftmaxParams p;
  p.lr = cli.cfg.get_double("softmax.lr", p.lr);
  p.epochs = static_cast<int>(cli.cfg.get_int("softmax.epochs", p.epochs));
  p.batch = static_cast<int>(cli.cfg.get_int("softmax.batch", p.batch));
  p.seed = derive_seed(cli.seed, "softmax");
  return p;
}

TrainedModel train_one(const Cli& cli, const std::string& name,
                       const corpus::Corpus& train_corpus,
                       preprocess::Pipeline satp, bool use_model_dir = false) {
  TrainedModel tm;
  tm.name = name;
  tm.satp = satp;
  auto spec = preprocess::PipelineSpec::resolve(
      satp, cli.cfg.get_bool("sfe_lemma", true));
  std::vector<corpus::SentimentLabel> labels;
  for (const auto& t : train_corpus.tweets) labels.push_back(*t.label);

  if (name == "nb" || name == "lr" || name == "rc" || name == "svm") {
    auto docs = preprocess::apply_pipeline(train_corpus, spec);
    tm.scheme = scheme_for(name);
    auto [vocab, matrix] = vectorize::build_matrix(
        docs, tm.scheme,
        static_cast<uint32_t>(cli.cfg.get_int("min_count", 0)));
    tm.vocab = std::make_shared<vectorize::Vocabulary>(std::move(vocab));
    uint64_t vh = tm.vocab->hash();

    // model_dir caches the BoW models; the saved container is the source of
    // truth so that first runs and cache hits predict identically
    std::string cache;
    if (use_model_dir) {
      std::string dir = cli.cfg.get_str("model_dir", "");
      if (!dir.empty()) {
        fs::create_directories(dir);
        cache = (fs::path(dir) / name).string();
      }
    }
    bool cached = !cache.empty() && fs::exists(cache + ".json");
    if (name == "nb") {
      if (!cached) {
        classifiers::NbModel fresh = classifiers::train_nb(matrix, labels, vh);
        if (!cache.empty()) model_io::save_nb(fresh, cache, cli.cfg.hash());
      }
      tm.nb = cache.empty() ? classifiers::train_nb(matrix, labels, vh)
                            : model_io::load_nb(cache, vh);
    } else {
      classifiers::LinearKind kind = name == "lr"
                                         ? classifiers::LinearKind::LR
                                     : name == "rc"
                                         ? classifiers::LinearKind::Ridge
                                         : classifiers::LinearKind::SVM;
      if (!cached) {
        classifiers::LinearModel fresh = classifiers::train_linear(
            matrix, labels, kind, linear_params(cli), vh);
        if (!cache.empty())
          model_io::save_linear(fresh, cache, cli.cfg.hash());
      }
      tm.linear = cache.empty()
                      ? classifiers::train_linear(matrix, labels, kind,
                                                  linear_params(cli), vh)
                      : model_io::load_linear(cache, vh);
    }
  } else if (name == "lstm") {
    auto docs = preprocess::apply_pipeline(train_corpus, spec);
    auto cp = cbow_params(cli);
    tm.cbow = std::make_shared<vectorize::CbowModel>(
        vectorize::train_cbow(docs, cp));
    auto lp = lstm_params(cli);
    tm.lstm_max_len = lp.max_len;
    std::vector<std::vector<std::vector<double>>> seqs;
    seqs.reserve(docs.size());
    for (const auto& d : docs)
      seqs.push_back(vectorize::embed_doc_seq(*tm.cbow, d.tokens, lp.max_len));
    tm.lstm = classifiers::train_lstm(seqs, labels, cp.dim, lp);
  } else if (name == "softmax") {
    if (cli.embeddings_path.empty() && !cli.cfg.has("embeddings"))
      throw Error("cli.no_embeddings",
                  "softmax model needs --embeddings or embeddings=");
    std::string path = cli.embeddings_path.empty()
                           ? cli.cfg.get_str("embeddings", "")
                           : cli.embeddings_path;
    tm.ext = std::make_shared<vectorize::ExternalEmbeddings>(
        vectorize::load_embeddings(path));
    std::vector<std::vector<double>> x;
    x.reserve(train_corpus.size());
    for (const auto& t : train_corpus.tweets) {
      const auto* v = tm.ext->find(t.id);
      if (!v)
        throw Error("cli.missing_embedding",
                    "no embedding for tweet " + std::to_string(t.id));
      x.push_back(*v);
    }
    tm.softmax = classifiers::train_softmax_head(x, labels,
                                                 softmax_params(cli));
  } else {
    throw Error("cli.bad_model", "unknown model '" + name + "'");
  }
  return tm;
}

ensemble::SentimentPredictor make_predictor(const TrainedModel& tm) {
  ensemble::SentimentPredictor p;
  p.name = tm.name;
  p.satp = tm.satp;
  if (tm.nb) {
    auto model = *tm.nb;
    auto vocab = tm.vocab;
    p.predict = [model, vocab](const std::vector<std::string>& tokens,
                               const corpus::Tweet&) {
      return classifiers::predict(
          model,
          vectorize::vectorize_doc(*vocab, tokens, vectorize::Scheme::RawFreq));
    };
  } else if (tm.linear) {
    auto model = *tm.linear;
    auto vocab = tm.vocab;
    auto scheme = tm.scheme;
    p.predict = [model, vocab, scheme](const std::vector<std::string>& tokens,
                                       const corpus::Tweet&) {
      return classifiers::predict(
          model, vectorize::vectorize_doc(*vocab, tokens, scheme));
    };
  } else if (tm.lstm) {
    auto model = std::make_shared<classifiers::LstmModel>(*tm.lstm);
    auto cbow = tm.cbow;
    int max_len = tm.lstm_max_len;
    p.predict = [model, cbow, max_len](const std::vector<std::string>& tokens,
                                       const corpus::Tweet&) {
      auto seq = vectorize::embed_doc_seq(*cbow, tokens, max_len);
      return classifiers::predict(*model, seq);
    };
  } else if (tm.softmax) {
    auto model = *tm.softmax;
    auto ext = tm.ext;
    p.predict = [model, ext](const std::vector<std::string>&,
                             const corpus::Tweet& tweet) {
      const auto* v = ext->find(tweet.id);
      if (!v)
        throw Error("cli.missing_embedding",
                    "no embedding for tweet " + std::to_string(tweet.id));
      return classifiers::predict(model, *v);
    };
  }
  return p;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_ingest(Cli& cli) {
  corpus::ParseReport rep;
  corpus::Corpus c = resolve_corpus(cli, &rep);
  std::ostringstream ss;
  corpus::dump_ndjson(c, ss, cli.cfg.hash());
  std::string out = cli.out.empty() ? "corpus.ndjson" : cli.out;
  write_file(out, ss.str());
  write_manifest(cli, "ingest", out);
  std::cout << "ingest: " << c.size() << " tweets (" << rep.malformed
            << " malformed rows skipped) -> " << out << "\n";
  return 0;
}

int cmd_preprocess(Cli& cli, const std::string& in_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw Error("cli.io", "cannot open " + in_path);
  corpus::Corpus c = corpus::load_ndjson(in);
  auto spec = pipeline_spec(cli, cli.pipeline);
  std::ostringstream ss;
  {
    nlohmann::ordered_json meta;
    meta["_meta"] = {{"config_hash", cli.cfg.hash()}};
    ss << meta.dump() << '\n';
  }
  for (const auto& t : c.tweets) {
    auto doc = preprocess::apply_pipeline(t, spec);
    nlohmann::ordered_json j;
    j["id"] = doc.tweet_id;
    j["tokens"] = doc.tokens;
    ss << j.dump() << '\n';
  }
  std::string out = cli.out.empty() ? "tokens.ndjson" : cli.out;
  write_file(out, ss.str());
  write_manifest(cli, "preprocess", out);
  std::cout << "preprocess: " << c.size() << " docs -> " << out << "\n";
  return 0;
}

int cmd_vectorize(Cli& cli, const std::string& what) {
  corpus::Corpus c = resolve_corpus(cli);
  auto spec = pipeline_spec(cli, cli.pipeline);
  auto docs = preprocess::apply_pipeline(c, spec);
  std::string out = cli.out.empty() ? "vectors" : cli.out;

  if (what == "cbow") {
    auto model = vectorize::train_cbow(docs, cbow_params(cli));
    if (auto dir = fs::path(out).parent_path(); !dir.empty())
      fs::create_directories(dir);
    vectorize::save_cbow(model, out, cli.cfg.hash());
    write_manifest(cli, "vectorize", out);
    std::cout << "vectorize: cbow dim " << model.dim << ", |V| "
              << model.vocab.size() << " -> " << out << ".{json,bin}\n";
    return 0;
  }

  vectorize::Scheme scheme = vectorize::Scheme::TFIDF;
  if (what == "rawfreq") scheme = vectorize::Scheme::RawFreq;
  else if (what == "tf") scheme = vectorize::Scheme::TF;
  else if (what != "tfidf")
    throw Error("cli.bad_scheme", "scheme must be rawfreq|tf|tfidf|cbow");
  auto [vocab, matrix] = vectorize::build_matrix(
      docs, scheme, static_cast<uint32_t>(cli.cfg.get_int("min_count", 0)));

  // vocab manifest + CSR blocks
  nlohmann::ordered_json vj;
  vj["config_hash"] = cli.cfg.hash();
  vj["scheme"] = std::string(vectorize::scheme_name(scheme));
  vj["terms"] = vocab.terms;
  vj["doc_freq"] = vocab.doc_freq;
  vj["total_docs"] = vocab.total_docs;
  write_file(out + ".vocab.json", vj.dump() + "\n");
  std::ofstream bin(out + ".dtm", std::ios::binary);
  if (!bin) throw Error("cli.io", "cannot write " + out + ".dtm");
  auto w64 = [&](uint64_t v) {
    bin.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  bin.write("EDSADTM1", 8);
  w64(matrix.rows.size());
  w64(matrix.cols);
  for (size_t r = 0; r < matrix.rows.size(); ++r) {
    w64(matrix.doc_ids[r]);
    w64(matrix.rows[r].nnz());
    for (size_t k = 0; k < matrix.rows[r].nnz(); ++k) {
      uint32_t idx = matrix.rows[r].idx[k];
      float val = static_cast<float>(matrix.rows[r].val[k]);
      bin.write(reinterpret_cast<const char*>(&idx), sizeof(idx));
      bin.write(reinterpret_cast<const char*>(&val), sizeof(val));
    }
  }
  write_manifest(cli, "vectorize", out);
  std::cout << "vectorize: " << matrix.rows.size() << " x " << matrix.cols
            << " (" << vectorize::scheme_name(scheme) << ") -> " << out
            << ".{vocab.json,dtm}\n";
  return 0;
}

ensemble::EdConfig ed_config(const Cli& cli) {
  ensemble::EdConfig ec;
  ec.num_slices =
      static_cast<int>(cli.cfg.get_int("events.num_slices", ec.num_slices));
  int top = cli.top > 0
                ? cli.top
                : static_cast<int>(cli.cfg.get_int("events.top_k", 50));
  ec.mabed.top_k = top;
  ec.olda.top_k = top;
  ec.peaky.top_k = top;
  ec.mabed.dedup = cli.cfg.get_bool("events.dedup", true);
  ec.mabed.max_candidates = static_cast<int>(
      cli.cfg.get_int("mabed.max_candidates", ec.mabed.max_candidates));
  ec.mabed.main_word_pool = static_cast<int>(
      cli.cfg.get_int("mabed.main_word_pool", ec.mabed.main_word_pool));
  ec.olda.K = static_cast<int>(cli.cfg.get_int("olda.k", ec.olda.K));
  ec.olda.iters = static_cast<int>(cli.cfg.get_int("olda.iters", ec.olda.iters));
  ec.olda.alpha = cli.cfg.get_double("olda.alpha", ec.olda.alpha);
  ec.olda.beta0 = cli.cfg.get_double("olda.beta0", ec.olda.beta0);
  ec.olda.lambda = cli.cfg.get_double("olda.lambda", ec.olda.lambda);
  ec.olda.min_docs =
      static_cast<int>(cli.cfg.get_int("olda.min_docs", ec.olda.min_docs));
  ec.olda.seed = derive_seed(cli.seed, "olda");
  ec.peaky.sub_bins =
      static_cast<int>(cli.cfg.get_int("peaky.sub_bins", ec.peaky.sub_bins));
  ec.peaky.z_thresh = cli.cfg.get_double("peaky.z_thresh", ec.peaky.z_thresh);
  if (cli.method == "mabed") ec.methods = {events::Method::MABED};
  else if (cli.method == "olda") ec.methods = {events::Method::OLDA};
  else if (cli.method == "peaky") ec.methods = {events::Method::PeakyTopics};
  else if (cli.method != "all")
    throw Error("cli.bad_method", "method must be mabed|olda|peaky|all");
  return ec;
}

int cmd_detect_events(Cli& cli) {
  corpus::Corpus c = resolve_corpus(cli);
  auto spec = preprocess::PipelineSpec::resolve(preprocess::Pipeline::CT);
  auto docs = preprocess::apply_pipeline(c, spec);
  ensemble::EdConfig ec = ed_config(cli);
  events::TimeSlices slices = events::make_slices(c, docs, ec.num_slices);

  std::vector<events::Event> all;
  for (events::Method m : ec.methods) {
    std::vector<events::Event> evs;
    switch (m) {
      case events::Method::MABED:
        evs = events::mabed_detect(slices, ec.mabed);
        break;
      case events::Method::OLDA:
        evs = events::olda_detect(slices, ec.olda);
        break;
      case events::Method::PeakyTopics:
        evs = events::peaky_detect(slices, ec.peaky);
        break;
    }
    all.insert(all.end(), evs.begin(), evs.end());
  }
  std::string out = cli.out.empty() ? "events.json" : cli.out;
  write_file(out, events::events_to_json(all, cli.cfg.hash()));
  write_file(out + ".txt", events::events_table(all));
  write_manifest(cli, "detect-events", out);
  std::cout << "detect-events: " << all.size() << " events -> " << out
            << "\n";
  return 0;
}

int cmd_train(Cli& cli) {
  corpus::Corpus c = resolve_corpus(cli);
  auto p = preprocess::pipeline_from_name(cli.pipeline);
  if (!p || (*p != preprocess::Pipeline::SCT && *p != preprocess::Pipeline::SFE))
    throw Error("cli.bad_pipeline", "sentiment pipeline must be sct or sfe");
  TrainedModel tm = train_one(cli, cli.model, c, *p);
  std::string out = cli.out.empty() ? ("model_" + cli.model) : cli.out;
  if (auto dir = fs::path(out).parent_path(); !dir.empty())
    fs::create_directories(dir);

  std::string hash = cli.cfg.hash();
  if (tm.nb) model_io::save_nb(*tm.nb, out, hash);
  if (tm.linear) model_io::save_linear(*tm.linear, out, hash);
  if (tm.softmax) model_io::save_softmax(*tm.softmax, out, hash);
  if (tm.lstm) {
    model_io::save_lstm(*tm.lstm, out, hash);
    vectorize::save_cbow(*tm.cbow, out + ".cbow", hash);
  }
  if (tm.vocab) {
    nlohmann::ordered_json vj;
    vj["config_hash"] = cli.cfg.hash();
    vj["terms"] = tm.vocab->terms;
    vj["doc_freq"] = tm.vocab->doc_freq;
    vj["total_docs"] = tm.vocab->total_docs;
    write_file(out + ".vocab.json", vj.dump() + "\n");
  }
  write_manifest(cli, "train", out);
  std::cout << "train: " << cli.model << " on " << c.size() << " tweets -> "
            << out << "\n";
  return 0;
}

// fold-wise retraining for one named model over one corpus
evaluation::KfoldResult evaluate_model(const Cli& cli,
                                       const corpus::Corpus& c,
                                       const std::string& name,
                                       preprocess::Pipeline satp, int k) {
  auto spec = preprocess::PipelineSpec::resolve(
      satp, cli.cfg.get_bool("sfe_lemma", true));
  std::vector<corpus::SentimentLabel> labels;
  for (const auto& t : c.tweets) labels.push_back(*t.label);

  std::vector<TrainedModel> fold_models;
  std::vector<preprocess::TokenizedDoc> docs =
      preprocess::apply_pipeline(c, spec);

  auto subset = [&](std::span<const uint32_t> idx) {
    corpus::Corpus sub;
    for (uint32_t i : idx) sub.tweets.push_back(c.tweets[i]);
    return sub;
  };

  evaluation::TrainFn train = [&](std::span<const uint32_t> idx) {
    corpus::Corpus sub = subset(idx);
    fold_models.push_back(train_one(cli, name, sub, satp));
    return fold_models.size() - 1;
  };
  evaluation::PredictFn predict = [&](size_t token, uint32_t i) {
    const TrainedModel& tm = fold_models[token];
    const auto& tokens = docs[i].tokens;
    if (tm.nb)
      return classifiers::predict(
          *tm.nb, vectorize::vectorize_doc(*tm.vocab, tokens,
                                           vectorize::Scheme::RawFreq));
    if (tm.linear)
      return classifiers::predict(
          *tm.linear, vectorize::vectorize_doc(*tm.vocab, tokens, tm.scheme));
    if (tm.lstm) {
      auto seq = vectorize::embed_doc_seq(*tm.cbow, tokens, tm.lstm_max_len);
      return classifiers::predict(*tm.lstm, seq);
    }
    const auto* v = tm.ext->find(c.tweets[i].id);
    if (!v)
      throw Error("cli.missing_embedding",
                  "no embedding for tweet " + std::to_string(c.tweets[i].id));
    return classifiers::predict(*tm.softmax, *v);
  };

  return evaluation::kfold(labels, k, derive_seed(cli.seed, "kfold"), train,
                           predict);
}

int cmd_evaluate(Cli& cli) {
  corpus::Corpus c = resolve_corpus(cli);
  auto p = preprocess::pipeline_from_name(cli.pipeline);
  if (!p) throw Error("cli.bad_pipeline", "unknown pipeline");
  int k = static_cast<int>(cli.cfg.get_int("eval.k", 5));

  std::string csv =
      "dataset,algorithm,term_weight,pipeline,accuracy,precision,recall\n";
  std::istringstream models(cli.model);
  std::string name;
  char fmt[256];
  while (std::getline(models, name, ',')) {
    auto r = evaluate_model(cli, c, name, *p, k);
    std::string weight =
        name == "lstm" ? "word2vec"
        : name == "softmax"
            ? "external"
            : std::string(vectorize::scheme_name(scheme_for(name)));
    std::snprintf(fmt, sizeof(fmt), "%s,%s,%s,%s,%.4f,%s,%s\n",
                  cli.dataset.c_str(), name.c_str(), weight.c_str(),
                  cli.pipeline.c_str(), r.mean.accuracy,
                  r.mean.precision
                      ? std::to_string(*r.mean.precision).c_str()
                      : "",
                  r.mean.recall ? std::to_string(*r.mean.recall).c_str() : "");
    csv += fmt;
    std::cout << "evaluate: " << name << " " << cli.pipeline
              << " accuracy " << r.mean.accuracy << "\n";
  }
  std::string out = cli.out.empty() ? "metrics.csv" : cli.out;
  std::string payload = "# config_hash=" + cli.cfg.hash() + "\n" + csv;
  write_file(out, payload);
  write_manifest(cli, "evaluate", out);
  return 0;
}

int cmd_ensemble(Cli& cli) {
  corpus::Corpus c = resolve_corpus(cli);
  std::vector<TrainedModel> trained;
  std::vector<ensemble::SentimentPredictor> predictors;
  std::istringstream models(cli.models);
  std::string name;
  auto satp = preprocess::pipeline_from_name(cli.pipeline);
  if (!satp ||
      (*satp != preprocess::Pipeline::SCT && *satp != preprocess::Pipeline::SFE))
    throw Error("cli.bad_pipeline", "sentiment pipeline must be sct or sfe");
  while (std::getline(models, name, ',')) {
    trained.push_back(train_one(cli, name, c, *satp, true));
    predictors.push_back(make_predictor(trained.back()));
  }

  ensemble::EnsembleReport report =
      ensemble::run_edsa(c, ed_config(cli), predictors, cli.threads);
  std::string out = cli.out.empty() ? "ensemble.json" : cli.out;
  write_file(out, ensemble::report_to_json(report, cli.cfg.hash()));
  write_file(out + ".csv", ensemble::report_to_csv(report));
  write_manifest(cli, "ensemble", out);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "ensemble: " << report.methods.size() << " methods -> " << out
            << "\n";
  return 0;
}

int cmd_report(Cli& cli, const std::string& events_path,
               const std::string& ensemble_path) {
  std::string out = cli.out.empty() ? "report.txt" : cli.out;
  std::string text;
  if (!events_path.empty()) {
    std::ifstream in(events_path, std::ios::binary);
    if (!in) throw Error("cli.io", "cannot open " + events_path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<events::Event> evs;
    for (const auto& ej : j.at("events")) {
      events::Event e;
      auto m = events::method_from_name(ej.at("method").get<std::string>());
      e.method = m.value_or(events::Method::MABED);
      e.magnitude = ej.at("magnitude").get<double>();
      e.start_ts = ej.at("start").get<int64_t>();
      e.end_ts = ej.at("end").get<int64_t>();
      for (const auto& kj : ej.at("keywords"))
        e.keywords.push_back({kj.at("term").get<std::string>(),
                              kj.at("weight").get<double>()});
      evs.push_back(std::move(e));
    }
    text += events::events_table(evs);
  }
  if (!ensemble_path.empty()) {
    std::ifstream in(ensemble_path, std::ios::binary);
    if (!in) throw Error("cli.io", "cannot open " + ensemble_path);
    nlohmann::json j = nlohmann::json::parse(in);
    text += "\nMethod  Events  Vote breakdown\n";
    for (const auto& mj : j.at("methods")) {
      std::map<std::string, int> votes;
      for (const auto& ej : mj.at("events"))
        ++votes[ej.at("vote").get<std::string>()];
      text += mj.at("name").get<std::string>();
      text += "  " + std::to_string(mj.at("events").size());
      for (const auto& [label, count] : votes)
        text += "  " + label + ":" + std::to_string(count);
      text += "\n";
    }
  }
  write_file(out, text);
  write_manifest(cli, "report", out);
  std::cout << "report -> " << out << "\n";
  return 0;
}

int cmd_synth(Cli& cli) {
  synth::SynthParams sp;
  sp.n_tweets =
      static_cast<size_t>(cli.cfg.get_int("synth.tweets", 90000));
  sp.n_events = static_cast<int>(cli.cfg.get_int("synth.events", 116));
  sp.seed = cli.seed;
  std::string out = cli.out.empty() ? "synth" : cli.out;
  fs::create_directories(out);
  std::string csv = (fs::path(out) / "corpus.csv").string();
  synth::generate_corpus_csv(csv, sp);
  corpus::Corpus c = corpus::parse_csv(csv);
  std::string tsv = (fs::path(out) / "embeddings.tsv").string();
  synth::generate_embeddings_tsv(
      tsv, c, static_cast<int>(cli.cfg.get_int("synth.embedding_dim", 16)),
      derive_seed(cli.seed, "synth.embeddings"));
  write_manifest(cli, "synth-corpus", csv);
  std::cout << "synth-corpus: " << c.size() << " tweets -> " << csv << ", "
            << tsv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event detection + sentiment ensemble pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Cli cli;
  std::string config_path;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", cli.seed, "root seed");
  app.add_option("--threads", cli.threads, "worker cap");
  app.add_option("--out", cli.out, "output artifact path");
  app.add_option("--dataset", cli.dataset, "c1|c2|c3|<csv path>");

  auto* ingest = app.add_subcommand("ingest", "parse corpus, dump NDJSON");

  std::string in_path;
  auto* prep = app.add_subcommand("preprocess", "tokenize a corpus dump");
  prep->add_option("--pipeline", cli.pipeline, "mt|pt|ct|sct|sfe");
  prep->add_option("--in", in_path, "corpus NDJSON")->required();

  std::string scheme = "tfidf";
  auto* vec = app.add_subcommand("vectorize", "matrices / cbow embeddings");
  vec->add_option("--scheme", scheme, "rawfreq|tf|tfidf|cbow");
  vec->add_option("--pipeline", cli.pipeline, "text pipeline");

  auto* det = app.add_subcommand("detect-events", "run burst detectors");
  det->add_option("--method", cli.method, "mabed|olda|peaky|all");
  det->add_option("--top", cli.top, "events per method");

  auto* train = app.add_subcommand("train", "train one sentiment model");
  train->add_option("--model", cli.model, "nb|lr|rc|svm|lstm|softmax");
  train->add_option("--pipeline", cli.pipeline, "sct|sfe");
  train->add_option("--embeddings", cli.embeddings_path, "external TSV");

  auto* eval = app.add_subcommand("evaluate", "k-fold metrics CSV");
  eval->add_option("--model", cli.model, "comma list of models");
  eval->add_option("--pipeline", cli.pipeline, "sct|sfe");
  eval->add_option("--embeddings", cli.embeddings_path, "external TSV");

  auto* ens = app.add_subcommand("ensemble", "full EDSA run");
  ens->add_option("--models", cli.models, "comma list of models");
  ens->add_option("--pipeline", cli.pipeline, "SATP: sct|sfe");
  ens->add_option("--method", cli.method, "mabed|olda|peaky|all");
  ens->add_option("--top", cli.top, "events per method");
  ens->add_option("--embeddings", cli.embeddings_path, "external TSV");

  std::string rep_events, rep_ensemble;
  auto* rep = app.add_subcommand("report", "render artifacts");
  rep->add_option("--events", rep_events, "events JSON");
  rep->add_option("--ensemble", rep_ensemble, "ensemble JSON");

  auto* synth_cmd =
      app.add_subcommand("synth-corpus", "deterministic fixture corpus");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) cli.cfg = config::Config::from_file(config_path);
    // flags override config (standard precedence)
    if (app.count("--seed")) cli.cfg.set("seed", std::to_string(cli.seed));
    else cli.seed = static_cast<uint64_t>(cli.cfg.get_int("seed", 42));
    if (app.count("--threads"))
      cli.cfg.set("threads", std::to_string(cli.threads));
    else cli.threads = static_cast<int>(cli.cfg.get_int("threads", 1));
    if (app.count("--dataset")) cli.cfg.set("dataset", cli.dataset);
    else cli.dataset = cli.cfg.get_str("dataset", cli.dataset);
    if (prep->count("--pipeline") || vec->count("--pipeline") ||
        train->count("--pipeline") || eval->count("--pipeline") ||
        ens->count("--pipeline"))
      cli.cfg.set("pipeline", cli.pipeline);
    else cli.pipeline = cli.cfg.get_str("pipeline", cli.pipeline);
    if (train->count("--model") || eval->count("--model"))
      cli.cfg.set("model", cli.model);
    else cli.model = cli.cfg.get_str("model", cli.model);
    if (ens->count("--models")) cli.cfg.set("models", cli.models);
    else cli.models = cli.cfg.get_str("models", cli.models);
    if (!cli.embeddings_path.empty())
      cli.cfg.set("embeddings", cli.embeddings_path);
    else cli.embeddings_path = cli.cfg.get_str("embeddings", "");

    if (ingest->parsed()) return cmd_ingest(cli);
    if (prep->parsed()) return cmd_preprocess(cli, in_path);
    if (vec->parsed()) return cmd_vectorize(cli, scheme);
    if (det->parsed()) return cmd_detect_events(cli);
    if (train->parsed()) return cmd_train(cli);
    if (eval->parsed()) return cmd_evaluate(cli);
    if (ens->parsed()) return cmd_ensemble(cli);
    if (rep->parsed()) return cmd_report(cli, rep_events, rep_ensemble);
    if (synth_cmd->parsed()) return cmd_synth(cli);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
