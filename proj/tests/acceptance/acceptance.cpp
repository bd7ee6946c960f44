// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Uses the real Sentiment140 CSV when EDSA_DATA_DIR provides it and
// falls back to the bundled deterministic fixture corpus otherwise; either
// way the full parse -> preprocess -> train -> detect -> vote path runs.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "edsa/cbow.hpp"
#include "edsa/classifiers.hpp"
#include "edsa/corpus.hpp"
#include "edsa/embeddings.hpp"
#include "edsa/ensemble.hpp"
#include "edsa/evaluation.hpp"
#include "edsa/events.hpp"
#include "edsa/preprocess.hpp"
#include "edsa/rng.hpp"
#include "edsa/synth.hpp"
#include "edsa/vectorize.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace edsa;
using corpus::Corpus;
using corpus::SentimentLabel;

namespace {

constexpr SentimentLabel P = SentimentLabel::Positive;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << detail << "\n";
  std::cout.flush();
  if (!pass) ++g_failures;
}

struct Env {
  std::string cli;
  fs::path work;
  std::string corpus_csv;
  std::string embeddings_tsv;
  bool real_data = false;
};

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Env setup(const char* cli_path) {
  Env env;
  env.cli = cli_path;
  env.work = fs::current_path() / "acceptance_work";
  fs::create_directories(env.work);

  if (const char* dir = std::getenv("EDSA_DATA_DIR")) {
    for (const char* name :
         {"sentiment140.csv", "training.1600000.csv", "corpus.csv"}) {
      fs::path cand = fs::path(dir) / name;
      if (fs::exists(cand)) {
        env.corpus_csv = cand.string();
        env.real_data = true;
        break;
      }
    }
  }
  if (!env.real_data) {
    env.corpus_csv = (env.work / "corpus.csv").string();
    env.embeddings_tsv = (env.work / "embeddings.tsv").string();
    if (!fs::exists(env.corpus_csv)) {
      synth::SynthParams sp;  // frozen fixture constants
      synth::generate_corpus_csv(env.corpus_csv, sp);
    }
    if (!fs::exists(env.embeddings_tsv)) {
      Corpus c = corpus::parse_csv(env.corpus_csv);
      synth::generate_embeddings_tsv(env.embeddings_tsv, c, 16,
                                     derive_seed(7, "synth.embeddings"));
    }
    std::cout << "# corpus: bundled synthetic fixture (" << env.corpus_csv
              << "); set EDSA_DATA_DIR for the real dataset\n";
  } else {
    env.embeddings_tsv = (env.work / "embeddings.tsv").string();
    if (!fs::exists(env.embeddings_tsv)) {
      Corpus c = corpus::parse_csv(env.corpus_csv);
      synth::generate_embeddings_tsv(env.embeddings_tsv, c, 16,
                                     derive_seed(7, "synth.embeddings"));
    }
    std::cout << "# corpus: " << env.corpus_csv << "\n";
  }
  return env;
}

// metrics CSV row: dataset,algorithm,term_weight,pipeline,acc,prec,rec
struct Row {
  double accuracy = -1, precision = -1, recall = -1;
};

Row read_metrics(const fs::path& csv, const std::string& algo,
                 const std::string& pipeline) {
  std::ifstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("dataset,", 0) == 0)
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() >= 7 && f[1] == algo && f[3] == pipeline) {
      Row r;
      r.accuracy = std::stod(f[4]);
      r.precision = f[5].empty() ? -1 : std::stod(f[5]);
      r.recall = f[6].empty() ? -1 : std::stod(f[6]);
      return r;
    }
  }
  return {};
}

void write_cfg(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

// ---------------------------------------------------------------------------
// criteria 1 + 2: C1/SCT accuracy windows via the CLI evaluate path

void criterion_1_and_2(const Env& env) {
  struct Spec {
    const char* model;
    const char* cfg;
    double target, tol;
  };
  // per-model optimizer settings; targets and tolerances are pinned
  const Spec specs[] = {
      {"nb", "", 0.761, 0.03},
      {"lr", "linear.lr = 0.5\nlinear.epochs = 300\n", 0.756, 0.03},
      {"rc", "linear.lr = 1.0\nlinear.epochs = 500\n", 0.767, 0.03},
      {"svm", "linear.epochs = 3\n", 0.729, 0.04},
  };
  bool all = true;
  std::string detail;
  for (const Spec& s : specs) {
    fs::path cfg = env.work / (std::string("c1_") + s.model + ".cfg");
    write_cfg(cfg, "corpus = " + env.corpus_csv + "\neval.k = 5\n" + s.cfg);
    fs::path out = env.work / (std::string("metrics_") + s.model + ".csv");
    std::string cmd = env.cli + " evaluate --model " + s.model +
                      " --pipeline sct --dataset c1 --seed 42 --config " +
                      cfg.string() + " --out " + out.string() + " >/dev/null";
    if (run(cmd) != 0) {
      all = false;
      detail += std::string(s.model) + "=cli-error ";
      continue;
    }
    Row r = read_metrics(out, s.model, "sct");
    bool ok = std::abs(r.accuracy - s.target) <= s.tol;
    all = all && ok;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s=%.4f (%.3f+-%.2f)%s ", s.model,
                  r.accuracy, s.target, s.tol, ok ? "" : "<-out");
    detail += buf;
  }
  report(1, all, "C1/SCT 5-fold accuracies: " + detail);

  // criterion 2: NB SFE vs SCT deltas, sign only
  fs::path cfg = env.work / "c2.cfg";
  write_cfg(cfg, "corpus = " + env.corpus_csv + "\neval.k = 5\n");
  fs::path out_sfe = env.work / "metrics_nb_sfe.csv";
  std::string cmd = env.cli +
                    " evaluate --model nb --pipeline sfe --dataset c1 "
                    "--seed 42 --config " +
                    cfg.string() + " --out " + out_sfe.string() + " >/dev/null";
  Row sct = read_metrics(env.work / "metrics_nb.csv", "nb", "sct");
  bool cli_ok = run(cmd) == 0;
  Row sfe = read_metrics(out_sfe, "nb", "sfe");
  bool recall_up = sfe.recall > sct.recall;
  bool precision_down = sfe.precision < sct.precision;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "NB recall %.4f->%.4f (up: %s), precision %.4f->%.4f (down: %s)",
                sct.recall, sfe.recall, recall_up ? "yes" : "NO",
                sct.precision, sfe.precision, precision_down ? "yes" : "NO");
  report(2, cli_ok && recall_up && precision_down, buf);
}

// ---------------------------------------------------------------------------
// shared split + model training for criteria 3 and 4

struct Holdout {
  Corpus train, test;
};

Holdout split_c1(const Corpus& full, uint64_t seed) {
  size_t c1_size = std::min<size_t>(20000, full.size());
  Corpus c1 = corpus::stratified_subsets(full, {c1_size}, seed)[0];
  std::vector<SentimentLabel> labels;
  for (const auto& t : c1.tweets) labels.push_back(*t.label);
  auto folds = evaluation::kfold_indices(labels, 5, derive_seed(seed, "hold"));
  Holdout h;
  std::vector<corpus::Tweet> tr, te;
  std::set<uint32_t> test_idx(folds[0].begin(), folds[0].end());
  for (uint32_t i = 0; i < c1.size(); ++i) {
    if (test_idx.count(i)) te.push_back(c1.tweets[i]);
    else tr.push_back(c1.tweets[i]);
  }
  h.train = Corpus::from_tweets(std::move(tr));
  h.test = Corpus::from_tweets(std::move(te));
  return h;
}

struct LstmBundle {
  vectorize::CbowModel cbow;
  classifiers::LstmModel model;
  int max_len = 30;
};

LstmBundle train_lstm_c1(const Holdout& h) {
  auto spec = preprocess::PipelineSpec::resolve(preprocess::Pipeline::SCT);
  auto train_docs = preprocess::apply_pipeline(h.train, spec);

  vectorize::CbowParams cp;
  cp.dim = 100;
  cp.window = 5;
  cp.epochs = 15;
  cp.negatives = 5;
  cp.seed = derive_seed(42, "cbow");
  LstmBundle b;
  b.cbow = vectorize::train_cbow(train_docs, cp);

  classifiers::LstmParams lp;
  lp.hidden = 64;
  lp.max_len = 30;
  lp.batch = 64;
  lp.lr = 2e-3;
  lp.epochs = 8;
  lp.seed = derive_seed(42, "lstm");
  b.max_len = lp.max_len;

  std::vector<std::vector<std::vector<double>>> seqs;
  std::vector<SentimentLabel> labels;
  seqs.reserve(train_docs.size());
  for (size_t i = 0; i < train_docs.size(); ++i) {
    seqs.push_back(
        vectorize::embed_doc_seq(b.cbow, train_docs[i].tokens, lp.max_len));
    labels.push_back(*h.train.tweets[i].label);
  }
  b.model = classifiers::train_lstm(seqs, labels, cp.dim, lp);
  return b;
}

double lstm_holdout_accuracy(const LstmBundle& b, const Corpus& test) {
  auto spec = preprocess::PipelineSpec::resolve(preprocess::Pipeline::SCT);
  size_t correct = 0;
  for (const auto& t : test.tweets) {
    auto tokens = preprocess::apply_pipeline(t, spec).tokens;
    auto seq = vectorize::embed_doc_seq(b.cbow, tokens, b.max_len);
    correct += classifiers::predict(b.model, seq).label == *t.label;
  }
  return static_cast<double>(correct) / test.size();
}

bool lstm_gradient_check() {
  SplitMix64 rng(4242);
  classifiers::LstmModel md;
  md.n = 3;
  md.m = 2;
  auto fill = [&](std::vector<double>& v, size_t len) {
    v.resize(len);
    for (auto& x : v) x = rng.uniform(-0.6, 0.6);
  };
  fill(md.wi, 6); fill(md.wf, 6); fill(md.wo, 6); fill(md.wc, 6);
  fill(md.vi, 9); fill(md.vf, 9); fill(md.vo, 9); fill(md.vc, 9);
  fill(md.bi, 3); fill(md.bf, 3); fill(md.bo, 3); fill(md.bc, 3);
  md.head.dim = 3;
  md.head.classes = 2;
  fill(md.head.w, 6);
  fill(md.head.b, 2);
  std::vector<std::vector<double>> seq(4, std::vector<double>(2));
  for (auto& x : seq)
    for (auto& v : x) v = rng.uniform(-1.5, 1.5);

  classifiers::LstmGrads grads;
  grads.init(md);
  classifiers::lstm_loss_grad(md, seq, 1, grads);
  auto loss_of = [&](const classifiers::LstmModel& m2) {
    classifiers::LstmGrads g;
    g.init(m2);
    return classifiers::lstm_loss_grad(m2, seq, 1, g);
  };
  double max_rel = 0.0;
  const double hh = 1e-6;
  using MF = std::vector<double> classifiers::LstmModel::*;
  using GF = std::vector<double> classifiers::LstmGrads::*;
  const std::pair<MF, GF> blocks[] = {
      {&classifiers::LstmModel::wi, &classifiers::LstmGrads::wi},
      {&classifiers::LstmModel::wf, &classifiers::LstmGrads::wf},
      {&classifiers::LstmModel::wo, &classifiers::LstmGrads::wo},
      {&classifiers::LstmModel::wc, &classifiers::LstmGrads::wc},
      {&classifiers::LstmModel::vi, &classifiers::LstmGrads::vi},
      {&classifiers::LstmModel::vf, &classifiers::LstmGrads::vf},
      {&classifiers::LstmModel::vo, &classifiers::LstmGrads::vo},
      {&classifiers::LstmModel::vc, &classifiers::LstmGrads::vc},
      {&classifiers::LstmModel::bi, &classifiers::LstmGrads::bi},
      {&classifiers::LstmModel::bf, &classifiers::LstmGrads::bf},
      {&classifiers::LstmModel::bo, &classifiers::LstmGrads::bo},
      {&classifiers::LstmModel::bc, &classifiers::LstmGrads::bc},
  };
  for (auto [mfield, gfield] : blocks) {
    const auto& g = grads.*gfield;
    for (size_t j = 0; j < (md.*mfield).size(); ++j) {
      auto mp = md, mm = md;
      (mp.*mfield)[j] += hh;
      (mm.*mfield)[j] -= hh;
      double fd = (loss_of(mp) - loss_of(mm)) / (2 * hh);
      double denom = std::max({std::abs(fd), std::abs(g[j]), 1e-8});
      max_rel = std::max(max_rel, std::abs(fd - g[j]) / denom);
    }
  }
  return max_rel < 1e-4;
}

void criteria_3_and_4(const Env& env) {
  Corpus full = corpus::parse_csv(env.corpus_csv);
  Holdout h = split_c1(full, 42);

  // LSTM first (criterion 3), reused as an ensemble member in criterion 4
  LstmBundle lstm = train_lstm_c1(h);
  double lstm_acc = lstm_holdout_accuracy(lstm, h.test);
  bool grad_ok = lstm_gradient_check();
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "LSTM C1 holdout accuracy %.4f (>= 0.75: %s); BPTT "
                  "finite-difference check < 1e-4: %s",
                  lstm_acc, lstm_acc >= 0.75 ? "yes" : "NO",
                  grad_ok ? "yes" : "NO");
    report(3, lstm_acc >= 0.75 && grad_ok, buf);
  }

  // shallow models + softmax head on the same split
  auto sct = preprocess::PipelineSpec::resolve(preprocess::Pipeline::SCT);
  auto train_docs = preprocess::apply_pipeline(h.train, sct);
  auto test_docs = preprocess::apply_pipeline(h.test, sct);
  std::vector<SentimentLabel> train_y, test_y;
  for (const auto& t : h.train.tweets) train_y.push_back(*t.label);
  for (const auto& t : h.test.tweets) test_y.push_back(*t.label);

  auto [raw_vocab, raw_m] =
      vectorize::build_matrix(train_docs, vectorize::Scheme::RawFreq);
  auto [tfidf_vocab, tfidf_m] =
      vectorize::build_matrix(train_docs, vectorize::Scheme::TFIDF);

  classifiers::NbModel nb = classifiers::train_nb(raw_m, train_y);
  classifiers::LinearParams lr_p;
  lr_p.lr = 0.5;
  lr_p.epochs = 300;
  classifiers::LinearModel lr = classifiers::train_linear(
      tfidf_m, train_y, classifiers::LinearKind::LR, lr_p);
  classifiers::LinearParams rc_p;
  rc_p.lr = 1.0;
  rc_p.epochs = 500;
  classifiers::LinearModel rc = classifiers::train_linear(
      raw_m, train_y, classifiers::LinearKind::Ridge, rc_p);
  classifiers::LinearParams svm_p;
  svm_p.epochs = 3;
  classifiers::LinearModel svm = classifiers::train_linear(
      tfidf_m, train_y, classifiers::LinearKind::SVM, svm_p);

  auto ext = vectorize::load_embeddings(env.embeddings_tsv);
  std::vector<std::vector<double>> train_x;
  for (const auto& t : h.train.tweets) {
    const auto* v = ext.find(t.id);
    train_x.push_back(v ? *v : std::vector<double>(ext.dim, 0.0));
  }
  classifiers::SoftmaxParams sm_p;
  sm_p.seed = derive_seed(42, "softmax");
  classifiers::SoftmaxHead head =
      classifiers::train_softmax_head(train_x, train_y, sm_p);

  // per-model predictions on the held-out 20%
  std::map<std::string, std::vector<SentimentLabel>> preds;
  for (size_t i = 0; i < test_docs.size(); ++i) {
    const auto& toks = test_docs[i].tokens;
    auto raw_row =
        vectorize::vectorize_doc(raw_vocab, toks, vectorize::Scheme::RawFreq);
    auto tfidf_row = vectorize::vectorize_doc(tfidf_vocab, toks,
                                              vectorize::Scheme::TFIDF);
    preds["nb"].push_back(classifiers::predict(nb, raw_row).label);
    preds["lr"].push_back(classifiers::predict(lr, tfidf_row).label);
    preds["rc"].push_back(classifiers::predict(rc, raw_row).label);
    preds["svm"].push_back(classifiers::predict(svm, tfidf_row).label);
    const auto* v = ext.find(h.test.tweets[i].id);
    preds["softmax"].push_back(v ? classifiers::predict(head, *v).label : P);
    auto seq = vectorize::embed_doc_seq(lstm.cbow, toks, lstm.max_len);
    preds["lstm"].push_back(classifiers::predict(lstm.model, seq).label);
  }

  double best = 0.0;
  std::string detail;
  for (const auto& [name, labels] : preds) {
    double acc = evaluation::score_labels(labels, test_y).accuracy;
    best = std::max(best, acc);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%.4f ", name.c_str(), acc);
    detail += buf;
  }
  std::vector<SentimentLabel> voted;
  for (size_t i = 0; i < test_y.size(); ++i) {
    std::vector<SentimentLabel> across;
    for (const auto& [name, labels] : preds) across.push_back(labels[i]);
    voted.push_back(ensemble::mode(across));
  }
  double vote_acc = evaluation::score_labels(voted, test_y).accuracy;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "vote=%.4f vs best individual=%.4f (6 models: %s)", vote_acc,
                best, detail.c_str());
  report(4, vote_acc >= best - 0.01, buf);
}

// ---------------------------------------------------------------------------
// criterion 5: planted-burst recovery, OLDA purity, full-corpus event shape

double jaccard(int64_t a0, int64_t a1, int64_t b0, int64_t b1) {
  int64_t inter = std::min(a1, b1) - std::max(a0, b0);
  if (inter <= 0) return 0.0;
  int64_t uni = std::max(a1, b1) - std::min(a0, b0);
  return static_cast<double>(inter) / static_cast<double>(uni);
}

struct BuiltCorpus {
  Corpus corpus;
  std::vector<preprocess::TokenizedDoc> docs;
};

BuiltCorpus make_docs(
    std::vector<std::pair<int64_t, std::vector<std::string>>> rows) {
  std::stable_sort(
      rows.begin(), rows.end(),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  BuiltCorpus out;
  std::vector<corpus::Tweet> tweets;
  for (size_t i = 0; i < rows.size(); ++i) {
    tweets.push_back({i + 1, rows[i].first, P, "u", "x"});
    out.docs.push_back({i + 1, rows[i].second});
  }
  out.corpus = Corpus::from_tweets(std::move(tweets));
  return out;
}

void criterion_5(const Env& env) {
  // (a) MABED planted burst over 20 seeded trials
  double min_jac_mabed = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    SplitMix64 rng(5000 + trial);
    std::vector<std::pair<int64_t, std::vector<std::string>>> rows;
    const int64_t span = 3200;
    const int slices = 16;
    for (int i = 0; i < 2500; ++i) {
      std::vector<std::string> toks;
      size_t len = 3 + rng.below(5);
      for (size_t k = 0; k < len; ++k)
        toks.push_back("w" + std::to_string(rng.below(50)));
      if (rng.below(100) == 0) toks.push_back("burstword");
      rows.push_back({static_cast<int64_t>(rng.below(span)), toks});
    }
    // 10x burst over slices [a, b]
    int a = 3 + static_cast<int>(rng.below(8));
    int b = a + 2 + static_cast<int>(rng.below(3));
    int64_t lo = span * a / slices, hi = span * (b + 1) / slices;
    for (int i = 0; i < 260; ++i) {
      std::vector<std::string> toks = {"burstword",
                                       "w" + std::to_string(rng.below(50))};
      rows.push_back({lo + static_cast<int64_t>(rng.below(
                               static_cast<uint64_t>(hi - lo))),
                      toks});
    }
    // timestamps at the extremes pin the span
    rows.push_back({0, {"w0"}});
    rows.push_back({span, {"w1"}});
    BuiltCorpus bc = make_docs(std::move(rows));
    events::TimeSlices s = events::make_slices(bc.corpus, bc.docs, slices);
    events::MabedParams mp;
    mp.top_k = 5;
    auto evs = events::mabed_detect(s, mp);
    double best = 0.0;
    for (const auto& e : evs) {
      if (e.keywords[0].first != "burstword") continue;
      best = std::max(best, jaccard(e.start_ts, e.end_ts, lo, hi));
    }
    min_jac_mabed = std::min(min_jac_mabed, best);
  }

  // (a) Peaky planted sub-bin spike over 20 seeded trials
  double min_jac_peaky = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    SplitMix64 rng(6000 + trial);
    const int64_t span = 25600;  // 16 slices x 8 sub-bins x 200
    const int slices = 16, bins = 8;
    std::vector<std::pair<int64_t, std::vector<std::string>>> rows;
    for (int i = 0; i < 3000; ++i) {
      std::vector<std::string> toks;
      for (int k = 0; k < 4; ++k)
        toks.push_back("w" + std::to_string(rng.below(60)));
      rows.push_back({static_cast<int64_t>(rng.below(span)), toks});
    }
    int cell = static_cast<int>(rng.below(slices * bins));
    int64_t lo = span * cell / (slices * bins);
    int64_t hi = span * (cell + 1) / (slices * bins);
    for (int i = 0; i < 230; ++i) {
      std::vector<std::string> toks = {"spikeword",
                                       "w" + std::to_string(rng.below(60))};
      toks.push_back("w" + std::to_string(rng.below(60)));
      toks.push_back("extra" + std::to_string(rng.below(20)));
      rows.push_back({lo + static_cast<int64_t>(rng.below(
                               static_cast<uint64_t>(hi - lo))),
                      toks});
    }
    rows.push_back({0, {"w0"}});
    rows.push_back({span, {"w1"}});
    BuiltCorpus bc = make_docs(std::move(rows));
    events::TimeSlices s = events::make_slices(bc.corpus, bc.docs, slices);
    events::PeakyParams pp;
    pp.top_k = 5;
    auto evs = events::peaky_detect(s, pp);
    double best = 0.0;
    for (const auto& e : evs)
      best = std::max(best, jaccard(e.start_ts, e.end_ts, lo, hi));
    min_jac_peaky = std::min(min_jac_peaky, best);
  }
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "(a) planted-burst Jaccard over 20 trials: MABED min %.3f, "
                  "Peaky min %.3f (>= 0.8)",
                  min_jac_mabed, min_jac_peaky);
    report(5, min_jac_mabed >= 0.8 && min_jac_peaky >= 0.8, buf);
  }

  // (b) OLDA two-vocabulary purity
  {
    SplitMix64 rng(7777);
    std::vector<std::pair<int64_t, std::vector<std::string>>> rows;
    const std::string va[] = {"aa", "bb", "cc"};
    const std::string vb[] = {"xx", "yy", "zz"};
    for (int i = 0; i < 600; ++i) {
      bool first = i % 2 == 0;
      std::vector<std::string> toks;
      size_t len = 6 + rng.below(5);
      for (size_t k = 0; k < len; ++k)
        toks.push_back(first ? va[rng.below(3)] : vb[rng.below(3)]);
      rows.push_back({static_cast<int64_t>(1000 + i * 7), toks});
    }
    BuiltCorpus bc = make_docs(std::move(rows));
    events::TimeSlices s = events::make_slices(bc.corpus, bc.docs, 2);
    events::OldaParams op;
    op.K = 2;
    op.iters = 80;
    op.min_docs = 1;
    op.top_k = 2;
    op.keywords = 3;
    op.seed = 11;
    auto evs = events::olda_detect(s, op);
    double min_purity = 0.0;
    bool ok = evs.size() == 2;
    if (ok) {
      min_purity = 1.0;
      for (const auto& e : evs) {
        size_t a_members = 0;
        for (uint64_t id : e.tweet_ids) {
          const auto& toks = bc.docs[id - 1].tokens;
          a_members += toks[0][0] <= 'c';
        }
        double purity =
            std::max<double>(a_members, e.tweet_ids.size() - a_members) /
            e.tweet_ids.size();
        min_purity = std::min(min_purity, purity);
      }
      ok = min_purity > 0.95;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "(b) OLDA two-vocabulary topic purity %.4f (> 0.95)",
                  min_purity);
    report(5, ok, buf);
  }

  // (c) full-corpus runs return 50 events with 10 distinct keywords
  {
    fs::path cfg = env.work / "events.cfg";
    write_cfg(cfg, "olda.iters = 60\nolda.min_docs = 3\n");
    bool all = true;
    std::string detail;
    for (const char* method : {"mabed", "olda", "peaky"}) {
      fs::path out = env.work / (std::string("events_") + method + ".json");
      std::string cmd = env.cli + " detect-events --dataset " +
                        env.corpus_csv + " --method " + method +
                        " --top 50 --seed 42 --config " + cfg.string() +
                        " --out " + out.string() + " >/dev/null";
      if (run(cmd) != 0) {
        all = false;
        detail += std::string(method) + "=cli-error ";
        continue;
      }
      auto j = nlohmann::json::parse(slurp(out));
      size_t n = j.at("events").size();
      bool distinct = true;
      for (const auto& e : j.at("events")) {
        std::set<std::string> uniq;
        for (const auto& k : e.at("keywords"))
          uniq.insert(k.at("term").get<std::string>());
        distinct = distinct && uniq.size() == 10;
      }
      bool ok = n == 50 && distinct;
      all = all && ok;
      detail += std::string(method) + "=" + std::to_string(n) +
                (distinct ? "/10kw " : "/dup-kw ");
    }
    report(5, all, "(c) detect-events --top 50 on the full corpus: " + detail);
  }
}

// ---------------------------------------------------------------------------
// criterion 6: formula oracles on randomized instances

void criterion_6() {
  SplitMix64 rng(98765);
  bool ok56 = true, ok7 = true, ok7mc = true, ok19 = true, ok123 = true;

  // tfidf vs direct long-double evaluation, 100 trials, 1e-12
  for (int t = 0; t < 100; ++t) {
    uint64_t n = 1 + rng.below(100000);
    uint64_t nj = 1 + rng.below(n);
    size_t dl = 1 + rng.below(300);
    double f = static_cast<double>(1 + rng.below(dl));
    long double expect = (static_cast<long double>(f) / dl) *
                         std::log(static_cast<long double>(n) / nj);
    double got = vectorize::tfidf(f, dl, n, nj);
    if (std::abs(got - static_cast<double>(expect)) >
        1e-12 * (1 + std::abs(got)))
      ok123 = false;
  }

  // burst candidate weight vs direct evaluation, 100 trials
  for (int t = 0; t < 100; ++t) {
    int len = 4 + static_cast<int>(rng.below(12));
    std::vector<double> s(len), q(len);
    for (auto& v : s) v = static_cast<double>(rng.below(40));
    for (auto& v : q) v = static_cast<double>(rng.below(40));
    int a = static_cast<int>(rng.below(len - 3));
    int b = a + 2 + static_cast<int>(rng.below(len - a - 2));
    double num = 0.0, st = 0.0, sq = 0.0;
    for (int i = a + 1; i <= b; ++i) {
      double dt = s[i] - s[i - 1], dq = q[i] - q[i - 1];
      num += dt * dq;
      st += dt * dt;
      sq += dq * dq;
    }
    double expect =
        (st == 0.0 || sq == 0.0)
            ? 0.5
            : (num / ((b - a - 1) * std::sqrt(st / (b - a - 1)) *
                      std::sqrt(sq / (b - a - 1))) +
               1.0) /
                  2.0;
    expect = std::min(1.0, std::max(0.0, expect));
    double got = events::mabed_candidate_weight(s, q, a, b);
    if (std::abs(got - expect) > 1e-12) ok56 = false;
  }

  // topic conditional vs direct count-formula evaluation, 100 trials
  for (int t = 0; t < 100; ++t) {
    int K = 2 + static_cast<int>(rng.below(3));
    size_t V = 4 + rng.below(4);
    std::vector<std::vector<uint32_t>> docs;
    for (size_t d = 0; d < 3; ++d) {
      std::vector<uint32_t> doc;
      for (size_t i = 0; i < 2 + rng.below(6); ++i)
        doc.push_back(static_cast<uint32_t>(rng.below(V)));
      docs.push_back(doc);
    }
    std::vector<double> alpha(K), beta(K * V);
    for (auto& a : alpha) a = rng.uniform(0.05, 2.0);
    for (auto& b : beta) b = rng.uniform(0.01, 0.5);
    events::OldaState st = events::olda_init(docs, V, K, alpha, beta, t);
    for (int it = 0; it < 2; ++it) events::olda_gibbs_step(st);
    size_t d = rng.below(st.docs.size());
    size_t p = rng.below(st.docs[d].size());
    uint32_t w = st.docs[d][p];
    int zk = st.z[d][p];
    std::vector<double> un(K);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      double cvk = st.cvk(w, k) - (k == zk ? 1 : 0);
      double ctot =
          static_cast<double>(st.topic_totals[k]) - (k == zk ? 1 : 0);
      double beta_sum = 0.0;
      for (size_t v = 0; v < V; ++v) beta_sum += beta[size_t(k) * V + v];
      double cdk = st.cdk(d, k) - (k == zk ? 1 : 0);
      un[k] = (cvk + beta[size_t(k) * V + w]) / (ctot + beta_sum) *
              (cdk + alpha[k]);
      total += un[k];
    }
    auto got = events::olda_conditional(st, d, p);
    for (int k = 0; k < K; ++k)
      if (std::abs(got[k] - un[k] / total) > 1e-12) ok7 = false;
  }

  // Monte-Carlo: sampled topic frequencies within 0.01 of the conditional
  {
    std::vector<std::vector<uint32_t>> docs = {{0, 1, 2}, {2, 3}, {1, 0}};
    std::vector<double> alpha = {0.9, 1.4};
    std::vector<double> beta(2 * 4, 0.08);
    events::OldaState st = events::olda_init(docs, 4, 2, alpha, beta, 9);
    for (int it = 0; it < 5; ++it) events::olda_gibbs_step(st);
    auto expected = events::olda_conditional(st, 0, 1);
    std::vector<size_t> tally(2, 0);
    for (int i = 0; i < 100000; ++i) {
      events::olda_resample_token(st, 0, 1);
      ++tally[st.z[0][1]];
    }
    for (int k = 0; k < 2; ++k) {
      double freq = tally[k] / 100000.0;
      if (std::abs(freq - expected[k]) > 0.01) ok7mc = false;
    }
  }

  // lstm forward pass vs independent evaluation, 100 trials, 1e-10
  for (int t = 0; t < 100; ++t) {
    SplitMix64 prng(31000 + t);
    classifiers::LstmModel md;
    md.n = 3;
    md.m = 2;
    auto fill = [&](std::vector<double>& v, size_t len) {
      v.resize(len);
      for (auto& x : v) x = prng.uniform(-0.8, 0.8);
    };
    fill(md.wi, 6); fill(md.wf, 6); fill(md.wo, 6); fill(md.wc, 6);
    fill(md.vi, 9); fill(md.vf, 9); fill(md.vo, 9); fill(md.vc, 9);
    fill(md.bi, 3); fill(md.bf, 3); fill(md.bo, 3); fill(md.bc, 3);
    md.head.dim = 3;
    md.head.classes = 2;
    md.head.w.assign(6, 0.0);
    md.head.b.assign(2, 0.0);
    std::vector<std::vector<double>> seq(3, std::vector<double>(2));
    for (auto& x : seq)
      for (auto& v : x) v = prng.uniform(-1.5, 1.5);
    auto tr = classifiers::lstm_forward(md, seq);

    std::vector<double> h(3, 0.0), c(3, 0.0);
    auto sg = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    for (size_t step = 0; step < seq.size(); ++step) {
      std::vector<double> hn(3), cn(3);
      for (int r = 0; r < 3; ++r) {
        double zi = md.bi[r], zf = md.bf[r], zo = md.bo[r], zc = md.bc[r];
        for (int j = 0; j < 2; ++j) {
          zi += md.wi[r * 2 + j] * seq[step][j];
          zf += md.wf[r * 2 + j] * seq[step][j];
          zo += md.wo[r * 2 + j] * seq[step][j];
          zc += md.wc[r * 2 + j] * seq[step][j];
        }
        for (int j = 0; j < 3; ++j) {
          zi += md.vi[r * 3 + j] * h[j];
          zf += md.vf[r * 3 + j] * h[j];
          zo += md.vo[r * 3 + j] * h[j];
          zc += md.vc[r * 3 + j] * h[j];
        }
        double i_g = sg(zi), f_g = sg(zf), o_g = sg(zo), g_g = std::tanh(zc);
        cn[r] = i_g * g_g + f_g * c[r];
        hn[r] = o_g * std::tanh(cn[r]);
      }
      h = hn;
      c = cn;
      for (int r = 0; r < 3; ++r)
        if (std::abs(tr.h[step][r] - h[r]) > 1e-10 ||
            std::abs(tr.c[step][r] - c[r]) > 1e-10)
          ok19 = false;
    }
  }

  std::string detail = std::string("burst-weight ") +
      (ok56 ? "ok" : "FAIL") + ", topic-conditional " +
      (ok7 ? "ok" : "FAIL") + ", topic-conditional-MC<=0.01 " +
      (ok7mc ? "ok" : "FAIL") + ", lstm-forward<=1e-10 " +
      (ok19 ? "ok" : "FAIL") + ", tfidf<=1e-12 " + (ok123 ? "ok" : "FAIL") +
      " (100 trials each)";
  report(6, ok56 && ok7 && ok7mc && ok19 && ok123, detail);
}

// ---------------------------------------------------------------------------
// criterion 7: voting oracle over randomized reports

void criterion_7() {
  SplitMix64 rng(24680);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    size_t n_tweets = 2 + rng.below(6);
    size_t n_models = 1 + rng.below(5);
    std::vector<corpus::Tweet> tweets;
    for (size_t i = 0; i < n_tweets; ++i)
      tweets.push_back({i + 1, static_cast<int64_t>(100 + i), P, "u", "x"});
    Corpus c = Corpus::from_tweets(std::move(tweets));

    std::vector<std::vector<SentimentLabel>> table(
        n_models, std::vector<SentimentLabel>(n_tweets));
    for (auto& row : table)
      for (auto& l : row) l = static_cast<SentimentLabel>(rng.below(3));

    std::vector<ensemble::SentimentPredictor> models;
    for (size_t m = 0; m < n_models; ++m) {
      ensemble::SentimentPredictor sp;
      sp.name = "m" + std::to_string(m);
      sp.satp = preprocess::Pipeline::SCT;
      sp.predict = [&table, m](const std::vector<std::string>&,
                               const corpus::Tweet& t) {
        return classifiers::Prediction{table[m][t.id - 1], 0.0};
      };
      models.push_back(std::move(sp));
    }
    events::Event ev;
    ev.method = events::Method::MABED;
    ev.keywords = {{"k", 1.0}};
    ev.start_ts = 0;
    ev.end_ts = 1000;
    for (size_t i = 0; i < n_tweets; ++i) ev.tweet_ids.push_back(i + 1);
    std::vector<ensemble::EdMethodRun> runs = {{events::Method::MABED, {ev}}};
    auto rep = ensemble::vote_events(c, runs, models);
    const auto& got = rep.methods[0].events[0];

    auto brute_mode = [](const std::vector<SentimentLabel>& ls) {
      std::array<size_t, 3> cnt{};
      for (auto l : ls) ++cnt[static_cast<int>(l)];
      int best = 0;
      for (int l = 1; l < 3; ++l)
        if (cnt[l] > cnt[best]) best = l;
      return static_cast<SentimentLabel>(best);
    };

    std::vector<SentimentLabel> event_votes;
    for (size_t m = 0; m < n_models; ++m) {
      SentimentLabel want = brute_mode(table[m]);
      if (got.per_model[m].second != want) ok = false;
      event_votes.push_back(want);
    }
    if (got.vote != brute_mode(event_votes)) ok = false;
    for (size_t i = 0; i < n_tweets; ++i) {
      std::vector<SentimentLabel> across;
      for (size_t m = 0; m < n_models; ++m) across.push_back(table[m][i]);
      if (got.tweets[i].vote != brute_mode(across)) ok = false;
    }
  }
  report(7, ok,
         "run_edsa output matches the brute-force vote table on 1000 "
         "randomized reports");
}

// ---------------------------------------------------------------------------
// criterion 8: byte-identical ensemble runs

void criterion_8(const Env& env) {
  fs::path small_csv = env.work / "fixture100.csv";
  synth::SynthParams sp;
  sp.n_tweets = 100;
  sp.n_events = 4;
  sp.seed = 99;
  synth::generate_corpus_csv(small_csv.string(), sp);

  fs::path cfg = env.work / "ens.cfg";
  write_cfg(cfg,
            "events.num_slices = 8\n"
            "olda.k = 4\nolda.iters = 30\nolda.min_docs = 1\n"
            "linear.epochs = 40\n");
  auto run_once = [&](const std::string& tag, int threads) -> std::string {
    fs::path out = env.work / ("ens_" + tag + ".json");
    std::string cmd = env.cli + " ensemble --dataset " + small_csv.string() +
                      " --models nb,lr,rc --pipeline sct --method all --top 5" +
                      " --seed 42 --threads " + std::to_string(threads) +
                      " --config " + cfg.string() + " --out " + out.string() +
                      " >/dev/null 2>&1";
    if (run(cmd) != 0) return "CLI-ERROR-" + tag;
    return slurp(out) + "|" + slurp(out.string() + ".csv");
  };
  std::string r1 = run_once("a", 1);
  std::string r2 = run_once("b", 1);
  std::string r3 = run_once("c", 1);
  std::string r8 = run_once("t8", 8);
  bool same = r1 == r2 && r2 == r3 && r1 == r8 && r1.size() > 100 &&
              r1.rfind("CLI-ERROR", 0) != 0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "ensemble artifacts byte-identical across 3 runs and "
                "--threads 1 vs 8 (%zu bytes): %s",
                r1.size(), same ? "yes" : "NO");
  report(8, same, buf);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: edsa_acceptance <path-to-edsa-cli>\n";
    return 2;
  }
  Env env = setup(argv[1]);

  criterion_1_and_2(env);
  criteria_3_and_4(env);
  criterion_5(env);
  criterion_6();
  criterion_7();
  criterion_8(env);

  if (g_failures) {
    std::cout << g_failures << " criterion check(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
