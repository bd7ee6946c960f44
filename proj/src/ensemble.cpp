#include "edsa/ensemble.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

#include "edsa/error.hpp"
#include "edsa/parallel.hpp"
#include "json.hpp"

namespace edsa::ensemble {

SentimentLabel mode(std::span<const SentimentLabel> labels) {
  if (labels.empty())
    throw Error("ensemble.empty_vote", "mode() of an empty label list");
  std::array<size_t, 3> counts{};
  for (SentimentLabel l : labels) ++counts[static_cast<int>(l)];
  int best = 0;
  for (int l = 1; l < 3; ++l)
    if (counts[l] > counts[best]) best = l;  // ties keep the smallest label
  return static_cast<SentimentLabel>(best);
}

EnsembleReport vote_events(const corpus::Corpus& corpus,
                           std::span<const EdMethodRun> runs,
                           std::span<const SentimentPredictor> models,
                           int threads) {
  if (models.empty())
    throw Error("ensemble.no_models", "at least one SA model is required");

  std::unordered_map<uint64_t, const corpus::Tweet*> by_id;
  for (const auto& t : corpus.tweets) by_id.emplace(t.id, &t);

  // SATP token cache per distinct pipeline over the tweets any event uses.
  std::vector<uint64_t> needed;
  for (const auto& run : runs)
    for (const auto& e : run.events)
      needed.insert(needed.end(), e.tweet_ids.begin(), e.tweet_ids.end());
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

  std::map<preprocess::Pipeline,
           std::unordered_map<uint64_t, std::vector<std::string>>>
      token_cache;
  for (const auto& m : models) token_cache[m.satp];
  for (auto& [pipe, cache] : token_cache) {
    auto spec = preprocess::PipelineSpec::resolve(pipe);
    std::vector<std::vector<std::string>> slots(needed.size());
    parallel_for(needed.size(), threads, [&](size_t i) {
      auto it = by_id.find(needed[i]);
      if (it != by_id.end())
        slots[i] = preprocess::apply_pipeline_text(it->second->raw_text, spec);
    });
    for (size_t i = 0; i < needed.size(); ++i)
      cache.emplace(needed[i], std::move(slots[i]));
  }

  EnsembleReport report;
  for (const auto& run : runs) {
    MethodReport mr;
    mr.method = run.method;
    for (const auto& event : run.events) {
      // member docs; ids outside the corpus are a contract violation
      std::vector<const corpus::Tweet*> docs;
      for (uint64_t id : event.tweet_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
          throw Error("ensemble.unknown_tweet",
                      "event references tweet " + std::to_string(id) +
                          " not present in the corpus");
        docs.push_back(it->second);
      }
      if (docs.empty()) {
        report.warnings.push_back(
            std::string(events::method_name(run.method)) +
            ": event dropped, no member tweets after preprocessing");
        continue;
      }

      // predictions[model][doc]
      std::vector<std::vector<SentimentLabel>> predictions(
          models.size(), std::vector<SentimentLabel>(docs.size()));
      parallel_for(models.size() * docs.size(), threads, [&](size_t cell) {
        size_t mi = cell / docs.size();
        size_t di = cell % docs.size();
        const auto& model = models[mi];
        const auto& tokens = token_cache.at(model.satp).at(docs[di]->id);
        predictions[mi][di] = model.predict(tokens, *docs[di]).label;
      });

      EventVote ev;
      ev.event = event;
      std::vector<SentimentLabel> event_votes;
      for (size_t mi = 0; mi < models.size(); ++mi) {
        SentimentLabel s_f = mode(predictions[mi]);
        ev.per_model.push_back({models[mi].name, s_f});
        event_votes.push_back(s_f);
      }
      ev.vote = mode(event_votes);

      for (size_t di = 0; di < docs.size(); ++di) {
        TweetVote tv;
        tv.tweet_id = docs[di]->id;
        std::vector<SentimentLabel> across;
        for (size_t mi = 0; mi < models.size(); ++mi) {
          across.push_back(predictions[mi][di]);
          tv.per_model.push_back({models[mi].name, predictions[mi][di]});
        }
        tv.vote = mode(across);
        ev.tweets.push_back(std::move(tv));
      }
      mr.events.push_back(std::move(ev));
    }
    report.methods.push_back(std::move(mr));
  }
  return report;
}

EnsembleReport run_edsa(const corpus::Corpus& corpus, const EdConfig& config,
                        std::span<const SentimentPredictor> models,
                        int threads) {
  // EDTP: the CT pipeline for every detector.
  auto ct = preprocess::apply_pipeline(
      corpus, preprocess::PipelineSpec::resolve(preprocess::Pipeline::CT));
  events::TimeSlices slices =
      events::make_slices(corpus, ct, config.num_slices);

  std::vector<EdMethodRun> runs;
  for (events::Method m : config.methods) {
    EdMethodRun run;
    run.method = m;
    switch (m) {
      case events::Method::MABED:
        run.events = events::mabed_detect(slices, config.mabed);
        break;
      case events::Method::OLDA:
        run.events = events::olda_detect(slices, config.olda);
        break;
      case events::Method::PeakyTopics:
        run.events = events::peaky_detect(slices, config.peaky);
        break;
    }
    runs.push_back(std::move(run));
  }
  return vote_events(corpus, runs, models, threads);
}

namespace {

const char* label_str(SentimentLabel l) {
  return corpus::label_name(l).data();
}

}  // namespace

std::string report_to_json(const EnsembleReport& report,
                           std::string_view config_hash) {
  nlohmann::ordered_json root;
  root["config_hash"] = std::string(config_hash);
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& mr : report.methods) {
    nlohmann::ordered_json mj;
    mj["name"] = events::method_name(mr.method);
    nlohmann::ordered_json evs = nlohmann::ordered_json::array();
    for (const auto& ev : mr.events) {
      nlohmann::ordered_json ej;
      nlohmann::ordered_json kws = nlohmann::ordered_json::array();
      for (const auto& [term, w] : ev.event.keywords) kws.push_back(term);
      ej["keywords"] = std::move(kws);
      ej["interval"] = {ev.event.start_ts, ev.event.end_ts};
      ej["magnitude"] = ev.event.magnitude;
      ej["vote"] = label_str(ev.vote);
      nlohmann::ordered_json pm;
      for (const auto& [name, label] : ev.per_model) pm[name] = label_str(label);
      ej["per_model"] = std::move(pm);
      nlohmann::ordered_json tws = nlohmann::ordered_json::array();
      for (const auto& tv : ev.tweets) {
        nlohmann::ordered_json tj;
        tj["id"] = tv.tweet_id;
        tj["vote"] = label_str(tv.vote);
        nlohmann::ordered_json tpm;
        for (const auto& [name, label] : tv.per_model)
          tpm[name] = label_str(label);
        tj["per_model"] = std::move(tpm);
        tws.push_back(std::move(tj));
      }
      ej["tweets"] = std::move(tws);
      evs.push_back(std::move(ej));
    }
    mj["events"] = std::move(evs);
    methods.push_back(std::move(mj));
  }
  root["methods"] = std::move(methods);
  root["warnings"] = report.warnings;
  return root.dump(2) + "\n";
}

std::string report_to_csv(const EnsembleReport& report) {
  // one row per event and per tweet; model columns follow the first
  // method's model order
  std::vector<std::string> model_names;
  for (const auto& mr : report.methods) {
    for (const auto& ev : mr.events) {
      for (const auto& [name, _] : ev.per_model) model_names.push_back(name);
      break;
    }
    if (!model_names.empty()) break;
  }
  std::string out = "method,event,scope,tweet_id,magnitude,vote";
  for (const auto& name : model_names) out += "," + name;
  out += "\n";
  char buf[64];
  for (const auto& mr : report.methods) {
    size_t ei = 0;
    for (const auto& ev : mr.events) {
      std::snprintf(buf, sizeof(buf), "%.6g", ev.event.magnitude);
      out += std::string(events::method_name(mr.method)) + "," +
             std::to_string(ei) + ",event,," + buf + "," +
             label_str(ev.vote);
      for (const auto& [_, label] : ev.per_model)
        out += std::string(",") + label_str(label);
      out += "\n";
      for (const auto& tv : ev.tweets) {
        out += std::string(events::method_name(mr.method)) + "," +
               std::to_string(ei) + ",tweet," + std::to_string(tv.tweet_id) +
               ",," + label_str(tv.vote);
        for (const auto& [_, label] : tv.per_model)
          out += std::string(",") + label_str(label);
        out += "\n";
      }
      ++ei;
    }
  }
  return out;
}

}  // namespace edsa::ensemble
