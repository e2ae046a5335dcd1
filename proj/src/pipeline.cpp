#include "causerank/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/metrics.hpp"
#include "causerank/pmi.hpp"
#include "causerank/rerank.hpp"
#include "causerank/serde.hpp"
#include "causerank/text.hpp"

namespace crk {

using nlohmann::json;

std::vector<std::string> parallel_map_ordered(size_t count, int parallelism,
                                              const std::function<std::string(size_t)>& fn) {
  std::vector<std::string> results(count);
  if (parallelism <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      results[i] = fn(i);
    }
  };
  std::vector<std::thread> threads;
  size_t n_threads = std::min<size_t>(parallelism, count);
  threads.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

Resources load_resources(const RunConfig& config, bool want_index, bool write_cache) {
  Resources res;
  res.pool = std::make_shared<CausalityPool>(load_causality_pairs(
      config.pool, config.pool_strict ? Strictness::strict : Strictness::lenient));

  res.argument_store = std::make_shared<VectorStore>(
      load_vectors(config.vectors.arguments, config.vectors.dim));
  if (!config.vectors.predicates.empty()) {
    res.predicate_store = std::make_shared<VectorStore>(
        load_vectors(config.vectors.predicates, config.vectors.dim));
  }

  if (config.weights.seed) {
    res.weights = std::make_shared<RftmWeights>(
        init_random_weights(config.vectors.dim, *config.weights.seed));
  } else {
    auto w = std::make_shared<RftmWeights>(load_weights(config.weights.path));
    if (w->dim != config.vectors.dim) {
      fail(ErrorCode::dimension, "weight container dimension " + std::to_string(w->dim) +
                                     " does not match vectors.dim " +
                                     std::to_string(config.vectors.dim));
    }
    res.weights = std::move(w);
  }

  res.embedder = std::make_shared<RftmEmbedder>(res.weights, res.predicate_store,
                                                res.argument_store, config.vectors.oov_policy);

  if (config.extractor.kind == "rulebased") {
    res.extractor.kind = ExtractorKind::rulebased;
    res.extractor.predicate_lexicon = load_predicate_lexicon(config.extractor.lexicon);
    if (!config.extractor.role_markers.empty()) {
      res.extractor.role_markers = load_role_markers(config.extractor.role_markers);
    }
  }

  if (want_index) {
    bool opened = false;
    if (!config.index_cache.empty() && std::filesystem::exists(config.index_cache)) {
      try {
        res.index = std::make_shared<CausalityIndex>(
            CausalityIndex::open(res.pool, *res.embedder, config.index_cache));
        opened = true;
      } catch (const Error&) {
        opened = false;  // stale or corrupted cache; rebuild below
      }
    }
    if (!opened) {
      res.index = std::make_shared<CausalityIndex>(
          CausalityIndex::build(res.pool, *res.embedder, config.parallelism));
      if (write_cache && !config.index_cache.empty()) {
        res.index->save(config.index_cache);
      }
    }
  }
  return res;
}

namespace {

char hex_digit(uint64_t v) { return "0123456789abcdef"[v & 0xF]; }

std::string hex64(uint64_t v) {
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex_digit(v);
    v >>= 4;
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::string content = read_file(path);
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::unique_ptr<Matcher> make_matcher(const Resources& res, const RerankConfig& cfg) {
  if (cfg.matcher == MatcherKind::exact) {
    return std::make_unique<ExactMatcher>(res.index, cfg.match);
  }
  return std::make_unique<EmbeddedMatcher>(res.index, res.embedder, cfg.match);
}

}  // namespace

json run_build_index(const RunConfig& config) {
  validate_config(config, Command::build_index);
  Resources res = load_resources(config, /*want_index=*/false, /*write_cache=*/false);
  auto index = CausalityIndex::build(res.pool, *res.embedder, config.parallelism);
  index.save(config.index_cache);

  json report;
  report["schema"] = kIndexSchema;
  report["pool"] = config.pool;
  report["entries"] = index.entry_count();
  report["embedded"] = index.embedded_count();
  report["embed_failures"] = index.embed_failures();
  report["collapsed_duplicates"] = res.pool->meta.collapsed;
  report["cache"] = config.index_cache;
  report["pool_checksum"] = hex64(index.pool_checksum());
  report["weights_checksum"] = hex64(index.weights_checksum());
  return report;
}

json run_rerank(const RunConfig& config) {
  validate_config(config, Command::rerank);
  Resources res = load_resources(config, /*want_index=*/true, /*write_cache=*/true);
  std::unique_ptr<Matcher> matcher = make_matcher(res, config.rerank);

  const ExtractorSpec* extractor =
      config.rerank.extract_missing_events && res.extractor.kind == ExtractorKind::rulebased
          ? &res.extractor
          : nullptr;

  std::vector<std::string> lines = read_lines(config.input);
  std::atomic<size_t> failed{0};
  std::atomic<size_t> reranked{0};

  auto process = [&](size_t i) -> std::string {
    if (normalize_text(lines[i]).empty()) return "";
    std::string item_id;
    try {
      json j = json::parse(lines[i]);
      if (j.contains("id") && j["id"].is_string()) item_id = j["id"].get<std::string>();
      RerankItem item = item_from_json(j, extractor);
      RerankResult result = rerank(item, *matcher, config.rerank);
      if (result.reranked) reranked.fetch_add(1);
      return rerank_result_to_json(result, item, res.index.get()).dump();
    } catch (const std::exception& e) {
      failed.fetch_add(1);
      json err;
      err["schema"] = kErrorSchema;
      err["line"] = i + 1;
      err["id"] = item_id;
      err["error"] = e.what();
      return err.dump();
    }
  };

  std::vector<std::string> out_lines =
      parallel_map_ordered(lines.size(), config.parallelism, process);

  std::string out;
  size_t items = 0;
  for (const std::string& line : out_lines) {
    if (line.empty()) continue;
    ++items;
    out += line;
    out += '\n';
  }
  write_file(config.output, out);

  json summary;
  summary["schema"] = kRerankSchema;
  summary["items"] = items;
  summary["failed"] = failed.load();
  summary["reranked"] = reranked.load();
  size_t ok = items - failed.load();
  summary["reranked_ratio"] =
      ok > 0 ? static_cast<double>(reranked.load()) / static_cast<double>(ok) : 0.0;
  summary["output"] = config.output;
  if (failed.load() > 0) {
    fail(ErrorCode::item, "rerank: " + std::to_string(failed.load()) + " of " +
                              std::to_string(items) + " items failed; summary: " +
                              summary.dump());
  }
  return summary;
}

namespace {

// Metric row for one system (a list of responses aligned with references).
json system_metrics(const std::vector<EvalPair>& pairs,
                    const std::vector<Tokens>& responses, const VectorStore& store,
                    const PmiTable& pmi_table, const MetricsConfig& cfg) {
  std::vector<std::pair<Tokens, Tokens>> ref_hyp;
  ref_hyp.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    ref_hyp.emplace_back(pairs[i].reference, responses[i]);
  }

  json row;
  row["bleu"] = bleu(ref_hyp, cfg.bleu_max_n);
  row["nist"] = nist(ref_hyp, cfg.nist_max_n);

  double extrema_sum = 0.0;
  size_t extrema_count = 0, extrema_skipped = 0;
  for (const auto& [ref, hyp] : ref_hyp) {
    try {
      extrema_sum += extrema_score(ref, hyp, store);
      ++extrema_count;
    } catch (const Error&) {
      ++extrema_skipped;  // no in-vocabulary token on one side
    }
  }
  row["extrema"] = extrema_count > 0 ? json(extrema_sum / static_cast<double>(extrema_count))
                                     : json(nullptr);
  row["extrema_skipped"] = extrema_skipped;

  row["dist1"] = dist_n(responses, 1);
  row["dist2"] = dist_n(responses, 2);

  double pmi_sum = 0.0;
  size_t pmi_count = 0, pmi_skipped = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    Tokens history_words;
    for (const Tokens& turn : pairs[i].history) {
      history_words.insert(history_words.end(), turn.begin(), turn.end());
    }
    if (responses[i].empty() || history_words.empty()) {
      ++pmi_skipped;
      continue;
    }
    pmi_sum += pmi_score(responses[i], history_words, pmi_table);
    ++pmi_count;
  }
  row["pmi"] = pmi_count > 0 ? json(pmi_sum / static_cast<double>(pmi_count)) : json(nullptr);
  row["pmi_skipped"] = pmi_skipped;

  row["length"] = avg_length(responses);
  return row;
}

}  // namespace

json run_evaluate(const RunConfig& config) {
  validate_config(config, Command::evaluate);
  auto store = load_vectors(config.vectors.arguments, config.vectors.dim);

  std::vector<EvalPair> pairs;
  std::vector<std::string> lines = read_lines(config.input);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (normalize_text(lines[i]).empty()) continue;
    try {
      pairs.push_back(eval_pair_from_json(json::parse(lines[i])));
    } catch (const std::exception& e) {
      fail(ErrorCode::parse,
           config.input + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (pairs.empty()) fail(ErrorCode::invalid, "evaluation input has no records");

  // PMI statistics from the evaluation corpus itself: (history, reference)
  // pairs. The original statistics corpus is unspecified upstream, so the
  // absolute PMI scale is only meaningful within one report.
  std::vector<std::pair<Tokens, Tokens>> pmi_corpus;
  pmi_corpus.reserve(pairs.size());
  for (const EvalPair& p : pairs) {
    Tokens history_words;
    for (const Tokens& turn : p.history) {
      history_words.insert(history_words.end(), turn.begin(), turn.end());
    }
    pmi_corpus.emplace_back(std::move(history_words), p.reference);
  }
  PmiTable pmi_table = build_pmi_table(pmi_corpus, config.metrics.pmi_smoothing);

  std::vector<Tokens> before, after, reference;
  for (const EvalPair& p : pairs) {
    before.push_back(p.before);
    after.push_back(p.after);
    reference.push_back(p.reference);
  }

  size_t changed = 0;
  for (const EvalPair& p : pairs) {
    if (p.before != p.after) ++changed;
  }

  json report;
  report["schema"] = kEvalSchema;
  report["items"] = pairs.size();
  report["reranked"] = changed;
  report["reranked_ratio"] = static_cast<double>(changed) / static_cast<double>(pairs.size());
  report["systems"]["before"] =
      system_metrics(pairs, before, store, pmi_table, config.metrics);
  report["systems"]["after"] = system_metrics(pairs, after, store, pmi_table, config.metrics);
  report["systems"]["reference"] =
      system_metrics(pairs, reference, store, pmi_table, config.metrics);

  bool any_nbest = false;
  for (const EvalPair& p : pairs) {
    if (!p.nbest.empty()) any_nbest = true;
  }
  if (any_nbest) {
    std::vector<std::vector<Tokens>> lists;
    for (const EvalPair& p : pairs) {
      if (!p.nbest.empty()) lists.push_back(p.nbest);
    }
    report["nbest"]["lists"] = lists.size();
    report["nbest"]["avg_dist1"] = avg_internal_dist(lists, 1);
    report["nbest"]["avg_dist2"] = avg_internal_dist(lists, 2);
  }

  if (!config.output.empty()) {
    if (config.report == "json") {
      write_file(config.output, report.dump() + "\n");
    } else {
      write_file(config.output, render_eval_text(report));
    }
  }
  return report;
}

json run_inspect_match(const RunConfig& config, const std::string& history_event_json,
                       const std::string& response_event_json) {
  validate_config(config, Command::inspect_match);
  Resources res = load_resources(config, /*want_index=*/true, /*write_cache=*/false);

  Event h = event_from_json(json::parse(history_event_json));
  Event r = event_from_json(json::parse(response_event_json));

  MatchResult result = config.rerank.matcher == MatcherKind::exact
                           ? exact_lift(h, r, *res.index, config.rerank.match)
                           : lift_emb(h, r, *res.index, config.rerank.match, *res.embedder);
  json j = match_result_to_json(result, res.index.get());
  j["schema"] = "causerank.match.v1";
  j["history_event"] = event_to_json(h);
  j["response_event"] = event_to_json(r);
  return j;
}

std::string render_eval_text(const json& report) {
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v.get<double>());
    return buf;
  };

  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %12s %8s %8s %8s %8s %8s %8s %8s\n", "system",
                "re-ranked(%)", "BLEU", "NIST", "extrema", "dist-1", "dist-2", "PMI", "length");
  out += line;
  double ratio = report.at("reranked_ratio").get<double>() * 100.0;
  const json& systems = report.at("systems");
  for (const char* name : {"reference", "before", "after"}) {
    const json& row = systems.at(name);
    std::string rr = "-";
    if (std::string(name) == "after") {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", ratio);
      rr = buf;
    }
    std::snprintf(line, sizeof(line), "%-10s %12s %8s %8s %8s %8s %8s %8s %8s\n", name,
                  rr.c_str(), cell(row.at("bleu")).c_str(), cell(row.at("nist")).c_str(),
                  cell(row.at("extrema")).c_str(), cell(row.at("dist1")).c_str(),
                  cell(row.at("dist2")).c_str(), cell(row.at("pmi")).c_str(),
                  cell(row.at("length")).c_str());
    out += line;
  }
  if (report.contains("nbest")) {
    const json& nb = report.at("nbest");
    std::snprintf(line, sizeof(line), "nbest: lists=%zu avg_dist1=%s avg_dist2=%s\n",
                  nb.at("lists").get<size_t>(), cell(nb.at("avg_dist1")).c_str(),
                  cell(nb.at("avg_dist2")).c_str());
    out += line;
  }
  return out;
}

}  // namespace crk
