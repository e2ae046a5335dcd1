// causerank command-line tool. Talks to the shared library exclusively
// through the C API in causerank.h; everything here is argument parsing,
// config assembly, and printing.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "causerank.h"

namespace {

using nlohmann::json;

constexpr const char* kConfigEnvVar = "CAUSERANK_CONFIG";

json load_config_file(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
      path = env;
    }
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    std::exit(CRK_ERR_IO);
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    std::cerr << "error: config file " << path << ": " << e.what() << "\n";
    std::exit(CRK_ERR_PARSE);
  }
}

// Flags patch the config document; unset flags leave file values alone.
struct Overrides {
  std::optional<std::string> pool, input, output, index_cache, arg_vectors, pred_vectors;
  std::optional<std::string> weights_path, matcher, objective, search, report, extractor_kind;
  std::optional<std::string> lexicon, role_markers;
  std::optional<uint64_t> weights_seed;
  std::optional<size_t> dim;
  std::optional<double> lambda, threshold, default_lift, min_effective_lift, pmi_smoothing;
  std::optional<int> history_window, parallelism;
  std::optional<bool> allow_inverse, pool_strict, extract_missing;

  void apply(json& cfg) const {
    auto set = [&cfg](const char* key, const auto& opt) {
      if (opt) cfg[key] = *opt;
    };
    auto set_nested = [&cfg](const char* group, const char* key, const auto& opt) {
      if (opt) cfg[group][key] = *opt;
    };
    set("pool", pool);
    set("pool_strict", pool_strict);
    set("input", input);
    set("output", output);
    set("index_cache", index_cache);
    set("parallelism", parallelism);
    set("report", report);
    set_nested("vectors", "arguments", arg_vectors);
    set_nested("vectors", "predicates", pred_vectors);
    set_nested("vectors", "dim", dim);
    set_nested("weights", "path", weights_path);
    set_nested("weights", "seed", weights_seed);
    set_nested("rerank", "lambda", lambda);
    set_nested("rerank", "history_window", history_window);
    set_nested("rerank", "matcher", matcher);
    set_nested("rerank", "extract_missing_events", extract_missing);
    set_nested("match", "similarity_threshold", threshold);
    set_nested("match", "default_lift", default_lift);
    set_nested("match", "min_effective_lift", min_effective_lift);
    set_nested("match", "allow_inverse", allow_inverse);
    set_nested("match", "objective", objective);
    set_nested("match", "search", search);
    set_nested("extractor", "kind", extractor_kind);
    set_nested("extractor", "lexicon", lexicon);
    set_nested("extractor", "role_markers", role_markers);
    set_nested("metrics", "pmi_smoothing", pmi_smoothing);
  }
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option("--config", config_path,
                  "config JSON file (default: $" + std::string(kConfigEnvVar) + ")");
  cmd->add_option("--pool", ov.pool, "causality pair TSV");
  cmd->add_flag("--pool-strict,!--pool-lenient", ov.pool_strict,
                "fail on the first malformed pool line");
  cmd->add_option("--arg-vectors", ov.arg_vectors, "argument/word vector file");
  cmd->add_option("--pred-vectors", ov.pred_vectors, "separate predicate vector file");
  cmd->add_option("--dim", ov.dim, "vector dimension (default 100)");
  cmd->add_option("--weights", ov.weights_path, "RFTM weight container");
  cmd->add_option("--weights-seed", ov.weights_seed, "deterministic synthetic weights seed");
  cmd->add_option("--index-cache", ov.index_cache, "index cache file");
  cmd->add_option("--parallelism", ov.parallelism, "worker threads (default 1)");
  cmd->add_option("--threshold", ov.threshold, "similarity threshold (default sqrt(3)/2)");
  cmd->add_option("--default-lift", ov.default_lift, "lift for unmatched pairs (default 2)");
  cmd->add_option("--min-effective-lift", ov.min_effective_lift, "clamp floor (default 2)");
  cmd->add_flag("--inverse,!--no-inverse", ov.allow_inverse,
                "also match with cause/effect exchanged (default on)");
  cmd->add_option("--objective", ov.objective, "embedded objective: lift_emb|mean_sim");
  cmd->add_option("--search", ov.search, "embedded search path: pruned|brute");
}

int report_error(const char* what, crk_status status) {
  std::cerr << "error (" << crk_status_name(status) << "): " << what << ": "
            << crk_last_error() << "\n";
  return static_cast<int>(status);
}

int print_report(char* report_json, const std::string& report_kind) {
  std::string text = report_json ? report_json : "";
  crk_string_free(report_json);
  if (report_kind == "text") {
    char* rendered = nullptr;
    if (crk_render_eval_text(text.c_str(), &rendered) == CRK_OK) {
      std::cout << rendered;
      crk_string_free(rendered);
      return 0;
    }
  }
  std::cout << text << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causerank: re-rank N-best dialogue responses with event causality"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(crk_version()));

  std::string config_path;
  Overrides ov;

  auto* build = app.add_subcommand("build-index", "embed the causality pool and write the cache");
  add_common_flags(build, config_path, ov);

  auto* rerank = app.add_subcommand("rerank", "re-rank N-best items from a JSONL file");
  add_common_flags(rerank, config_path, ov);
  rerank->add_option("--input", ov.input, "input JSONL of items");
  rerank->add_option("--output", ov.output, "output JSONL path");
  rerank->add_option("--lambda", ov.lambda, "causality weight exponent (default 1)");
  rerank->add_option("--history-window", ov.history_window, "history utterances used (default 5)");
  rerank->add_option("--matcher", ov.matcher, "exact|embedded (default embedded)");
  rerank->add_flag("--extract-missing", ov.extract_missing,
                   "run the extractor on records lacking events");
  rerank->add_option("--extractor", ov.extractor_kind, "preannotated|rulebased");
  rerank->add_option("--lexicon", ov.lexicon, "predicate lexicon for the rule-based extractor");
  rerank->add_option("--role-markers", ov.role_markers, "marker TSV for the rule-based extractor");

  auto* evaluate = app.add_subcommand("evaluate", "metric report over an evaluation JSONL");
  add_common_flags(evaluate, config_path, ov);
  evaluate->add_option("--input", ov.input, "evaluation JSONL");
  evaluate->add_option("--output", ov.output, "write the report here as well");
  evaluate->add_option("--report", ov.report, "text|json (default text)");
  evaluate->add_option("--pmi-smoothing", ov.pmi_smoothing, "PMI add-s smoothing (default 1)");

  auto* inspect = app.add_subcommand("inspect-match",
                                     "print the MatchResult for two event JSON documents");
  add_common_flags(inspect, config_path, ov);
  inspect->add_option("--matcher", ov.matcher, "exact|embedded (default embedded)");
  std::string event_h, event_r;
  inspect->add_option("history-event", event_h, "history event JSON")->required();
  inspect->add_option("response-event", event_r, "response event JSON")->required();

  auto* gen = app.add_subcommand("gen-weights", "write a deterministic synthetic weight container");
  size_t gen_dim = 100;
  uint64_t gen_seed = 1;
  std::string gen_out, gen_json;
  gen->add_option("--dim", gen_dim, "dimension (default 100)");
  gen->add_option("--seed", gen_seed, "RNG seed (default 1)");
  gen->add_option("--out", gen_out, "output weight container")->required();
  gen->add_option("--json", gen_json, "also write a JSON debug dump here");

  CLI11_PARSE(app, argc, argv);

  json cfg = load_config_file(config_path);
  ov.apply(cfg);
  std::string cfg_text = cfg.dump();

  if (build->parsed()) {
    char* report = nullptr;
    crk_status s = crk_run_build_index(cfg_text.c_str(), &report);
    if (s != CRK_OK) return report_error("build-index", s);
    std::cout << (report ? report : "") << "\n";
    crk_string_free(report);
    return 0;
  }

  if (rerank->parsed()) {
    char* report = nullptr;
    crk_status s = crk_run_rerank(cfg_text.c_str(), &report);
    if (s == CRK_OK) {
      std::cout << (report ? report : "") << "\n";
      crk_string_free(report);
      return 0;
    }
    crk_string_free(report);
    return report_error("rerank", s);
  }

  if (evaluate->parsed()) {
    char* report = nullptr;
    crk_status s = crk_run_evaluate(cfg_text.c_str(), &report);
    if (s != CRK_OK) return report_error("evaluate", s);
    std::string kind = cfg.contains("report") ? cfg["report"].get<std::string>() : "text";
    return print_report(report, kind);
  }

  if (inspect->parsed()) {
    char* result = nullptr;
    crk_status s = crk_run_inspect_match(cfg_text.c_str(), event_h.c_str(), event_r.c_str(),
                                         &result);
    if (s != CRK_OK) return report_error("inspect-match", s);
    std::cout << (result ? result : "") << "\n";
    crk_string_free(result);
    return 0;
  }

  if (gen->parsed()) {
    crk_weights* weights = nullptr;
    crk_status s = crk_weights_random(gen_dim, gen_seed, &weights);
    if (s != CRK_OK) return report_error("gen-weights", s);
    s = crk_weights_save(weights, gen_out.c_str());
    if (s != CRK_OK) {
      crk_weights_free(weights);
      return report_error("gen-weights", s);
    }
    if (!gen_json.empty()) {
      char* dump = nullptr;
      s = crk_weights_export_json(weights, &dump);
      if (s == CRK_OK) {
        std::ofstream out(gen_json, std::ios::trunc);
        out << dump;
        crk_string_free(dump);
      } else {
        crk_weights_free(weights);
        return report_error("gen-weights --json", s);
      }
    }
    std::cout << "wrote " << gen_out << " (dim " << gen_dim << ", seed " << gen_seed << ")\n";
    crk_weights_free(weights);
    return 0;
  }

  return 0;
}
