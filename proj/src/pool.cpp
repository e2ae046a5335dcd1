#include "causerank/pool.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <utility>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/text.hpp"

namespace crk {

namespace {

double parse_lift(const std::string& field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    fail(ErrorCode::parse, "lift is not a number: '" + field + "'");
  }
  if (!std::isfinite(value) || value <= 1.0) {
    fail(ErrorCode::invalid, "lift must be a finite real > 1, got '" + field + "'");
  }
  return value;
}

Event parse_event(const std::string& pred_field, const std::string& arg_field) {
  std::vector<std::pair<Role, std::string>> args;
  std::string trimmed = normalize_text(arg_field);
  if (trimmed.empty()) {
    fail(ErrorCode::parse, "empty argument field (use '-' for no arguments)");
  }
  if (trimmed != "-") {
    for (const std::string& token : split(trimmed, '|')) {
      size_t colon = token.find(':');
      if (colon == std::string::npos) {
        fail(ErrorCode::parse, "argument token lacks 'role:lemma' form: '" + token + "'");
      }
      Role role = role_from_string(token.substr(0, colon));
      args.emplace_back(role, token.substr(colon + 1));
    }
  }
  return make_event(pred_field, std::move(args));
}

struct Collapser {
  std::vector<CausalityPair> entries;
  std::unordered_map<std::string, size_t> by_key;
  size_t collapsed = 0;
  std::vector<std::string> warnings;

  void add(CausalityPair pair) {
    std::string key = pair_key(pair.cause, pair.effect);
    auto [it, inserted] = by_key.try_emplace(std::move(key), entries.size());
    if (inserted) {
      entries.push_back(std::move(pair));
      return;
    }
    ++collapsed;
    CausalityPair& existing = entries[it->second];
    if (pair.lift > existing.lift) existing.lift = pair.lift;
    if (warnings.size() < 100) {
      warnings.push_back("duplicate pair key collapsed: " + event_key(pair.cause) + " -> " +
                         event_key(pair.effect));
    }
  }
};

}  // namespace

CausalityPool parse_causality_pairs(const std::string& content, Strictness strictness,
                                    const std::string& source_name) {
  Collapser collapser;
  PoolMetadata meta;
  meta.source = source_name;

  size_t line_no = 0;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string line = content.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    try {
      std::vector<std::string> fields = split(line, '\t');
      if (fields.size() != 5) {
        fail(ErrorCode::parse,
             "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
      }
      CausalityPair pair;
      pair.cause = parse_event(fields[0], fields[1]);
      pair.effect = parse_event(fields[2], fields[3]);
      pair.lift = parse_lift(fields[4]);
      collapser.add(std::move(pair));
      ++meta.parsed_lines;
    } catch (const Error& e) {
      std::string where = source_name + ":" + std::to_string(line_no) + ": " + e.what();
      if (strictness == Strictness::strict) {
        fail(e.code(), where);
      }
      ++meta.skipped_lines;
      if (meta.warnings.size() < 100) meta.warnings.push_back(where);
    }
  }

  CausalityPool pool;
  pool.entries = std::move(collapser.entries);
  pool.meta = std::move(meta);
  pool.meta.collapsed = collapser.collapsed;
  for (auto& w : collapser.warnings) pool.meta.warnings.push_back(std::move(w));
  return pool;
}

CausalityPool load_causality_pairs(const std::string& path, Strictness strictness) {
  return parse_causality_pairs(read_file(path), strictness, path);
}

CausalityPool make_pool(std::vector<CausalityPair> pairs) {
  Collapser collapser;
  for (CausalityPair& pair : pairs) {
    if (!std::isfinite(pair.lift) || pair.lift <= 1.0) {
      fail(ErrorCode::invalid, "lift must be a finite real > 1");
    }
    // Revalidate through the canonical constructor.
    std::vector<std::pair<Role, std::string>> cause_args, effect_args;
    for (auto& a : pair.cause.arguments) cause_args.emplace_back(a.role, a.lemma);
    for (auto& a : pair.effect.arguments) effect_args.emplace_back(a.role, a.lemma);
    CausalityPair validated;
    validated.cause = make_event(pair.cause.predicate, std::move(cause_args));
    validated.effect = make_event(pair.effect.predicate, std::move(effect_args));
    validated.lift = pair.lift;
    collapser.add(std::move(validated));
  }
  CausalityPool pool;
  pool.entries = std::move(collapser.entries);
  pool.meta.source = "<memory>";
  pool.meta.parsed_lines = pool.entries.size() + collapser.collapsed;
  pool.meta.collapsed = collapser.collapsed;
  pool.meta.warnings = std::move(collapser.warnings);
  return pool;
}

namespace {

void append_event_tsv(std::string& out, const Event& event) {
  out += event.predicate;
  out += '\t';
  if (event.arguments.empty()) {
    out += '-';
  } else {
    for (size_t i = 0; i < event.arguments.size(); ++i) {
      if (i > 0) out += '|';
      out += role_name(event.arguments[i].role);
      out += ':';
      out += event.arguments[i].lemma;
    }
  }
}

}  // namespace

std::string serialize_causality_pairs(const CausalityPool& pool) {
  std::string out;
  for (const CausalityPair& pair : pool.entries) {
    append_event_tsv(out, pair.cause);
    out += '\t';
    append_event_tsv(out, pair.effect);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "\t%.17g\n", pair.lift);
    out += buf;
  }
  return out;
}

void save_causality_pairs(const CausalityPool& pool, const std::string& path) {
  write_file(path, serialize_causality_pairs(pool));
}

uint64_t pool_checksum(const CausalityPool& pool) {
  Fnv1a64 fnv;
  fnv.update_u64(pool.entries.size());
  for (const CausalityPair& pair : pool.entries) {
    fnv.update(pair_key(pair.cause, pair.effect));
    fnv.update_f64(pair.lift);
  }
  return fnv.digest();
}

}  // namespace crk
