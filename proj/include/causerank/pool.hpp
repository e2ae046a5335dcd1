#pragma once
// Causality pair pool: ingestion, validation and serialization of the
// cause -> effect knowledge file.
//
// File format (UTF-8, LF, '#' starts a comment line):
//   pred1 \t arg1 \t pred2 \t arg2 \t lift
// An argument field is "-" (no arguments) or one or more "role:lemma"
// tokens joined by '|'. lift must parse as a finite real > 1.

#include <cstdint>
#include <string>
#include <vector>

#include "causerank/event.hpp"

namespace crk {

struct CausalityPair {
  Event cause;
  Event effect;
  double lift = 0.0;
};

enum class Strictness { strict, lenient };

struct PoolMetadata {
  std::string source;
  size_t parsed_lines = 0;     // data lines accepted by the parser
  size_t skipped_lines = 0;    // malformed lines skipped in lenient mode
  size_t collapsed = 0;        // duplicate (cause, effect) keys folded away
  std::vector<std::string> warnings;
};

// Immutable after ingestion; safe for concurrent shared reads.
struct CausalityPool {
  std::vector<CausalityPair> entries;
  PoolMetadata meta;
};

// Duplicate (cause, effect) keys collapse keeping the maximum lift. In strict
// mode the first malformed line raises Error(parse/invalid); lenient mode
// skips it and records a warning.
CausalityPool load_causality_pairs(const std::string& path, Strictness strictness);

// Parses pool content from a string (same rules as the file loader).
CausalityPool parse_causality_pairs(const std::string& content, Strictness strictness,
                                    const std::string& source_name = "<memory>");

// Builds a pool from in-memory pairs, applying the same validation and
// keep-max-lift duplicate collapse as ingestion.
CausalityPool make_pool(std::vector<CausalityPair> pairs);

// Writes the TSV form; reingesting the output reproduces the pool exactly.
void save_causality_pairs(const CausalityPool& pool, const std::string& path);
std::string serialize_causality_pairs(const CausalityPool& pool);

// Content checksum over entry keys and lift bits, independent of metadata.
uint64_t pool_checksum(const CausalityPool& pool);

}  // namespace crk
