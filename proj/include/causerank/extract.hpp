#pragma once
// Pluggable event extraction from utterance text. Real pipelines feed
// pre-annotated events from an external parser; the rule-based extractor
// exists so fixtures and end-to-end runs are self-contained.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "causerank/event.hpp"

namespace crk {

enum class ExtractorKind { preannotated, rulebased };

struct ExtractorSpec {
  ExtractorKind kind = ExtractorKind::preannotated;
  // rulebased resources
  std::set<std::string> predicate_lexicon;
  std::map<std::string, Role> role_markers;  // marker token suffix -> role
};

// One lemma per line; '#' comments and blank lines are skipped.
std::set<std::string> load_predicate_lexicon(const std::string& path);

// TSV: marker \t role (one of the five case labels).
std::map<std::string, Role> load_role_markers(const std::string& path);

// Rule-based extraction over whitespace tokens, left to right:
//   - a token "lemma/MARKER" whose MARKER appears in the role map is an
//     argument; it attaches to the most recently opened event, or is held
//     and attaches to the next event when none is open yet
//   - a plain token found in the lexicon opens a new event
//   - a second argument with an already-filled role is dropped
// Other tokens are ignored. Deterministic and total on valid input.
std::vector<Event> extract_rule_based(std::string_view utterance, const ExtractorSpec& spec);

}  // namespace crk
