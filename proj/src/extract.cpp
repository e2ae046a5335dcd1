#include "causerank/extract.hpp"

#include <utility>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/text.hpp"

namespace crk {

std::set<std::string> load_predicate_lexicon(const std::string& path) {
  std::set<std::string> lexicon;
  for (const std::string& raw : split(read_file(path), '\n')) {
    std::string line = normalize_text(raw);
    if (line.empty() || line[0] == '#') continue;
    lexicon.insert(std::move(line));
  }
  return lexicon;
}

std::map<std::string, Role> load_role_markers(const std::string& path) {
  std::map<std::string, Role> markers;
  size_t line_no = 0;
  for (const std::string& raw : split(read_file(path), '\n')) {
    ++line_no;
    std::string trimmed = raw;
    if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
    if (normalize_text(trimmed).empty() || trimmed[0] == '#') continue;
    std::vector<std::string> fields = split(trimmed, '\t');
    if (fields.size() != 2) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                 ": expected 'marker \\t role'");
    }
    std::string marker = normalize_text(fields[0]);
    if (marker.empty()) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": empty marker");
    }
    markers[marker] = role_from_string(fields[1]);
  }
  return markers;
}

std::vector<Event> extract_rule_based(std::string_view utterance, const ExtractorSpec& spec) {
  if (spec.predicate_lexicon.empty()) {
    fail(ErrorCode::invalid, "rule-based extractor needs a predicate lexicon");
  }

  struct OpenEvent {
    std::string predicate;
    std::vector<std::pair<Role, std::string>> args;
    std::set<Role> roles;
  };
  std::vector<OpenEvent> open;
  std::vector<std::pair<Role, std::string>> pending;
  std::set<Role> pending_roles;

  for (const std::string& token : split_ws(utterance)) {
    std::string norm = normalize_text(token);
    if (norm.empty()) continue;

    size_t slash = norm.rfind('/');
    if (slash != std::string::npos && slash + 1 < norm.size()) {
      auto marker = spec.role_markers.find(norm.substr(slash + 1));
      if (marker != spec.role_markers.end()) {
        Role role = marker->second;
        std::string lemma = norm.substr(0, slash);
        if (lemma.empty()) continue;
        if (!open.empty()) {
          OpenEvent& cur = open.back();
          if (!cur.roles.count(role)) {
            cur.args.emplace_back(role, std::move(lemma));
            cur.roles.insert(role);
          }
        } else if (!pending_roles.count(role)) {
          pending.emplace_back(role, std::move(lemma));
          pending_roles.insert(role);
        }
        continue;
      }
    }

    if (spec.predicate_lexicon.count(norm)) {
      OpenEvent ev;
      ev.predicate = norm;
      for (auto& [role, lemma] : pending) {
        ev.args.emplace_back(role, std::move(lemma));
        ev.roles.insert(role);
      }
      pending.clear();
      pending_roles.clear();
      open.push_back(std::move(ev));
    }
  }

  std::vector<Event> events;
  events.reserve(open.size());
  for (OpenEvent& ev : open) {
    events.push_back(make_event(ev.predicate, std::move(ev.args)));
  }
  return events;
}

}  // namespace crk
