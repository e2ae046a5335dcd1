#include "causerank/event.hpp"

#include <algorithm>
#include <array>

#include "causerank/error.hpp"
#include "causerank/text.hpp"

namespace crk {

namespace {

constexpr std::array<const char*, kRoleCount> kRoleNames = {
    "nominative", "accusative", "dative", "instrumental", "locative"};

void append_escaped(std::string& out, std::string_view component) {
  for (char c : component) {
    if (c == '\\' || c == '|' || c == ':') out.push_back('\\');
    out.push_back(c);
  }
}

}  // namespace

Role role_from_string(std::string_view label) {
  std::string folded = ascii_lower(normalize_text(label));
  for (int i = 0; i < kRoleCount; ++i) {
    if (folded == kRoleNames[i]) return static_cast<Role>(i);
  }
  fail(ErrorCode::invalid, "unknown role label: '" + std::string(label) + "'");
}

const char* role_name(Role role) { return kRoleNames[static_cast<int>(role)]; }

Event make_event(std::string_view predicate,
                 std::vector<std::pair<Role, std::string>> arguments) {
  Event event;
  event.predicate = normalize_text(predicate);
  if (event.predicate.empty()) {
    fail(ErrorCode::invalid, "event predicate is empty after normalization");
  }
  if (arguments.size() > static_cast<size_t>(kRoleCount)) {
    fail(ErrorCode::invalid, "event has more than " + std::to_string(kRoleCount) + " arguments");
  }
  event.arguments.reserve(arguments.size());
  for (auto& [role, lemma] : arguments) {
    std::string norm = normalize_text(lemma);
    if (norm.empty()) {
      fail(ErrorCode::invalid, "argument lemma is empty after normalization (role " +
                                   std::string(role_name(role)) + ")");
    }
    event.arguments.push_back(Argument{role, std::move(norm)});
  }
  std::sort(event.arguments.begin(), event.arguments.end(),
            [](const Argument& a, const Argument& b) { return a.role < b.role; });
  for (size_t i = 1; i < event.arguments.size(); ++i) {
    if (event.arguments[i].role == event.arguments[i - 1].role) {
      fail(ErrorCode::invalid, "duplicate argument role: " +
                                   std::string(role_name(event.arguments[i].role)));
    }
  }
  return event;
}

std::string event_key(const Event& event) {
  std::string key;
  key.reserve(event.predicate.size() + 16 * event.arguments.size());
  append_escaped(key, event.predicate);
  for (const Argument& arg : event.arguments) {
    key.push_back('|');
    key.append(role_name(arg.role));
    key.push_back(':');
    append_escaped(key, arg.lemma);
  }
  return key;
}

std::string pair_key(const Event& cause, const Event& effect) {
  return event_key(cause) + '\t' + event_key(effect);
}

}  // namespace crk
