#pragma once
// Event domain types: a predicate plus role-labeled arguments, the unit over
// which causality relations are defined and matched.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crk {

enum class Role : int {
  nominative = 0,
  accusative = 1,
  dative = 2,
  instrumental = 3,
  locative = 4,
};

constexpr int kRoleCount = 5;

// Throws Error(invalid) for anything but the five case labels.
Role role_from_string(std::string_view label);
const char* role_name(Role role);

struct Argument {
  Role role;
  std::string lemma;

  bool operator==(const Argument&) const = default;
};

// Canonical form: predicate and lemmas are normalize_text()'d and arguments
// are held sorted by role. Build events through make_event so the invariants
// (non-empty predicate, <=1 argument per role, <=5 arguments) hold.
struct Event {
  std::string predicate;
  std::vector<Argument> arguments;

  bool operator==(const Event&) const = default;
};

// Validates and canonicalizes. Throws Error(invalid) on empty predicate or
// lemma (after normalization) and on duplicate roles.
Event make_event(std::string_view predicate,
                 std::vector<std::pair<Role, std::string>> arguments = {});

// Deterministic lookup key; equal events produce equal keys and distinct
// events distinct keys ('\\', '|' and ':' are escaped inside components).
// Example: predicate "relieve" + accusative "stress" -> "relieve|accusative:stress".
std::string event_key(const Event& event);

// Key for an ordered (cause, effect) pair, used by the exact-match table.
std::string pair_key(const Event& cause, const Event& effect);

}  // namespace crk
