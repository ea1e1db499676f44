#pragma once

/**
 * @file
 * Fault-tree data model and structural validation.
 *
 * A FaultTree is a DAG of gates over basic events. Gate inputs are ordered
 * references to gates or events, each optionally negated. Events and gates
 * keep their declaration order, which later serves as the default BDD
 * variable order.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftkit/error.hpp"
#include "ftkit/event_models.hpp"

namespace ftkit {

using EventId = std::string;
using GateId = std::string;

/// A basic event in positive (failure) or negated (success) polarity.
struct Literal {
  EventId event;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;

  Literal Complement() const { return {event, !negated}; }
};

enum class GateKind { kAnd, kOr, kNot, kNand, kNor, kXor, kAtLeast };

inline std::string_view ToString(GateKind kind) {
  switch (kind) {
    case GateKind::kAnd: return "and";
    case GateKind::kOr: return "or";
    case GateKind::kNot: return "not";
    case GateKind::kNand: return "nand";
    case GateKind::kNor: return "nor";
    case GateKind::kXor: return "xor";
    case GateKind::kAtLeast: return "atleast";
  }
  return "?";
}

inline std::optional<GateKind> GateKindFromString(std::string_view text) {
  for (auto kind : {GateKind::kAnd, GateKind::kOr, GateKind::kNot,
                    GateKind::kNand, GateKind::kNor, GateKind::kXor,
                    GateKind::kAtLeast}) {
    if (ToString(kind) == text) return kind;
  }
  return std::nullopt;
}

/// Reference from a gate to one of its inputs.
struct InputRef {
  std::string id;
  bool negated = false;
  friend bool operator==(const InputRef&, const InputRef&) = default;
};

struct Gate {
  GateKind kind = GateKind::kAnd;
  int k = 0;  ///< Vote threshold; meaningful for kAtLeast only.
  std::vector<InputRef> inputs;
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Insertion-ordered map with unique string keys.
template <typename T>
class OrderedMap {
 public:
  using value_type = std::pair<std::string, T>;

  /// Returns false if the key already exists.
  bool Insert(std::string key, T value) {
    if (index_.count(key)) return false;
    index_.emplace(key, items_.size());
    items_.emplace_back(std::move(key), std::move(value));
    return true;
  }

  const T* Find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &items_[it->second].second;
  }

  std::optional<std::size_t> IndexOf(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool Contains(const std::string& key) const { return index_.count(key); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const value_type& operator[](std::size_t i) const { return items_[i]; }

  friend bool operator==(const OrderedMap& a, const OrderedMap& b) {
    return a.items_ == b.items_;
  }

 private:
  std::vector<value_type> items_;
  std::map<std::string, std::size_t> index_;
};

struct FaultTree {
  std::string name;
  std::optional<double> mission_time;
  OrderedMap<BasicEventModel> events;
  OrderedMap<Gate> gates;
  GateId top;

  std::vector<EventId> EventIds() const {
    std::vector<EventId> ids;
    ids.reserve(events.size());
    for (const auto& [id, model] : events) ids.push_back(id);
    return ids;
  }

  friend bool operator==(const FaultTree&, const FaultTree&) = default;
};

namespace detail {

inline bool IsValidToken(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

inline std::string ArityMessage(const Gate& gate) {
  auto n = gate.inputs.size();
  switch (gate.kind) {
    case GateKind::kNot:
      if (n != 1) return "not gate needs exactly 1 input, got " + std::to_string(n);
      break;
    case GateKind::kAtLeast:
      if (gate.k < 1 || static_cast<std::size_t>(gate.k) > n)
        return "atleast gate needs 1 <= k <= inputs, got k=" +
               std::to_string(gate.k) + " with " + std::to_string(n) +
               " inputs";
      break;
    default:
      if (n < 2)
        return std::string(ToString(gate.kind)) +
               " gate needs at least 2 inputs, got " + std::to_string(n);
  }
  return {};
}

}  // namespace detail

/// Checks every FaultTree invariant. An empty result means the tree is valid.
inline std::vector<Diagnostic> Validate(const FaultTree& tree) {
  std::vector<Diagnostic> diags;
  auto error = [&](const std::string& where, std::string msg) {
    diags.push_back({Severity::kError, where, std::move(msg)});
  };

  if (tree.mission_time && !(*tree.mission_time > 0 &&
                             std::isfinite(*tree.mission_time)))
    error("mission_time_hours", "mission time must be > 0");

  for (const auto& [id, model] : tree.events) {
    if (!detail::IsValidToken(id)) error(id, "invalid event id");
    if (tree.gates.Contains(id)) error(id, "id declared as both gate and event");
    try {
      CheckModel(model);
    } catch (const DomainError& e) {
      error(id, std::string("invalid model parameters: ") + e.what());
    }
  }

  for (const auto& [id, gate] : tree.gates) {
    if (!detail::IsValidToken(id)) error(id, "invalid gate id");
    if (auto msg = detail::ArityMessage(gate); !msg.empty()) error(id, msg);
    for (const auto& ref : gate.inputs) {
      if (!tree.gates.Contains(ref.id) && !tree.events.Contains(ref.id))
        error(id, "unknown reference '" + ref.id + "'");
    }
  }

  if (!tree.gates.Contains(tree.top))
    error(tree.top.empty() ? "top" : tree.top,
          "top '" + tree.top + "' is not a declared gate");

  // Cycle detection by iterative DFS with three colors.
  enum Color : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<Color> color(tree.gates.size(), kWhite);
  std::set<std::string> reported;
  for (std::size_t start = 0; start < tree.gates.size(); ++start) {
    if (color[start] != kWhite) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const Gate& gate = tree.gates[node].second;
      if (next == gate.inputs.size()) {
        color[node] = kBlack;
        stack.pop_back();
        continue;
      }
      auto child = tree.gates.IndexOf(gate.inputs[next++].id);
      if (!child) continue;
      if (color[*child] == kGrey) {
        const auto& child_id = tree.gates[*child].first;
        if (reported.insert(child_id).second)
          error(child_id, "cyclic reference through gate '" + child_id + "'");
      } else if (color[*child] == kWhite) {
        color[*child] = kGrey;
        stack.emplace_back(*child, 0);
      }
    }
  }
  return diags;
}

inline bool HasErrors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::kError;
  });
}

/// Evaluates a valid tree over a bit assignment of events in declaration
/// order (bit i set means event i has occurred). Supports up to 64 events.
class TreeEvaluator {
 public:
  explicit TreeEvaluator(const FaultTree& tree) {
    if (tree.events.size() > 64)
      throw CapacityError("evaluator supports at most 64 events");
    std::vector<int> gate_slot(tree.gates.size(), -1);
    // Post-order over gates reachable from the top.
    auto top = tree.gates.IndexOf(tree.top);
    if (!top) throw DomainError("top is not a declared gate");
    std::vector<std::pair<std::size_t, std::size_t>> stack{{*top, 0}};
    std::vector<bool> visiting(tree.gates.size());
    visiting[*top] = true;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const Gate& gate = tree.gates[node].second;
      if (next < gate.inputs.size()) {
        auto child = tree.gates.IndexOf(gate.inputs[next++].id);
        if (child && gate_slot[*child] < 0) {
          if (visiting[*child]) throw DomainError("cyclic fault tree");
          visiting[*child] = true;
          stack.emplace_back(*child, 0);
        }
        continue;
      }
      Op op{gate.kind, gate.k, {}};
      for (const auto& ref : gate.inputs) {
        Operand operand;
        operand.negated = ref.negated;
        if (auto g = tree.gates.IndexOf(ref.id)) {
          operand.is_gate = true;
          operand.index = static_cast<std::size_t>(gate_slot[*g]);
        } else if (auto e = tree.events.IndexOf(ref.id)) {
          operand.index = *e;
        } else {
          throw DomainError("unknown reference '" + ref.id + "'");
        }
        op.operands.push_back(operand);
      }
      gate_slot[node] = static_cast<int>(ops_.size());
      ops_.push_back(std::move(op));
      stack.pop_back();
    }
  }

  bool operator()(std::uint64_t assignment) const {
    std::vector<char> values(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      int count = 0;
      for (const auto& operand : op.operands) {
        bool v = operand.is_gate ? values[operand.index]
                                 : ((assignment >> operand.index) & 1U);
        count += (v != operand.negated);
      }
      int n = static_cast<int>(op.operands.size());
      bool out = false;
      switch (op.kind) {
        case GateKind::kAnd: out = count == n; break;
        case GateKind::kOr: out = count > 0; break;
        case GateKind::kNot: out = count == 0; break;
        case GateKind::kNand: out = count != n; break;
        case GateKind::kNor: out = count == 0; break;
        case GateKind::kXor: out = count % 2 == 1; break;
        case GateKind::kAtLeast: out = count >= op.k; break;
      }
      values[i] = out;
    }
    return values.back();
  }

 private:
  struct Operand {
    bool is_gate = false;
    bool negated = false;
    std::size_t index = 0;
  };
  struct Op {
    GateKind kind;
    int k;
    std::vector<Operand> operands;
  };
  std::vector<Op> ops_;
};

}  // namespace ftkit
