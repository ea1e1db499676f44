#pragma once

/**
 * @file
 * Qualitative analysis: top-down cut-set generation (MOCUS), reduction to
 * minimal cut sets by absorption, and an exhaustive coherence diagnosis.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ftkit/error.hpp"
#include "ftkit/fault_tree.hpp"
#include "ftkit/normalize.hpp"

namespace ftkit {

/// Conjunction of literals. Never holds both polarities of one event once
/// produced by this library.
using CutSet = std::set<Literal>;

enum class ImplicantKind { kRaw, kMinimal, kPrime };

struct ImplicantSet {
  ImplicantKind kind = ImplicantKind::kRaw;
  std::vector<CutSet> members;

  friend bool operator==(const ImplicantSet&, const ImplicantSet&) = default;
};

inline bool IsContradictory(const CutSet& set) {
  for (const auto& lit : set) {
    if (!lit.negated && set.count(lit.Complement())) return true;
  }
  return false;
}

/// Display order: by size, then lexicographically by (event, polarity).
inline bool CutSetLess(const CutSet& a, const CutSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<CutSet> SortedMembers(const ImplicantSet& sets) {
  auto members = sets.members;
  std::sort(members.begin(), members.end(), CutSetLess);
  return members;
}

inline std::string ToString(const Literal& lit) {
  return (lit.negated ? "!" : "") + lit.event;
}

inline std::string ToString(const CutSet& set) {
  std::string text = "{";
  bool first = true;
  for (const auto& lit : set) {
    if (!first) text += ", ";
    text += ToString(lit);
    first = false;
  }
  return text + "}";
}

/// Expands a normalized tree top-down into cut sets.
///
/// Each row of the working table holds pending nodes and collected literals.
/// The leftmost pending gate of a row is expanded: an AND gate is replaced
/// in place by its inputs, an OR gate splits the row into one row per input.
/// Rows holding a literal and its complement are dropped as soon as the
/// contradiction appears.
inline ImplicantSet Mocus(const NormalizedTree& tree) {
  using Kind = NormalizedTree::NodeKind;
  struct Row {
    std::vector<std::size_t> pending;  // next item to expand at the back
    CutSet literals;
  };

  ImplicantSet result;
  std::vector<Row> rows;
  rows.push_back({{tree.root}, {}});
  while (!rows.empty()) {
    Row row = std::move(rows.back());
    rows.pop_back();
    bool dead = false;
    while (!row.pending.empty()) {
      std::size_t item = row.pending.back();
      const auto& node = tree.nodes[item];
      if (node.kind == Kind::kLiteral) {
        row.pending.pop_back();
        if (row.literals.count(node.literal.Complement())) {
          dead = true;
          break;
        }
        row.literals.insert(node.literal);
        continue;
      }
      row.pending.pop_back();
      if (node.kind == Kind::kAnd) {
        row.pending.insert(row.pending.end(), node.children.rbegin(),
                           node.children.rend());
        continue;
      }
      // OR: fork; the first input continues in this row. Forks are pushed in
      // reverse so rows complete in input order.
      for (auto it = node.children.rbegin(); it + 1 != node.children.rend();
           ++it) {
        Row fork = row;
        fork.pending.push_back(*it);
        rows.push_back(std::move(fork));
      }
      row.pending.push_back(node.children.front());
    }
    if (!dead) result.members.push_back(std::move(row.literals));
  }
  return result;
}

/// Removes contradictions, duplicates, and every member that contains
/// another member (absorption). The result is an antichain.
inline ImplicantSet Minimize(const ImplicantSet& sets) {
  std::vector<CutSet> candidates;
  for (const auto& s : sets.members) {
    if (!IsContradictory(s)) candidates.push_back(s);
  }
  std::sort(candidates.begin(), candidates.end(), CutSetLess);
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  ImplicantSet result;
  result.kind = sets.kind == ImplicantKind::kPrime ? ImplicantKind::kPrime
                                                   : ImplicantKind::kMinimal;
  for (auto& candidate : candidates) {
    bool absorbed = std::any_of(
        result.members.begin(), result.members.end(), [&](const CutSet& kept) {
          return std::includes(candidate.begin(), candidate.end(), kept.begin(),
                               kept.end());
        });
    if (!absorbed) result.members.push_back(std::move(candidate));
  }
  return result;
}

/// Truth value of the OR-of-ANDs over a named assignment.
inline bool EvaluateSets(const ImplicantSet& sets,
                         const std::map<EventId, bool>& state) {
  return std::any_of(
      sets.members.begin(), sets.members.end(), [&](const CutSet& s) {
        return std::all_of(s.begin(), s.end(), [&](const Literal& lit) {
          auto it = state.find(lit.event);
          bool value = it != state.end() && it->second;
          return value != lit.negated;
        });
      });
}

enum class CoherenceCondition { kRelevance, kBoundary, kMonotonicity };

inline std::string_view ToString(CoherenceCondition c) {
  switch (c) {
    case CoherenceCondition::kRelevance: return "relevance";
    case CoherenceCondition::kBoundary: return "boundary";
    case CoherenceCondition::kMonotonicity: return "monotonicity";
  }
  return "?";
}

/// Failed (true) / working (false) state for each event, declaration order.
using Assignment = std::vector<std::pair<EventId, bool>>;

struct CoherenceViolation {
  CoherenceCondition condition;
  EventId event;  ///< Empty for boundary violations.
  std::vector<Assignment> witnesses;
};

struct CoherenceReport {
  bool coherent = true;
  std::vector<EventId> irrelevant_events;
  std::vector<CoherenceViolation> violations;
};

inline constexpr std::size_t kDefaultCoherenceEventLimit = 20;

/// Exhaustively checks relevance, boundary conditions, and monotonicity of
/// the structure function. Value 1 for an event means it has occurred.
/// Monotonicity witnesses are the pair (x, x with the event set) where
/// setting the event turns the top event off; the smallest such x is used.
inline CoherenceReport CoherenceCheck(
    const FaultTree& tree,
    std::size_t event_limit = kDefaultCoherenceEventLimit) {
  const std::size_t n = tree.events.size();
  if (n > event_limit || n > 30)
    throw CapacityError("coherence check is exhaustive; tree has " +
                        std::to_string(n) + " events, limit is " +
                        std::to_string(event_limit));
  TreeEvaluator phi(tree);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<char> table(count);
  for (std::uint64_t x = 0; x < count; ++x) table[x] = phi(x);

  auto ids = tree.EventIds();
  auto assignment = [&](std::uint64_t x) {
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a.emplace_back(ids[i], (x >> i) & 1U);
    return a;
  };

  CoherenceReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    bool relevant = false;
    std::optional<std::uint64_t> decreasing;
    for (std::uint64_t x = 0; x < count; ++x) {
      if (x & bit) continue;
      if (table[x] != table[x | bit]) relevant = true;
      if (table[x] && !table[x | bit] && !decreasing) decreasing = x;
      if (relevant && decreasing) break;
    }
    if (!relevant) {
      report.irrelevant_events.push_back(ids[i]);
      report.violations.push_back(
          {CoherenceCondition::kRelevance, ids[i], {}});
    }
    if (decreasing) {
      report.violations.push_back({CoherenceCondition::kMonotonicity, ids[i],
                                   {assignment(*decreasing),
                                    assignment(*decreasing | bit)}});
    }
  }
  if (!table[count - 1])
    report.violations.push_back(
        {CoherenceCondition::kBoundary, {}, {assignment(count - 1)}});
  if (table[0])
    report.violations.push_back(
        {CoherenceCondition::kBoundary, {}, {assignment(0)}});
  report.coherent = report.violations.empty();
  return report;
}

}  // namespace ftkit
