#pragma once

/**
 * @file
 * Rewriting of arbitrary fault trees into AND/OR graphs over signed event
 * literals. NAND/NOR/NOT are eliminated by De Morgan's laws, XOR becomes a
 * sum of products, and k-out-of-n votes expand to an OR of all k-subsets.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ftkit/error.hpp"
#include "ftkit/fault_tree.hpp"

namespace ftkit {

struct NormalizedTree {
  enum class NodeKind { kAnd, kOr, kLiteral };

  struct Node {
    NodeKind kind = NodeKind::kLiteral;
    Literal literal;             ///< kLiteral only.
    std::size_t event_index = 0; ///< kLiteral only; index into `events`.
    std::vector<std::size_t> children;
  };

  std::vector<EventId> events;  ///< Declaration order of the source tree.
  std::vector<Node> nodes;      ///< Children always precede parents.
  std::size_t root = 0;

  const Node& Root() const { return nodes[root]; }

  /// Evaluates over a bit assignment of `events` (bit i = event i occurred).
  bool Evaluate(std::uint64_t assignment) const {
    std::vector<char> value(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      switch (n.kind) {
        case NodeKind::kLiteral:
          value[i] = (((assignment >> n.event_index) & 1U) != 0) !=
                     n.literal.negated;
          break;
        case NodeKind::kAnd:
          value[i] = 1;
          for (auto c : n.children) value[i] &= value[c];
          break;
        case NodeKind::kOr:
          value[i] = 0;
          for (auto c : n.children) value[i] |= value[c];
          break;
      }
    }
    return value[root];
  }
};

namespace detail {

class Normalizer {
 public:
  explicit Normalizer(const FaultTree& tree) : tree_(tree) {
    out_.events = tree.EventIds();
  }

  NormalizedTree Run() {
    auto top = tree_.gates.IndexOf(tree_.top);
    if (!top) throw DomainError("top '" + tree_.top + "' is not a gate");
    out_.root = GateNode(*top, false);
    return std::move(out_);
  }

 private:
  using Kind = NormalizedTree::NodeKind;

  std::size_t Ref(const InputRef& ref, bool negated) {
    negated = negated != ref.negated;
    if (auto g = tree_.gates.IndexOf(ref.id)) return GateNode(*g, negated);
    auto e = tree_.events.IndexOf(ref.id);
    if (!e) throw DomainError("unknown reference '" + ref.id + "'");
    auto key = std::make_pair(*e, negated);
    if (auto it = literals_.find(key); it != literals_.end()) return it->second;
    NormalizedTree::Node node;
    node.kind = Kind::kLiteral;
    node.literal = {ref.id, negated};
    node.event_index = *e;
    return literals_[key] = Push(std::move(node));
  }

  std::size_t GateNode(std::size_t index, bool negated) {
    auto key = std::make_pair(index, negated);
    if (auto it = gates_.find(key); it != gates_.end()) return it->second;
    if (!in_progress_.insert(key).second)
      throw DomainError("cyclic reference through '" +
                        tree_.gates[index].first + "'");
    const Gate& gate = tree_.gates[index].second;
    std::size_t result = 0;
    switch (gate.kind) {
      case GateKind::kAnd:
      case GateKind::kNand: {
        bool neg = negated != (gate.kind == GateKind::kNand);
        result = Combine(neg ? Kind::kOr : Kind::kAnd, Refs(gate, neg));
        break;
      }
      case GateKind::kOr:
      case GateKind::kNor: {
        bool neg = negated != (gate.kind == GateKind::kNor);
        result = Combine(neg ? Kind::kAnd : Kind::kOr, Refs(gate, neg));
        break;
      }
      case GateKind::kNot:
        result = Ref(gate.inputs.front(), !negated);
        break;
      case GateKind::kXor:
        result = Parity(index, 0, negated);
        break;
      case GateKind::kAtLeast:
        result = Vote(gate, negated);
        break;
    }
    in_progress_.erase(key);
    return gates_[key] = result;
  }

  std::vector<std::size_t> Refs(const Gate& gate, bool negated) {
    std::vector<std::size_t> children;
    for (const auto& ref : gate.inputs) children.push_back(Ref(ref, negated));
    return children;
  }

  // Odd parity of inputs[first..]: a ^ rest = (a & !rest) | (!a & rest).
  std::size_t Parity(std::size_t gate_index, std::size_t first, bool negated) {
    auto key = std::make_tuple(gate_index, first, negated);
    if (auto it = parity_.find(key); it != parity_.end()) return it->second;
    const Gate& gate = tree_.gates[gate_index].second;
    std::size_t result;
    if (first + 1 == gate.inputs.size()) {
      result = Ref(gate.inputs[first], negated);
    } else {
      auto pos = Ref(gate.inputs[first], false);
      auto neg = Ref(gate.inputs[first], true);
      auto rest = Parity(gate_index, first + 1, negated);
      auto rest_complement = Parity(gate_index, first + 1, !negated);
      result = Combine(Kind::kOr, {Combine(Kind::kAnd, {pos, rest_complement}),
                                   Combine(Kind::kAnd, {neg, rest})});
    }
    return parity_[key] = result;
  }

  // OR over all k-subsets of AND; the complement is the dual AND of ORs.
  std::size_t Vote(const Gate& gate, bool negated) {
    auto inner = negated ? Kind::kOr : Kind::kAnd;
    auto outer = negated ? Kind::kAnd : Kind::kOr;
    auto inputs = Refs(gate, negated);
    std::vector<std::size_t> terms;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
      if (pick.size() == static_cast<std::size_t>(gate.k)) {
        std::vector<std::size_t> members;
        for (auto i : pick) members.push_back(inputs[i]);
        terms.push_back(Combine(inner, std::move(members)));
        return;
      }
      for (std::size_t i = start; i < inputs.size(); ++i) {
        pick.push_back(i);
        choose(i + 1);
        pick.pop_back();
      }
    };
    choose(0);
    return Combine(outer, std::move(terms));
  }

  /// Builds an AND/OR node, splicing in children of the same kind.
  std::size_t Combine(Kind kind, std::vector<std::size_t> children) {
    if (children.size() == 1) return children.front();
    NormalizedTree::Node node;
    node.kind = kind;
    for (auto c : children) {
      const auto& child = out_.nodes[c];
      if (child.kind == kind)
        node.children.insert(node.children.end(), child.children.begin(),
                             child.children.end());
      else
        node.children.push_back(c);
    }
    return Push(std::move(node));
  }

  std::size_t Push(NormalizedTree::Node node) {
    out_.nodes.push_back(std::move(node));
    return out_.nodes.size() - 1;
  }

  const FaultTree& tree_;
  NormalizedTree out_;
  std::map<std::pair<std::size_t, bool>, std::size_t> literals_;
  std::map<std::pair<std::size_t, bool>, std::size_t> gates_;
  std::map<std::tuple<std::size_t, std::size_t, bool>, std::size_t> parity_;
  std::set<std::pair<std::size_t, bool>> in_progress_;
};

}  // namespace detail

/// Rewrites a valid tree into AND/OR form with negations only on events.
/// The result evaluates identically to `tree` for every assignment.
inline NormalizedTree Normalize(const FaultTree& tree) {
  return detail::Normalizer(tree).Run();
}

}  // namespace ftkit
