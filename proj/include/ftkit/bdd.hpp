#pragma once

/**
 * @file
 * Reduced ordered binary decision diagrams for normalized fault trees:
 * construction by memoized apply over a hash-consed node table, exact
 * top-event probability by Shannon decomposition, and prime implicants.
 */

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ftkit/error.hpp"
#include "ftkit/normalize.hpp"
#include "ftkit/qualitative.hpp"

namespace ftkit {

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// Immutable ROBDD. Nodes 0 and 1 are the terminals; every other node tests
/// `order[var]` and has children with strictly greater variable positions.
class BddGraph {
 public:
  struct Node {
    std::size_t var;  ///< Position in order(); order().size() for terminals.
    std::size_t low;  ///< Child when the event has not occurred.
    std::size_t high; ///< Child when the event has occurred.
  };

  static constexpr std::size_t kFalse = 0;
  static constexpr std::size_t kTrue = 1;

  BddGraph(std::vector<EventId> order, std::vector<Node> nodes,
           std::size_t root)
      : order_(std::move(order)), nodes_(std::move(nodes)), root_(root) {}

  const std::vector<EventId>& order() const { return order_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t root() const { return root_; }
  bool IsTerminal(std::size_t n) const { return n <= kTrue; }

  /// Bit i of `assignment` is the state of order()[i].
  bool Evaluate(std::uint64_t assignment) const {
    std::size_t n = root_;
    while (!IsTerminal(n)) {
      const Node& node = nodes_[n];
      n = ((assignment >> node.var) & 1U) ? node.high : node.low;
    }
    return n == kTrue;
  }

 private:
  std::vector<EventId> order_;
  std::vector<Node> nodes_;
  std::size_t root_;
};

namespace detail {

class BddManager {
 public:
  using Node = BddGraph::Node;

  BddManager(std::size_t num_vars, std::size_t budget)
      : num_vars_(num_vars), budget_(budget) {
    nodes_.push_back({num_vars, 0, 0});
    nodes_.push_back({num_vars, 1, 1});
  }

  std::size_t MakeNode(std::size_t var, std::size_t low, std::size_t high) {
    if (low == high) return low;
    Key key{var, low, high};
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    if (nodes_.size() >= budget_)
      throw CapacityError("BDD node budget of " + std::to_string(budget_) +
                          " nodes exceeded");
    nodes_.push_back({var, low, high});
    return unique_[key] = nodes_.size() - 1;
  }

  std::size_t Literal(std::size_t var, bool negated) {
    return negated ? MakeNode(var, BddGraph::kTrue, BddGraph::kFalse)
                   : MakeNode(var, BddGraph::kFalse, BddGraph::kTrue);
  }

  std::size_t And(std::size_t f, std::size_t g) { return Apply(true, f, g); }
  std::size_t Or(std::size_t f, std::size_t g) { return Apply(false, f, g); }

  /// Copies a graph's nodes in; returns the imported root.
  std::size_t Import(const BddGraph& graph) {
    std::vector<std::size_t> map(graph.nodes().size());
    map[0] = 0;
    map[1] = 1;
    for (std::size_t i = 2; i < graph.nodes().size(); ++i) {
      const auto& n = graph.nodes()[i];
      map[i] = MakeNode(n.var, map[n.low], map[n.high]);
    }
    return map[graph.root()];
  }

  const Node& node(std::size_t n) const { return nodes_[n]; }

  /// Compacts the subgraph reachable from `root` into an immutable graph.
  BddGraph Export(std::vector<EventId> order, std::size_t root) const {
    std::vector<Node> out{{num_vars_, 0, 0}, {num_vars_, 1, 1}};
    std::unordered_map<std::size_t, std::size_t> remap{{0, 0}, {1, 1}};
    // Children first so that indices of children precede parents.
    std::vector<std::pair<std::size_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [n, expanded] = stack.back();
      stack.pop_back();
      if (remap.count(n)) continue;
      const Node& node = nodes_[n];
      if (!expanded) {
        stack.emplace_back(n, true);
        stack.emplace_back(node.high, false);
        stack.emplace_back(node.low, false);
        continue;
      }
      out.push_back({node.var, remap.at(node.low), remap.at(node.high)});
      remap[n] = out.size() - 1;
    }
    return BddGraph(std::move(order), std::move(out), remap.at(root));
  }

 private:
  struct Key {
    std::size_t a, b, c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = k.a * 0x9E3779B97F4A7C15ULL;
      h ^= k.b + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h ^= k.c + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  std::size_t Apply(bool is_and, std::size_t f, std::size_t g) {
    if (is_and) {
      if (f == BddGraph::kFalse || g == BddGraph::kFalse) return BddGraph::kFalse;
      if (f == BddGraph::kTrue) return g;
      if (g == BddGraph::kTrue) return f;
    } else {
      if (f == BddGraph::kTrue || g == BddGraph::kTrue) return BddGraph::kTrue;
      if (f == BddGraph::kFalse) return g;
      if (g == BddGraph::kFalse) return f;
    }
    if (f == g) return f;
    if (f > g) std::swap(f, g);
    Key key{is_and ? 0U : 1U, f, g};
    auto& cache = computed_;
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const Node nf = nodes_[f];
    const Node ng = nodes_[g];
    std::size_t var = std::min(nf.var, ng.var);
    std::size_t f0 = nf.var == var ? nf.low : f;
    std::size_t f1 = nf.var == var ? nf.high : f;
    std::size_t g0 = ng.var == var ? ng.low : g;
    std::size_t g1 = ng.var == var ? ng.high : g;
    std::size_t low = Apply(is_and, f0, g0);
    std::size_t high = Apply(is_and, f1, g1);
    std::size_t result = MakeNode(var, low, high);
    computed_[key] = result;
    return result;
  }

  std::size_t num_vars_;
  std::size_t budget_;
  std::vector<Node> nodes_;
  std::unordered_map<Key, std::size_t, KeyHash> unique_;
  std::unordered_map<Key, std::size_t, KeyHash> computed_;
};

}  // namespace detail

/// Builds the ROBDD of a normalized tree under the given variable order,
/// which must list each event of the tree exactly once.
inline BddGraph BuildBdd(const NormalizedTree& tree,
                         const std::vector<EventId>& order,
                         std::size_t node_budget = kDefaultNodeBudget) {
  std::map<EventId, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!position.emplace(order[i], i).second)
      throw DomainError("variable order lists '" + order[i] + "' twice");
  }
  for (const auto& id : tree.events) {
    if (!position.count(id))
      throw DomainError("variable order is missing event '" + id + "'");
  }
  if (position.size() != tree.events.size())
    throw DomainError("variable order names events not in the tree");

  using Kind = NormalizedTree::NodeKind;
  std::vector<char> reachable(tree.nodes.size());
  reachable[tree.root] = 1;
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    if (!reachable[i]) continue;
    for (auto c : tree.nodes[i].children) reachable[c] = 1;
  }

  detail::BddManager manager(order.size(), node_budget);
  std::vector<std::size_t> bdd(tree.nodes.size(), BddGraph::kFalse);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!reachable[i]) continue;
    const auto& node = tree.nodes[i];
    switch (node.kind) {
      case Kind::kLiteral:
        bdd[i] = manager.Literal(position.at(node.literal.event),
                                 node.literal.negated);
        break;
      case Kind::kAnd: {
        std::size_t acc = BddGraph::kTrue;
        for (auto c : node.children) acc = manager.And(acc, bdd[c]);
        bdd[i] = acc;
        break;
      }
      case Kind::kOr: {
        std::size_t acc = BddGraph::kFalse;
        for (auto c : node.children) acc = manager.Or(acc, bdd[c]);
        bdd[i] = acc;
        break;
      }
    }
  }
  return manager.Export(order, bdd[tree.root]);
}

/// Exact probability that the function is true, for independent events.
inline double BddProbability(const BddGraph& bdd,
                             const std::map<EventId, double>& q) {
  std::vector<double> var_q(bdd.order().size());
  for (std::size_t i = 0; i < var_q.size(); ++i) {
    auto it = q.find(bdd.order()[i]);
    if (it == q.end())
      throw DomainError("no probability for event '" + bdd.order()[i] + "'");
    var_q[i] = it->second;
  }
  // Children precede parents in an exported graph.
  std::vector<double> p(bdd.nodes().size());
  p[BddGraph::kFalse] = 0;
  p[BddGraph::kTrue] = 1;
  for (std::size_t n = 2; n < bdd.nodes().size(); ++n) {
    const auto& node = bdd.nodes()[n];
    double qv = var_q[node.var];
    p[n] = qv * p[node.high] + (1 - qv) * p[node.low];
  }
  return p[bdd.root()];
}

namespace detail {

// Literal code: 2 * var + negated. Terms are sorted by variable position.
using Term = std::vector<std::size_t>;
using TermSet = std::set<Term>;

class PrimeImplicantFinder {
 public:
  PrimeImplicantFinder(const BddGraph& graph, std::size_t budget)
      : manager_(graph.order().size(), budget) {
    root_ = manager_.Import(graph);
  }

  const TermSet& Run() { return Primes(root_); }

 private:
  // PI(f) = PI(f0 & f1) + x.(PI(f1) - PI(f0 & f1)) + !x.(PI(f0) - PI(f0 & f1))
  const TermSet& Primes(std::size_t f) {
    if (auto it = memo_.find(f); it != memo_.end()) return *it->second;
    auto result = std::make_unique<TermSet>();
    if (f == BddGraph::kTrue) {
      result->insert(Term{});
    } else if (f != BddGraph::kFalse) {
      const auto node = manager_.node(f);
      std::size_t both = manager_.And(node.low, node.high);
      const TermSet& common = Primes(both);
      const TermSet& high = Primes(node.high);
      const TermSet& low = Primes(node.low);
      *result = common;
      auto extend = [&](const TermSet& from, std::size_t code) {
        for (const auto& t : from) {
          if (common.count(t)) continue;
          Term term;
          term.reserve(t.size() + 1);
          term.push_back(code);
          term.insert(term.end(), t.begin(), t.end());
          result->insert(std::move(term));
        }
      };
      extend(high, 2 * node.var);
      extend(low, 2 * node.var + 1);
    }
    auto& slot = memo_[f];
    slot = std::move(result);
    return *slot;
  }

  BddManager manager_;
  std::size_t root_;
  std::unordered_map<std::size_t, std::unique_ptr<TermSet>> memo_;
};

}  // namespace detail

/// All prime implicants of the function represented by `bdd`.
inline ImplicantSet PrimeImplicants(
    const BddGraph& bdd, std::size_t node_budget = kDefaultNodeBudget) {
  detail::PrimeImplicantFinder finder(bdd, node_budget);
  ImplicantSet result;
  result.kind = ImplicantKind::kPrime;
  for (const auto& term : finder.Run()) {
    CutSet set;
    for (auto code : term) set.insert({bdd.order()[code / 2], (code & 1U) != 0});
    result.members.push_back(std::move(set));
  }
  std::sort(result.members.begin(), result.members.end(), CutSetLess);
  return result;
}

/// Coherent approximation: drops negated literals (successes are taken as
/// certain) and re-minimizes by absorption.
inline ImplicantSet CoherentMcsFromPrimes(const ImplicantSet& primes) {
  ImplicantSet stripped;
  for (const auto& set : primes.members) {
    CutSet positive;
    for (const auto& lit : set) {
      if (!lit.negated) positive.insert(lit);
    }
    stripped.members.push_back(std::move(positive));
  }
  auto result = Minimize(stripped);
  result.kind = ImplicantKind::kMinimal;
  return result;
}

}  // namespace ftkit
