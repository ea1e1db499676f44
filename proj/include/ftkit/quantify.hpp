#pragma once

/**
 * @file
 * Quantification of cut sets and top events.
 *
 * Cut-set unavailability Q_i is the product of literal probabilities, and
 * cut-set frequency W_i sums, over each literal, the literal's frequency
 * times the probability that every other literal is already present.
 * Top-event unavailability is available as the exact inclusion-exclusion
 * sum or as one of three upper bounds, which for coherent inputs satisfy
 *
 *     exact <= common-factored Esary-Proschan <= Esary-Proschan <= rare event
 *
 * Inputs containing negated literals can break this chain.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftkit/error.hpp"
#include "ftkit/event_models.hpp"
#include "ftkit/qualitative.hpp"

namespace ftkit {

enum class QMethod { kExactIe, kEpCommon, kEp, kRareEvent };

inline constexpr QMethod kAllQMethods[] = {QMethod::kExactIe,
                                           QMethod::kEpCommon, QMethod::kEp,
                                           QMethod::kRareEvent};

inline std::string_view ToString(QMethod m) {
  switch (m) {
    case QMethod::kExactIe: return "exact_ie";
    case QMethod::kEpCommon: return "ep_common";
    case QMethod::kEp: return "ep";
    case QMethod::kRareEvent: return "rare_event";
  }
  return "?";
}

/// How a negated literal contributes to cut-set frequency.
enum class NotFrequencyPolicy {
  kZero,    ///< Acts as an enabling condition with no frequency.
  kMirror,  ///< Frequency of the complement equals that of the event.
};

/// Sentinel for an unbounded inclusion-exclusion order.
inline constexpr std::size_t kUnlimitedOrder =
    std::numeric_limits<std::size_t>::max();

/// Set count up to which inclusion-exclusion runs unbounded by default.
inline constexpr std::size_t kIeAutoLimit = 20;
inline constexpr std::size_t kIeFallbackOrder = 3;

struct QuantConfig {
  QMethod q_method = QMethod::kEpCommon;
  /// nullopt selects unlimited for <= kIeAutoLimit sets and
  /// kIeFallbackOrder otherwise.
  std::optional<std::size_t> ie_max_order;
  NotFrequencyPolicy not_frequency_policy = NotFrequencyPolicy::kZero;
  std::optional<double> mission_time;
};

using ProbabilityMap = std::map<EventId, double>;
using FrequencyMap = std::map<EventId, double>;

namespace detail {

inline double Lookup(const std::map<EventId, double>& values,
                     const EventId& id, const char* what) {
  auto it = values.find(id);
  if (it == values.end())
    throw DomainError(std::string("no ") + what + " for event '" + id + "'");
  return it->second;
}

inline double LiteralProbability(const Literal& lit, const ProbabilityMap& q) {
  double p = Lookup(q, lit.event, "probability");
  return lit.negated ? 1 - p : p;
}

}  // namespace detail

/// Unavailability of a conjunction of independent literals.
inline double McsQ(const CutSet& set, const ProbabilityMap& q) {
  double product = 1;
  for (const auto& lit : set) product *= detail::LiteralProbability(lit, q);
  return product;
}

/// Occurrence frequency of a conjunction: sum over literals of the literal's
/// frequency times the probability of all other literals.
inline double McsW(const CutSet& set, const ProbabilityMap& q,
                   const FrequencyMap& w,
                   NotFrequencyPolicy policy = NotFrequencyPolicy::kZero) {
  std::vector<double> prob;
  std::vector<double> freq;
  for (const auto& lit : set) {
    prob.push_back(detail::LiteralProbability(lit, q));
    double wi = detail::Lookup(w, lit.event, "frequency");
    freq.push_back(lit.negated && policy == NotFrequencyPolicy::kZero ? 0.0
                                                                      : wi);
  }
  double total = 0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (freq[i] == 0) continue;
    double term = freq[i];
    for (std::size_t k = 0; k < prob.size(); ++k) {
      if (k != i) term *= prob[k];
    }
    total += term;
  }
  return total;
}

namespace detail {

// Depth-first enumeration of all subsets of `sets` in rank order, tracking
// the literal union. Contradictory unions contribute zero, and so do all of
// their supersets, which are pruned.
class InclusionExclusion {
 public:
  InclusionExclusion(const std::vector<CutSet>& sets, const ProbabilityMap& q,
                     std::size_t max_order)
      : max_order_(max_order) {
    std::map<EventId, std::size_t> index;
    for (const auto& set : sets) {
      std::vector<std::pair<std::size_t, bool>> lits;
      for (const auto& lit : set) {
        auto [it, inserted] = index.emplace(lit.event, index.size());
        if (inserted) q_.push_back(Lookup(q, lit.event, "probability"));
        lits.emplace_back(it->second, lit.negated);
      }
      sets_.push_back(std::move(lits));
    }
    state_.assign(q_.size(), kAbsent);
  }

  double Run() {
    if (q_.size() <= 64) return RunGrouped();
    Recurse(0, 0, 1.0);
    return sum_;
  }

 private:
  static constexpr signed char kAbsent = -1;

  // Same sum with terms merged by (literal union, depth): each union's
  // product is taken once, weighted by the signed count of subsets that
  // produce it. Depth is only tracked when the order is bounded.
  double RunGrouped() {
    struct Key {
      std::uint64_t pos, neg;
      std::size_t depth;
      auto operator<=>(const Key&) const = default;
    };
    const bool bounded = max_order_ != kUnlimitedOrder;
    std::map<Key, std::int64_t> terms;
    for (const auto& set : sets_) {
      std::uint64_t pos = 0, neg = 0;
      for (auto [var, negated] : set) (negated ? neg : pos) |= std::uint64_t{1} << var;
      if (pos & neg) continue;
      std::map<Key, std::int64_t> next = terms;
      auto add = [&](const Key& k, std::int64_t c) {
        auto& slot = next[k];
        slot += c;
        if (slot == 0) next.erase(k);
      };
      for (const auto& [k, c] : terms) {
        if (bounded && k.depth >= max_order_) continue;
        Key merged{k.pos | pos, k.neg | neg, bounded ? k.depth + 1 : 0};
        if (merged.pos & merged.neg) continue;
        add(merged, -c);
      }
      add({pos, neg, bounded ? 1u : 0u}, 1);
      terms = std::move(next);
    }
    double sum = 0;
    for (const auto& [k, c] : terms) {
      double p = 1;
      for (std::size_t v = 0; v < q_.size(); ++v) {
        if ((k.pos >> v) & 1U) p *= q_[v];
        if ((k.neg >> v) & 1U) p *= 1 - q_[v];
      }
      sum += static_cast<double>(c) * p;
    }
    return sum;
  }

  void Recurse(std::size_t start, std::size_t depth, double product) {
    if (depth == max_order_) return;
    for (std::size_t i = start; i < sets_.size(); ++i) {
      double p = product;
      std::vector<std::size_t> added;
      bool contradiction = false;
      for (auto [var, negated] : sets_[i]) {
        signed char want = negated ? 0 : 1;
        if (state_[var] == kAbsent) {
          state_[var] = want;
          added.push_back(var);
          p *= negated ? 1 - q_[var] : q_[var];
        } else if (state_[var] != want) {
          contradiction = true;
          break;
        }
      }
      if (!contradiction) {
        sum_ += (depth % 2 == 0) ? p : -p;
        Recurse(i + 1, depth + 1, p);
      }
      for (auto var : added) state_[var] = kAbsent;
    }
  }

  std::size_t max_order_;
  std::vector<std::vector<std::pair<std::size_t, bool>>> sets_;
  std::vector<double> q_;
  std::vector<signed char> state_;
  double sum_ = 0;
};

}  // namespace detail

/// Top-event unavailability by the configured method. Warnings (empty set
/// list, truncated inclusion-exclusion) are appended to `warnings` if given.
inline double TopQ(const ImplicantSet& sets, const ProbabilityMap& q,
                   const QuantConfig& cfg,
                   std::vector<std::string>* warnings = nullptr) {
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  const auto& members = sets.members;
  if (members.empty()) {
    warn("empty cut-set list; top-event unavailability is 0");
    return 0;
  }
  switch (cfg.q_method) {
    case QMethod::kExactIe: {
      std::size_t order = kUnlimitedOrder;
      if (cfg.ie_max_order) {
        if (*cfg.ie_max_order == 0)
          throw DomainError("inclusion-exclusion order must be >= 1");
        order = *cfg.ie_max_order;
      } else if (members.size() > kIeAutoLimit) {
        order = kIeFallbackOrder;
        warn("inclusion-exclusion truncated at order " +
             std::to_string(order) + " for " + std::to_string(members.size()) +
             " sets");
      }
      return detail::InclusionExclusion(members, q, order).Run();
    }
    case QMethod::kRareEvent: {
      double sum = 0;
      for (const auto& s : members) sum += McsQ(s, q);
      return sum;
    }
    case QMethod::kEp: {
      double survive = 1;
      for (const auto& s : members) survive *= 1 - McsQ(s, q);
      return 1 - survive;
    }
    case QMethod::kEpCommon: {
      // Positive literals present in every member are factored out.
      CutSet common;
      for (const auto& lit : members.front()) {
        if (lit.negated) continue;
        bool everywhere = std::all_of(
            members.begin(), members.end(),
            [&](const CutSet& s) { return s.count(lit) > 0; });
        if (everywhere) common.insert(lit);
      }
      double q_common = McsQ(common, q);
      double survive = 1;
      for (const auto& s : members) {
        double rest = 1;
        for (const auto& lit : s) {
          if (!common.count(lit)) rest *= detail::LiteralProbability(lit, q);
        }
        survive *= 1 - rest;
      }
      return q_common * (1 - survive);
    }
  }
  return 0;
}

/// Top-event frequency: each set occurring while no other set is present,
///   W = prod_j (1 - Q_j) * sum_i W_i / (1 - Q_i).
inline double TopW(const ImplicantSet& sets, const ProbabilityMap& q,
                   const FrequencyMap& w,
                   NotFrequencyPolicy policy = NotFrequencyPolicy::kZero) {
  double survive = 1;
  double sum = 0;
  for (const auto& s : sets.members) {
    double qi = McsQ(s, q);
    if (qi >= 1)
      throw DomainError("cut set " + ToString(s) +
                        " has unavailability 1; top-event frequency is "
                        "undefined");
    survive *= 1 - qi;
    sum += McsW(s, q, w, policy) / (1 - qi);
  }
  return survive * sum;
}

/// Frequency of A AND B for independent events.
inline double AndFrequency(double wa, double qa, double wb, double qb) {
  return wa * qb + wb * qa;
}

/// AND frequency when each event lasts a known mean duration (q = w T).
inline double AndFrequencyFromDurations(double wa, double ta, double wb,
                                        double tb) {
  return wa * wb * (ta + tb);
}

/// Frequency of A OR B: occurrences of one event while the other is absent.
inline double OrFrequency(double wa, double qa, double wb, double qb) {
  return wa * (1 - qb) + wb * (1 - qa);
}

/// Per-set and top-event figures for a cut-set or implicant list.
struct QuantResult {
  struct SetMeasure {
    CutSet set;
    double q = 0;
    double w = 0;
  };
  std::vector<SetMeasure> per_set;
  std::map<QMethod, double> top_q;
  double top_w = 0;
  std::vector<std::string> warnings;
};

/// Evaluates every requested method over `sets`. Event q/w values come from
/// `measures`; negated literals trigger a non-coherence warning.
inline QuantResult Quantify(const ImplicantSet& sets,
                            const std::map<EventId, Measure>& measures,
                            const QuantConfig& cfg,
                            const std::vector<QMethod>& methods) {
  ProbabilityMap q;
  FrequencyMap w;
  for (const auto& [id, m] : measures) {
    q[id] = m.q;
    w[id] = m.w;
  }
  QuantResult result;
  bool has_negation = false;
  for (const auto& s : sets.members) {
    for (const auto& lit : s) has_negation |= lit.negated;
    result.per_set.push_back(
        {s, McsQ(s, q), McsW(s, q, w, cfg.not_frequency_policy)});
  }
  if (has_negation)
    result.warnings.push_back(
        "negated literals present (non-coherent); upper-bound ordering of "
        "the approximations does not hold");
  for (auto method : methods) {
    QuantConfig c = cfg;
    c.q_method = method;
    result.top_q[method] = TopQ(sets, q, c, &result.warnings);
  }
  result.top_w = TopW(sets, q, w, cfg.not_frequency_policy);
  return result;
}

/// q and w of every event in a tree, using its mission time unless
/// `mission_time` overrides it.
inline std::map<EventId, Measure> EventMeasures(
    const FaultTree& tree, std::optional<double> mission_time = std::nullopt) {
  auto t = mission_time ? mission_time : tree.mission_time;
  std::map<EventId, Measure> out;
  for (const auto& [id, model] : tree.events) {
    try {
      out[id] = MeasureOf(model, t);
    } catch (const DomainError& e) {
      throw DomainError("event '" + id + "': " + e.what());
    }
  }
  return out;
}

}  // namespace ftkit
