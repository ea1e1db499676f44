#pragma once

/**
 * @file
 * Analysis reports: a self-describing record of one quantification run,
 * its JSON machine form, and the human-readable table form.
 */

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftkit/bdd.hpp"
#include "ftkit/error.hpp"
#include "ftkit/qualitative.hpp"
#include "ftkit/quantify.hpp"

namespace ftkit {

/// Scientific notation with six mantissa decimals, upper-case `E`, a
/// two-digit exponent, and no `+` signs: 2.494063E-03, 1.000000E00.
///
/// The value is first fixed to 15 significant digits and then rounded half
/// up, so binary noise below that precision cannot flip a printed digit.
inline std::string FormatNumber(double value) {
  if (!std::isfinite(value))
    return std::isnan(value) ? "NaN" : (value > 0 ? "Inf" : "-Inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14E", value);
  std::string text(buf);
  auto e_pos = text.find('E');
  std::string mantissa = text.substr(0, e_pos);
  int exponent = std::stoi(text.substr(e_pos + 1));
  bool negative = mantissa.front() == '-';
  if (negative) mantissa.erase(0, 1);

  // mantissa is "d.dddddddddddddd"; keep "d.dddddd" and round half up.
  std::string digits = mantissa.substr(0, 1) + mantissa.substr(2);
  bool round_up = digits[7] >= '5';
  digits.resize(7);
  if (round_up) {
    int i = 6;
    while (i >= 0 && digits[i] == '9') digits[i--] = '0';
    if (i >= 0) {
      ++digits[i];
    } else {
      digits.insert(digits.begin(), '1');
      digits.pop_back();
      ++exponent;
    }
  }
  if (value == 0) exponent = 0;
  std::snprintf(buf, sizeof buf, "%s%c.%sE%s%02d", negative ? "-" : "",
                digits[0], digits.substr(1).c_str(), exponent < 0 ? "-" : "",
                exponent < 0 ? -exponent : exponent);
  return buf;
}

/// Orders literals by the declaration rank of their events.
class LiteralRanking {
 public:
  explicit LiteralRanking(const std::vector<EventId>& order) {
    for (std::size_t i = 0; i < order.size(); ++i) rank_[order[i]] = i;
  }

  std::vector<Literal> Arrange(const CutSet& set) const {
    std::vector<Literal> lits(set.begin(), set.end());
    std::sort(lits.begin(), lits.end(), [&](const Literal& a, const Literal& b) {
      return Key(a) < Key(b);
    });
    return lits;
  }

  std::string Render(const CutSet& set) const {
    std::string text = "{";
    auto lits = Arrange(set);
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i) text += ", ";
      text += ToString(lits[i]);
    }
    return text + "}";
  }

  /// Size first, then lexicographic over ranked literals.
  bool Less(const CutSet& a, const CutSet& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    auto la = Arrange(a);
    auto lb = Arrange(b);
    return std::lexicographical_compare(
        la.begin(), la.end(), lb.begin(), lb.end(),
        [&](const Literal& x, const Literal& y) { return Key(x) < Key(y); });
  }

  void Sort(std::vector<CutSet>& sets) const {
    std::stable_sort(sets.begin(), sets.end(),
                     [&](const CutSet& a, const CutSet& b) { return Less(a, b); });
  }

 private:
  std::pair<std::size_t, bool> Key(const Literal& lit) const {
    auto it = rank_.find(lit.event);
    return {it == rank_.end() ? rank_.size() : it->second, lit.negated};
  }

  std::map<EventId, std::size_t> rank_;
};

struct AnalysisReport {
  struct SetEntry {
    std::vector<Literal> literals;  ///< In display order.
    double q = 0;                   ///< Unavailability (probability).
    double w = 0;                   ///< Frequency, per hour.
    friend bool operator==(const SetEntry&, const SetEntry&) = default;
  };
  struct Coherence {
    bool checked = false;
    bool coherent = false;
    std::vector<std::string> findings;
    friend bool operator==(const Coherence&, const Coherence&) = default;
  };
  struct Config {
    std::string cutset_method;  ///< "mocus", "bdd", or "bdd+coherent-approx".
    std::vector<std::string> q_methods;
    std::string not_frequency;
    std::optional<double> mission_time_hours;
    bool per_year = false;
    friend bool operator==(const Config&, const Config&) = default;
  };

  std::string tree_name;
  std::vector<Diagnostic> diagnostics;
  bool prime_implicants = false;  ///< Sets are PIs rather than MCSs.
  std::vector<SetEntry> sets;
  std::map<std::string, double> top_q;  ///< Keyed by method name.
  double w_top = 0;                     ///< Per hour.
  Coherence coherence;
  Config config;
  std::vector<std::string> warnings;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

inline nlohmann::ordered_json ToJson(const AnalysisReport& r) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["tree"] = r.tree_name;
  Json diags = Json::array();
  for (const auto& d : r.diagnostics) {
    diags.push_back({{"severity", d.severity == Severity::kError ? "error" : "warning"},
                     {"location", d.location},
                     {"message", d.message}});
  }
  doc["diagnostics"] = diags;
  Json sets = Json::array();
  Json per_set = Json::array();
  for (const auto& s : r.sets) {
    Json lits = Json::array();
    for (const auto& l : s.literals) lits.push_back(ToString(l));
    sets.push_back(lits);
    per_set.push_back({{"set", lits}, {"q", s.q}, {"w_per_hour", s.w}});
  }
  doc[r.prime_implicants ? "pi" : "mcs"] = sets;
  doc["per_set"] = per_set;
  for (const auto& [method, value] : r.top_q) doc["q_" + method] = value;
  doc["w_top"] = r.w_top;
  doc["units"] = {{"q", "probability"}, {"w", "per hour"}};
  doc["coherence"] = {{"checked", r.coherence.checked},
                      {"coherent", r.coherence.coherent},
                      {"findings", r.coherence.findings}};
  Json cfg;
  cfg["cutset_method"] = r.config.cutset_method;
  cfg["q_methods"] = r.config.q_methods;
  cfg["not_frequency"] = r.config.not_frequency;
  if (r.config.mission_time_hours)
    cfg["mission_time_hours"] = *r.config.mission_time_hours;
  else
    cfg["mission_time_hours"] = nullptr;
  cfg["per_year"] = r.config.per_year;
  doc["config"] = cfg;
  doc["warnings"] = r.warnings;
  return doc;
}

inline AnalysisReport ReportFromJson(const nlohmann::ordered_json& doc) {
  AnalysisReport r;
  try {
    r.tree_name = doc.at("tree").get<std::string>();
    for (const auto& d : doc.at("diagnostics")) {
      r.diagnostics.push_back(
          {d.at("severity").get<std::string>() == "error" ? Severity::kError
                                                          : Severity::kWarning,
           d.at("location").get<std::string>(),
           d.at("message").get<std::string>()});
    }
    r.prime_implicants = doc.contains("pi");
    for (const auto& entry : doc.at("per_set")) {
      AnalysisReport::SetEntry s;
      for (const auto& text : entry.at("set")) {
        auto t = text.get<std::string>();
        bool negated = !t.empty() && t.front() == '!';
        s.literals.push_back({negated ? t.substr(1) : t, negated});
      }
      s.q = entry.at("q").get<double>();
      s.w = entry.at("w_per_hour").get<double>();
      r.sets.push_back(std::move(s));
    }
    for (auto method : kAllQMethods) {
      auto key = "q_" + std::string(ToString(method));
      if (doc.contains(key))
        r.top_q[std::string(ToString(method))] = doc.at(key).get<double>();
    }
    r.w_top = doc.at("w_top").get<double>();
    const auto& coh = doc.at("coherence");
    r.coherence.checked = coh.at("checked").get<bool>();
    r.coherence.coherent = coh.at("coherent").get<bool>();
    r.coherence.findings = coh.at("findings").get<std::vector<std::string>>();
    const auto& cfg = doc.at("config");
    r.config.cutset_method = cfg.at("cutset_method").get<std::string>();
    r.config.q_methods = cfg.at("q_methods").get<std::vector<std::string>>();
    r.config.not_frequency = cfg.at("not_frequency").get<std::string>();
    if (!cfg.at("mission_time_hours").is_null())
      r.config.mission_time_hours = cfg.at("mission_time_hours").get<double>();
    r.config.per_year = cfg.at("per_year").get<bool>();
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

/// One-line coherence verdicts, e.g. "monotonicity violated at V".
inline std::vector<std::string> DescribeCoherence(const CoherenceReport& report) {
  std::vector<std::string> out;
  for (const auto& v : report.violations) {
    std::string line = std::string(ToString(v.condition)) + " violated";
    if (!v.event.empty()) line += " at " + v.event;
    if (!v.witnesses.empty()) {
      line += ";";
      for (const auto& w : v.witnesses) {
        line += " (";
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (i) line += ",";
          line += w[i].first + "=" + (w[i].second ? "1" : "0");
        }
        line += ")";
      }
    }
    out.push_back(std::move(line));
  }
  return out;
}

inline std::string CoherenceVerdict(const AnalysisReport::Coherence& c) {
  if (!c.checked) return "not checked";
  if (c.coherent) return "coherent";
  std::string text = "non-coherent (";
  for (std::size_t i = 0; i < c.findings.size(); ++i) {
    if (i) text += "; ";
    auto cut = c.findings[i].find(';');
    text += c.findings[i].substr(0, cut);
  }
  return text + ")";
}

/// Fixed-width table rendering. Frequencies are scaled to per year when
/// `config.per_year` is set.
inline std::string RenderTable(const AnalysisReport& r) {
  std::ostringstream os;
  const double scale = r.config.per_year ? kHoursPerYear : 1.0;
  const char* unit = r.config.per_year ? "per year" : "per hour";
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  auto render = [](const std::vector<Literal>& lits) {
    std::string text = "{";
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i) text += ", ";
      text += ToString(lits[i]);
    }
    return text + "}";
  };

  os << "Fault tree: " << (r.tree_name.empty() ? "(unnamed)" : r.tree_name)
     << "\n";
  os << "Cut-set method: " << r.config.cutset_method << "\n";
  if (r.config.mission_time_hours)
    os << "Mission time: " << FormatNumber(*r.config.mission_time_hours)
       << " hours\n";
  os << "NOT frequency policy: " << r.config.not_frequency << "\n\n";

  std::size_t width = 3;
  for (const auto& s : r.sets) width = std::max(width, render(s.literals).size());
  os << (r.prime_implicants ? "Prime implicants" : "Minimal cut sets") << " ("
     << r.sets.size() << "):\n";
  os << "  " << pad("#", 5) << pad("Set", width + 2) << pad("Q_i", 15)
     << "W_i (" << unit << ")\n";
  for (std::size_t i = 0; i < r.sets.size(); ++i) {
    const auto& s = r.sets[i];
    os << "  " << pad(std::to_string(i + 1), 5)
       << pad(render(s.literals), width + 2) << pad(FormatNumber(s.q), 15)
       << FormatNumber(s.w * scale) << "\n";
  }

  os << "\nTop event unavailability Q_TE:\n";
  os << "  " << pad("Derivation", 22);
  for (auto method : kAllQMethods) {
    auto name = std::string(ToString(method));
    if (r.top_q.count(name)) os << pad(name, 15);
  }
  os << "\n  " << pad(r.config.cutset_method, 22);
  for (auto method : kAllQMethods) {
    auto it = r.top_q.find(std::string(ToString(method)));
    if (it != r.top_q.end()) os << pad(FormatNumber(it->second), 15);
  }
  os << "\n\nTop event frequency W_TE: " << FormatNumber(r.w_top * scale) << " "
     << unit << "\n";
  os << "Coherence: " << CoherenceVerdict(r.coherence) << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";

  std::string text;
  std::istringstream lines(os.str());
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    text += line + "\n";
  }
  return text;
}

}  // namespace ftkit
