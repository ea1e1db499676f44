#pragma once

/**
 * @file
 * Reading and writing fault-tree documents.
 *
 * Documents are JSON objects:
 *
 *     { "name": "...", "mission_time_hours": 35040,
 *       "events": { "S1": {"model": "dormant", "lambda_per_hour": 5e-8,
 *                          "tau_hours": 35040, "mttr_hours": 8}, ... },
 *       "gates":  { "G1": {"type": "or", "inputs": ["G2", "!G3"]}, ... },
 *       "top": "G1" }
 *
 * Parsing is strict: unknown keys, duplicate keys, and wrong value types
 * are rejected.
 */

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftkit/error.hpp"
#include "ftkit/event_models.hpp"
#include "ftkit/fault_tree.hpp"

namespace ftkit {

namespace detail {

using Json = nlohmann::ordered_json;

class DocumentReader {
 public:
  FaultTree Read(const Json& doc) {
    FaultTree tree;
    if (!doc.is_object()) {
      Fail("document", "document must be an object");
      Throw();
    }
    RequireKeys(doc, "document",
                {"name", "mission_time_hours", "events", "gates", "top"});

    if (auto it = doc.find("name"); it != doc.end()) {
      if (it->is_string()) tree.name = it->get<std::string>();
      else Fail("name", "must be a string");
    }
    if (auto it = doc.find("mission_time_hours"); it != doc.end()) {
      if (it->is_number()) tree.mission_time = it->get<double>();
      else Fail("mission_time_hours", "must be a number");
    }

    if (auto it = doc.find("events"); it == doc.end() || !it->is_object()) {
      Fail("events", "missing or not an object");
    } else {
      for (const auto& [id, body] : it->items()) {
        if (auto model = ReadModel(id, body))
          tree.events.Insert(id, *model);
      }
    }

    if (auto it = doc.find("gates"); it == doc.end() || !it->is_object()) {
      Fail("gates", "missing or not an object");
    } else {
      for (const auto& [id, body] : it->items()) {
        if (auto gate = ReadGate(id, body)) tree.gates.Insert(id, *gate);
      }
    }

    if (auto it = doc.find("top"); it == doc.end() || !it->is_string())
      Fail("top", "missing or not a string");
    else
      tree.top = it->get<std::string>();

    Throw();
    return tree;
  }

 private:
  void Fail(std::string where, std::string msg) {
    diags_.push_back({Severity::kError, std::move(where), std::move(msg)});
  }

  void Throw() {
    if (!diags_.empty()) throw ValidityError(diags_);
  }

  void RequireKeys(const Json& obj, const std::string& where,
                   std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known |= (a == key);
      if (!known) Fail(where, "unknown key '" + key + "'");
    }
  }

  std::optional<double> Number(const Json& obj, const std::string& where,
                               const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      Fail(where, std::string("missing '") + key + "'");
      return std::nullopt;
    }
    if (!it->is_number()) {
      Fail(where, std::string("'") + key + "' must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<BasicEventModel> ReadModel(const std::string& id,
                                           const Json& body) {
    if (!body.is_object() || !body.contains("model") ||
        !body["model"].is_string()) {
      Fail(id, "event needs an object with a 'model' string");
      return std::nullopt;
    }
    auto kind = body["model"].get<std::string>();
    if (kind == "fixed") {
      RequireKeys(body, id, {"model", "p"});
      auto p = Number(body, id, "p");
      if (!p) return std::nullopt;
      return FixedModel{*p};
    }
    if (kind == "rate") {
      RequireKeys(body, id, {"model", "lambda_per_hour", "mttr_hours"});
      auto lambda = Number(body, id, "lambda_per_hour");
      auto mttr = Number(body, id, "mttr_hours");
      if (!lambda || !mttr) return std::nullopt;
      return RateModel{*lambda, *mttr};
    }
    if (kind == "dormant") {
      RequireKeys(body, id,
                  {"model", "lambda_per_hour", "tau_hours", "mttr_hours"});
      auto lambda = Number(body, id, "lambda_per_hour");
      auto tau = Number(body, id, "tau_hours");
      auto mttr = Number(body, id, "mttr_hours");
      if (!lambda || !tau || !mttr) return std::nullopt;
      return DormantModel{*lambda, *tau, *mttr};
    }
    Fail(id, "unknown model '" + kind + "'");
    return std::nullopt;
  }

  std::optional<Gate> ReadGate(const std::string& id, const Json& body) {
    if (!body.is_object()) {
      Fail(id, "gate must be an object");
      return std::nullopt;
    }
    RequireKeys(body, id, {"type", "k", "inputs"});
    Gate gate;
    auto type = body.find("type");
    if (type == body.end() || !type->is_string()) {
      Fail(id, "missing gate 'type'");
      return std::nullopt;
    }
    auto kind = GateKindFromString(type->get<std::string>());
    if (!kind) {
      Fail(id, "unknown gate type '" + type->get<std::string>() + "'");
      return std::nullopt;
    }
    gate.kind = *kind;
    if (auto k = body.find("k"); k != body.end()) {
      if (gate.kind != GateKind::kAtLeast)
        Fail(id, "'k' is only allowed on atleast gates");
      else if (!k->is_number_integer())
        Fail(id, "'k' must be an integer");
      else
        gate.k = k->get<int>();
    } else if (gate.kind == GateKind::kAtLeast) {
      Fail(id, "atleast gate needs 'k'");
    }
    auto inputs = body.find("inputs");
    if (inputs == body.end() || !inputs->is_array()) {
      Fail(id, "missing 'inputs' array");
      return std::nullopt;
    }
    for (const auto& ref : *inputs) {
      if (!ref.is_string()) {
        Fail(id, "gate inputs must be strings");
        continue;
      }
      auto text = ref.get<std::string>();
      InputRef input;
      if (!text.empty() && text.front() == '!') {
        input.negated = true;
        text.erase(0, 1);
      }
      input.id = std::move(text);
      gate.inputs.push_back(std::move(input));
    }
    return gate;
  }

  std::vector<Diagnostic> diags_;
};

}  // namespace detail

/// Parses a document into a validated FaultTree.
/// Throws ParseError on malformed JSON and ValidityError on schema or
/// structural violations (duplicate ids, unknown references, cycles, ...).
inline FaultTree ParseTree(std::string_view text) {
  using detail::Json;
  std::vector<std::set<std::string>> open_keys;
  std::vector<Diagnostic> duplicates;
  Json doc;
  try {
    doc = Json::parse(
        text.begin(), text.end(),
        [&](int depth, Json::parse_event_t event, Json& parsed) {
          switch (event) {
            case Json::parse_event_t::object_start:
              open_keys.emplace_back();
              break;
            case Json::parse_event_t::object_end:
              open_keys.pop_back();
              break;
            case Json::parse_event_t::key: {
              auto key = parsed.get<std::string>();
              if (!open_keys.back().insert(key).second)
                duplicates.push_back({Severity::kError, key,
                                      "duplicate id '" + key + "'"});
              break;
            }
            default:
              break;
          }
          (void)depth;
          return true;
        });
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!duplicates.empty()) throw ValidityError(std::move(duplicates));

  FaultTree tree = detail::DocumentReader{}.Read(doc);
  auto diags = Validate(tree);
  if (HasErrors(diags)) throw ValidityError(std::move(diags));
  return tree;
}

inline std::string SerializeTree(const FaultTree& tree) {
  using detail::Json;
  Json doc = Json::object();
  if (!tree.name.empty()) doc["name"] = tree.name;
  if (tree.mission_time) doc["mission_time_hours"] = *tree.mission_time;
  Json events = Json::object();
  for (const auto& [id, model] : tree.events) {
    events[id] = std::visit(
        [](const auto& m) -> Json {
          using T = std::decay_t<decltype(m)>;
          Json body = Json::object();
          if constexpr (std::is_same_v<T, FixedModel>) {
            body["model"] = "fixed";
            body["p"] = m.p;
          } else if constexpr (std::is_same_v<T, RateModel>) {
            body["model"] = "rate";
            body["lambda_per_hour"] = m.lambda;
            body["mttr_hours"] = m.mttr;
          } else {
            body["model"] = "dormant";
            body["lambda_per_hour"] = m.lambda;
            body["tau_hours"] = m.tau;
            body["mttr_hours"] = m.mttr;
          }
          return body;
        },
        model);
  }
  doc["events"] = std::move(events);
  Json gates = Json::object();
  for (const auto& [id, gate] : tree.gates) {
    Json body = Json::object();
    body["type"] = std::string(ToString(gate.kind));
    if (gate.kind == GateKind::kAtLeast) body["k"] = gate.k;
    Json inputs = Json::array();
    for (const auto& ref : gate.inputs)
      inputs.push_back((ref.negated ? "!" : "") + ref.id);
    body["inputs"] = std::move(inputs);
    gates[id] = std::move(body);
  }
  doc["gates"] = std::move(gates);
  doc["top"] = tree.top;
  return doc.dump(2);
}

}  // namespace ftkit
