#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace test_support {

// Checks a document against the subset of JSON Schema the published
// report schemas use: type, properties, required, items, enum,
// additionalProperties. Returns violation messages; empty means valid.
inline void validate_schema(const nlohmann::json& schema,
                            const nlohmann::json& doc, const std::string& path,
                            std::vector<std::string>& errors) {
  using nlohmann::json;
  if (schema.contains("type")) {
    const std::string type = schema.at("type");
    const bool ok =
        (type == "object" && doc.is_object()) ||
        (type == "array" && doc.is_array()) ||
        (type == "string" && doc.is_string()) ||
        (type == "integer" && doc.is_number_integer()) ||
        (type == "number" && doc.is_number()) ||
        (type == "boolean" && doc.is_boolean());
    if (!ok) {
      errors.push_back(path + ": expected " + type);
      return;
    }
  }
  if (schema.contains("enum")) {
    bool matched = false;
    for (const auto& allowed : schema.at("enum"))
      if (doc == allowed) matched = true;
    if (!matched) errors.push_back(path + ": value not in enum");
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key " +
                           key.get<std::string>());
    const bool closed = schema.contains("additionalProperties") &&
                        schema.at("additionalProperties") == false;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const bool described = schema.contains("properties") &&
                             schema.at("properties").contains(it.key());
      if (described)
        validate_schema(schema.at("properties").at(it.key()), it.value(),
                        path + "." + it.key(), errors);
      else if (closed)
        errors.push_back(path + ": unexpected key " + it.key());
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      validate_schema(schema.at("items"), doc[i],
                      path + "[" + std::to_string(i) + "]", errors);
  }
}

inline std::vector<std::string> validate_schema(const nlohmann::json& schema,
                                                const nlohmann::json& doc) {
  std::vector<std::string> errors;
  validate_schema(schema, doc, "$", errors);
  return errors;
}

}  // namespace test_support
