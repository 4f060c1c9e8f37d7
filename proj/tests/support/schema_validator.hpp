#pragma once

// Validator for the JSON Schema subset used by the shipped service schemas:
// type (string or list), properties, required, additionalProperties (bool),
// items, enum, minimum, minItems, maxItems, oneOf, $ref to "#/definitions/x".

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gencur::testing {

class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema) : root_(std::move(schema)) {}

  static SchemaValidator FromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema " + path);
    return SchemaValidator(nlohmann::json::parse(in));
  }

  /// Empty when valid; otherwise one message per violation.
  std::vector<std::string> validate(const nlohmann::json& doc) const {
    std::vector<std::string> errors;
    check(root_, doc, "$", errors);
    return errors;
  }

 private:
  const nlohmann::json& resolve(const nlohmann::json& schema) const {
    if (!schema.contains("$ref")) return schema;
    const auto ref = schema.at("$ref").get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root_.at("definitions").at(ref.substr(prefix.size()));
  }

  static bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "number") return v.is_number();
    if (t == "integer") {
      return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    }
    throw std::runtime_error("unsupported type " + t);
  }

  void check(const nlohmann::json& raw, const nlohmann::json& v, const std::string& path,
             std::vector<std::string>& errors) const {
    const nlohmann::json& s = resolve(raw);
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + s["type"].dump());
        return;
      }
    }
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errors.push_back(path + ": value not in enum");
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
      errors.push_back(path + ": below minimum");
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& alt : s["oneOf"]) {
        std::vector<std::string> sub;
        check(alt, v, path, sub);
        if (sub.empty()) ++matches;
      }
      if (matches != 1) errors.push_back(path + ": matches " + std::to_string(matches) + " oneOf branches");
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& r : s["required"]) {
          if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
        }
      }
      const bool closed = s.contains("additionalProperties") && s["additionalProperties"].is_boolean() &&
                          !s["additionalProperties"].get<bool>();
      for (const auto& [key, value] : v.items()) {
        if (s.contains("properties") && s["properties"].contains(key)) {
          check(s["properties"][key], value, path + "." + key, errors);
        } else if (closed) {
          errors.push_back(path + ": unexpected property " + key);
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
        errors.push_back(path + ": too few items");
      }
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
        errors.push_back(path + ": too many items");
      }
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
      }
    }
  }

  nlohmann::json root_;
};

inline std::string schema_path(const std::string& name) { return std::string(GENCUR_SCHEMA_DIR) + "/" + name; }

}  // namespace gencur::testing
