#pragma once

// Minimal JSON-schema checker covering the subset used by report.schema.json:
// type, required, properties, items, enum, minimum, minItems. Collects
// human-readable violations instead of throwing.

#include <string>
#include <vector>

#include <json.hpp>

namespace schema_check {

inline bool type_matches(const std::string& type, const nlohmann::json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (type == "number") return v.is_number();
    return false;
}

inline void validate(const nlohmann::json& schema, const nlohmann::json& value,
                     const std::string& path, std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        if (!type_matches(type, value)) {
            errors.push_back(path + ": expected " + type + ", got " + value.type_name());
            return; // structural checks below would only cascade
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& option : schema["enum"])
            if (option == value) found = true;
        if (!found) errors.push_back(path + ": value " + value.dump() + " not in enum");
    }
    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema["minimum"].get<double>())
        errors.push_back(path + ": " + value.dump() + " below minimum");
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required key '" + key.get<std::string>() +
                                     "'");
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) validate(sub, value[key], path + "." + key, errors);
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(path + ": fewer than minItems entries");
        if (schema.contains("items")) {
            std::size_t index = 0;
            for (const auto& item : value)
                validate(schema["items"], item, path + "[" + std::to_string(index++) + "]",
                         errors);
        }
    }
}

inline std::vector<std::string> validate(const nlohmann::json& schema,
                                         const nlohmann::json& value) {
    std::vector<std::string> errors;
    validate(schema, value, "$", errors);
    return errors;
}

} // namespace schema_check
