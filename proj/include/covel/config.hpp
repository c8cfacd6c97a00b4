#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covel/errors.hpp"

namespace covel {

// Flat dotted-key configuration text:
//
//   # comment
//   manifold.name = r2
//   connection.kind = constant-torsion
//   connection.gamma.1.2.1 = 1.0
//   lagrangian.expr = "0.5*(qd1^2 + qd2^2)"
//   numeric.seed = 42
//
// Values may be double-quoted (required when they contain '#' or leading /
// trailing spaces). Unquoted values are trimmed.
class ConfigMap {
public:
    static ConfigMap parseText(const std::string& text);
    static ConfigMap parseFile(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string getString(const std::string& key) const;
    std::string getString(const std::string& key, const std::string& fallback) const;
    double getDouble(const std::string& key) const;
    double getDouble(const std::string& key, double fallback) const;
    long long getInt(const std::string& key) const;
    long long getInt(const std::string& key, long long fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Keys beginning with `prefix`, in lexicographic order.
    std::vector<std::string> keysWithPrefix(const std::string& prefix) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// A validated scenario: the task plus the raw config it came from.
struct ScenarioConfig {
    std::string name;
    std::string task; // check-identity | simulate | transport | reduce | variation-check
    ConfigMap raw;

    static ScenarioConfig fromConfig(ConfigMap cfg, const std::string& taskOverride = "");
};

} // namespace covel
