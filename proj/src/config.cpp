#include "covel/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace covel {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool validKey(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') return false;
    return true;
}

} // namespace

ConfigMap ConfigMap::parseText(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineNo) + ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (!validKey(key))
            throw ConfigError("config line " + std::to_string(lineNo) + ": bad key '" + key + "'");
        if (!value.empty() && value.front() == '"') {
            auto close = value.find('"', 1);
            if (close == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineNo) + ": unterminated quote");
            std::string rest = trim(value.substr(close + 1));
            if (!rest.empty() && rest[0] != '#')
                throw ConfigError("config line " + std::to_string(lineNo) + ": trailing content after quote");
            value = value.substr(1, close - 1);
        } else {
            auto hash = value.find('#');
            if (hash != std::string::npos) value = trim(value.substr(0, hash));
            if (value.empty())
                throw ConfigError("config line " + std::to_string(lineNo) + ": empty value for '" + key + "'");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parseFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseText(buf.str());
}

std::string ConfigMap::getString(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string ConfigMap::getString(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::getDouble(const std::string& key) const {
    const std::string s = getString(key);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ConfigError("config key " + key + ": not a number: '" + s + "'");
    return v;
}

double ConfigMap::getDouble(const std::string& key, double fallback) const {
    return has(key) ? getDouble(key) : fallback;
}

long long ConfigMap::getInt(const std::string& key) const {
    const std::string s = getString(key);
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw ConfigError("config key " + key + ": not an integer: '" + s + "'");
    return v;
}

long long ConfigMap::getInt(const std::string& key, long long fallback) const {
    return has(key) ? getInt(key) : fallback;
}

std::vector<std::string> ConfigMap::keysWithPrefix(const std::string& prefix) const {
    std::vector<std::string> keys;
    for (auto it = values_.lower_bound(prefix); it != values_.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        keys.push_back(it->first);
    }
    return keys;
}

ScenarioConfig ScenarioConfig::fromConfig(ConfigMap cfg, const std::string& taskOverride) {
    ScenarioConfig sc;
    sc.task = taskOverride.empty() ? cfg.getString("task") : taskOverride;
    if (cfg.has("task") && !taskOverride.empty() && cfg.getString("task") != taskOverride)
        throw ConfigError("task in config ('" + cfg.getString("task") + "') conflicts with the subcommand '" +
                          taskOverride + "'");
    static const char* kTasks[] = {"check-identity", "simulate", "transport", "reduce", "variation-check"};
    bool known = false;
    for (const char* t : kTasks) known = known || sc.task == t;
    if (!known) throw ConfigError("unknown task: " + sc.task);

    sc.name = cfg.getString("scenario.name", sc.task);

    // Numeric parameters must be strictly positive where present.
    for (const char* key : {"numeric.jets", "numeric.steps", "numeric.samples"})
        if (cfg.has(key) && cfg.getInt(key) <= 0) throw ConfigError(std::string(key) + " must be positive");
    for (const char* key : {"numeric.step", "numeric.tolerance", "numeric.eps"})
        if (cfg.has(key) && cfg.getDouble(key) <= 0.0) throw ConfigError(std::string(key) + " must be positive");

    sc.raw = std::move(cfg);
    return sc;
}

} // namespace covel
