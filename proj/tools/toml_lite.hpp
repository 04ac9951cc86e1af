#pragma once

// Minimal TOML reader covering the config surface used here: [table]
// headers (dotted allowed), key = value with strings, numbers, booleans and
// flat arrays, # comments. Everything lands in an nlohmann::json object.
// Files ending in .json are parsed as JSON directly.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace toml_lite {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline nlohmann::json parse_scalar(const std::string& raw, const std::string& where) {
    std::string v = trim(raw);
    if (v.empty()) throw std::runtime_error(where + ": empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw std::runtime_error(where + ": unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        std::size_t used = 0;
        if (v.find_first_of(".eE") == std::string::npos) {
            long long i = std::stoll(v, &used);
            if (used == v.size()) return i;
        }
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw std::runtime_error(where + ": cannot parse value '" + v + "'");
}

inline nlohmann::json parse_value(const std::string& raw, const std::string& where) {
    std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw std::runtime_error(where + ": unterminated array");
        nlohmann::json arr = nlohmann::json::array();
        std::string inner = v.substr(1, v.size() - 2);
        std::string item;
        std::istringstream is(inner);
        while (std::getline(is, item, ',')) {
            if (trim(item).empty()) continue;
            arr.push_back(parse_scalar(item, where));
        }
        return arr;
    }
    return parse_scalar(v, where);
}

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        in >> j;
        return j;
    }

    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        std::string where = path + ":" + std::to_string(lineno);
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw std::runtime_error(where + ": malformed table header");
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty()) throw std::runtime_error(where + ": empty table name");
            table = &root;
            std::istringstream parts(name);
            std::string part;
            while (std::getline(parts, part, '.')) table = &(*table)[trim(part)];
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw std::runtime_error(where + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw std::runtime_error(where + ": empty key");
        (*table)[key] = parse_value(s.substr(eq + 1), where);
    }
    return root;
}

}  // namespace toml_lite
