// Copyright 2026-present the betascope project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "betascope/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "betascope/error.hpp"

namespace betascope {

Command command_from_string(const std::string& name) {
    if (name == "generate") return Command::generate;
    if (name == "analyze") return Command::analyze;
    if (name == "certify") return Command::certify;
    if (name == "whitney") return Command::whitney;
    if (name == "curvature") return Command::curvature;
    if (name == "report") return Command::report;
    throw InputError("unknown command: " + name);
}

std::string to_string(Command c) {
    switch (c) {
        case Command::generate: return "generate";
        case Command::analyze: return "analyze";
        case Command::certify: return "certify";
        case Command::whitney: return "whitney";
        case Command::curvature: return "curvature";
        case Command::report: return "report";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

AnalysisConfig AnalysisConfig::parse_text(const std::string& text) {
    AnalysisConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InputError("config line " + std::to_string(lineno) + ": unclosed section");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw InputError("config line " + std::to_string(lineno) + ": empty key");
        cfg.sections_[section][key] = value;
    }
    if (cfg.has("", "command"))
        cfg.command = command_from_string(cfg.get_string("", "command", ""));
    cfg.output_dir = cfg.get_string("", "output_dir", cfg.output_dir);
    return cfg;
}

AnalysisConfig AnalysisConfig::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str());
}

bool AnalysisConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string AnalysisConfig::get_string(const std::string& section, const std::string& key,
                                       const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::string AnalysisConfig::require_string(const std::string& section,
                                           const std::string& key) const {
    if (!has(section, key))
        throw InputError("config: missing required key [" + section + "] " + key);
    return get_string(section, key, "");
}

double AnalysisConfig::get_double(const std::string& section, const std::string& key,
                                  double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InputError("config: [" + section + "] " + key + " is not a number: " + v);
    }
}

long AnalysisConfig::get_int(const std::string& section, const std::string& key,
                             long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InputError("config: [" + section + "] " + key + " is not an integer: " + v);
    }
}

bool AnalysisConfig::get_bool(const std::string& section, const std::string& key,
                              bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get_string(section, key, "");
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InputError("config: [" + section + "] " + key + " is not a boolean: " + v);
}

std::vector<std::string> AnalysisConfig::get_list(const std::string& section,
                                                  const std::string& key,
                                                  const std::vector<std::string>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<std::string> out;
    std::istringstream ls(get_string(section, key, ""));
    std::string item;
    while (std::getline(ls, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace betascope
