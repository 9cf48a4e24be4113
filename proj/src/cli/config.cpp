#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "phi4/cli.hpp"

namespace phi4::cli {
namespace {

void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            flatten(*it, key, out);
        } else if (it->is_string()) {
            out[key] = it->get<std::string>();
        } else if (it->is_array()) {
            std::string joined;
            for (const auto& v : *it) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            out[key] = joined;
        } else {
            out[key] = it->dump();
        }
    }
}

void flatten(const boost::property_tree::ptree& t, const std::string& prefix, std::map<std::string, std::string>& out) {
    for (const auto& [k, child] : t) {
        const std::string key = prefix.empty() ? k : prefix + "." + k;
        if (child.empty()) out[key] = child.data();
        else flatten(child, key, out);
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
    throw ConfigError("parameter '" + key + "' = '" + value + "' is not " + what);
}

}  // namespace

Layer load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    Layer layer{path, {}};
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (ends_with(path, ".json") || (first != std::string::npos && text[first] == '{')) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config '" + path + "': " + e.what());
        }
        if (j.contains("parameters") && j["parameters"].is_object()) j = j["parameters"];
        flatten(j, "", layer.values);
    } else {
        boost::property_tree::ptree t;
        try {
            std::istringstream is(text);
            boost::property_tree::read_ini(is, t);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError("config '" + path + "': " + e.message() + " at line " + std::to_string(e.line()));
        }
        flatten(t, "", layer.values);
    }
    return layer;
}

Params resolve(const std::string& subcommand, const std::vector<std::pair<std::string, std::string>>& defaults,
               const std::map<std::string, std::string>& flags, const std::vector<Layer>& files) {
    Params p;
    for (const auto& [key, def] : defaults) {
        Resolved r{def, "default"};
        for (const auto& layer : files) {
            if (auto it = layer.values.find(key); it != layer.values.end()) r = {it->second, layer.source};
            if (auto it = layer.values.find(subcommand + "." + key); it != layer.values.end()) r = {it->second, layer.source};
        }
        if (auto it = flags.find(key); it != flags.end()) r = {it->second, "flag"};
        p.set(key, r);
    }
    for (const auto& layer : files) {
        for (const auto& [key, value] : layer.values) {
            const auto dot = key.find('.');
            const std::string bare = dot == std::string::npos ? key : key.substr(dot + 1);
            const std::string scope = dot == std::string::npos ? subcommand : key.substr(0, dot);
            if (scope != subcommand) continue;
            const bool known = std::any_of(defaults.begin(), defaults.end(), [&](const auto& d) { return d.first == bare; });
            if (!known) throw ConfigError("config '" + layer.source + "': unknown parameter '" + key + "'");
        }
    }
    return p;
}

std::string Params::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing parameter '" + key + "'");
    return it->second.value;
}

double Params::real(const std::string& key) const {
    const std::string v = str(key);
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE) bad(key, v, "a number");
    return d;
}

long Params::integer(const std::string& key) const {
    const std::string v = str(key);
    char* end = nullptr;
    errno = 0;
    const long d = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno == ERANGE) bad(key, v, "an integer");
    return d;
}

unsigned long long Params::unsigned_integer(const std::string& key) const {
    const std::string v = str(key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long d = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || *end != '\0' || errno == ERANGE) bad(key, v, "a non-negative integer");
    return d;
}

bool Params::boolean(const std::string& key) const {
    const std::string v = str(key);
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    bad(key, v, "a boolean");
}

std::vector<double> Params::reals(const std::string& key) const {
    const std::string v = str(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double d = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') bad(key, v, "a comma-separated list of numbers");
        out.push_back(d);
    }
    if (out.empty()) bad(key, v, "a non-empty list");
    return out;
}

}  // namespace phi4::cli
