#include "config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>

#include "csge/error.hpp"

namespace csge::cli {
namespace {

const json& object_at(const json& doc, const char* key, const std::string& where) {
    const json& v = doc.at(key);
    if (!v.is_object()) throw ConfigError("schema: " + where + "/" + key + " must be an object");
    return v;
}

double required_number(const json& block, const char* key, const std::string& where) {
    if (!block.contains(key)) throw ConfigError("schema: missing " + where + "/" + key);
    const json& v = block.at(key);
    if (!v.is_number()) throw ConfigError("schema: " + where + "/" + key + " must be a number");
    return v.get<double>();
}

DimensionlessParams parse_dimensionless(const json& b) {
    const std::string w = "/dimensionless";
    require_keys(b, {"tau2", "tau3", "k2", "k3", "x0", "z0"}, w);
    DimensionlessParams d;
    d.tau2 = required_number(b, "tau2", w);
    d.tau3 = required_number(b, "tau3", w);
    d.k2 = required_number(b, "k2", w);
    d.k3 = required_number(b, "k3", w);
    d.x0 = number_or(b, "x0", 0.0, w);
    d.z0 = number_or(b, "z0", 0.0, w);
    d.validate();
    return d;
}

PhysicalParams parse_physical(const json& b) {
    const std::string w = "/physical";
    require_keys(b, {"sigma0", "m", "mu_c", "B2", "B3", "b2", "b3", "t2", "t3", "k_y", "hbar", "g", "e"}, w);
    PhysicalParams p;
    p.sigma0 = required_number(b, "sigma0", w);
    p.m = required_number(b, "m", w);
    p.mu_c = required_number(b, "mu_c", w);
    p.B2 = number_or(b, "B2", 0.0, w);
    p.B3 = number_or(b, "B3", 0.0, w);
    p.b2 = number_or(b, "b2", 0.0, w);
    p.b3 = number_or(b, "b3", 0.0, w);
    p.t2 = required_number(b, "t2", w);
    p.t3 = required_number(b, "t3", w);
    p.k_y = number_or(b, "k_y", 0.0, w);
    p.hbar = required_number(b, "hbar", w);
    if (b.contains("g")) p.g = required_number(b, "g", w);
    if (b.contains("e")) p.e = required_number(b, "e", w);
    p.validate();
    return p;
}

}  // namespace

void require_keys(const json& block, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!block.is_object()) throw ConfigError("schema: " + where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : block.items())
        if (!ok.count(key)) throw ConfigError("schema: unknown key " + where + "/" + key);
}

double number_or(const json& block, const char* key, double fallback, const std::string& where) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    if (!block.at(key).is_number()) throw ConfigError("schema: " + where + "/" + key + " must be a number");
    return block.at(key).get<double>();
}

int integer_or(const json& block, const char* key, int fallback, const std::string& where) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    if (!block.at(key).is_number_integer()) throw ConfigError("schema: " + where + "/" + key + " must be an integer");
    return block.at(key).get<int>();
}

bool boolean_or(const json& block, const char* key, bool fallback, const std::string& where) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    if (!block.at(key).is_boolean()) throw ConfigError("schema: " + where + "/" + key + " must be a boolean");
    return block.at(key).get<bool>();
}

std::string string_or(const json& block, const char* key, const std::string& fallback, const std::string& where) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    if (!block.at(key).is_string()) throw ConfigError("schema: " + where + "/" + key + " must be a string");
    return block.at(key).get<std::string>();
}

RunConfig parse_config(const json& doc) {
    require_keys(doc,
                 {"dimensionless", "physical", "z0_phase", "seed", "description", "state", "correlate", "bell",
                  "entropy", "verify"},
                 "");
    const bool dimensionless = doc.contains("dimensionless");
    const bool physical = doc.contains("physical");
    if (dimensionless == physical)
        throw ConfigError("schema: exactly one of /dimensionless and /physical must be present");

    RunConfig cfg;
    cfg.raw = doc;
    if (dimensionless) {
        cfg.params = parse_dimensionless(object_at(doc, "dimensionless", ""));
    } else {
        cfg.physical = parse_physical(object_at(doc, "physical", ""));
        cfg.params = dimensionless_from_physical(*cfg.physical);
    }

    const std::string phase = string_or(doc, "z0_phase", "default", "");
    if (phase == "cubed")
        cfg.z0_phase = Z0PhaseExponent::cubed;
    else if (phase == "squared")
        cfg.z0_phase = Z0PhaseExponent::squared;
    else if (phase != "default")
        throw ConfigError("schema: /z0_phase must be \"cubed\" or \"squared\"");

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw ConfigError("schema: /seed must be a non-negative integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("description") && !doc.at("description").is_string())
        throw ConfigError("schema: /description must be a string");
    for (const char* block : {"state", "correlate", "bell", "entropy", "verify"})
        if (doc.contains(block)) object_at(doc, block, "");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

std::string config_hash(const json& doc) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : doc.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace csge::cli
