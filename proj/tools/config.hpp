#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "csge/params.hpp"
#include "csge/state.hpp"

namespace csge::cli {

using nlohmann::json;

/// A validated run configuration. `raw` is the document as given; every
/// command reads its own block from it.
struct RunConfig {
    json raw;
    DimensionlessParams params;
    std::optional<PhysicalParams> physical;
    Z0PhaseExponent z0_phase = default_z0_phase_exponent();
    std::uint64_t seed = 1;
};

// Throws ConfigError with a JSON-pointer-style location on schema violations.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& path);

// FNV-1a of the canonical (sorted-key, compact) serialization, 16 hex digits.
std::string config_hash(const json& doc);

// Typed accessors for optional fields with defaults. `where` names the block
// in error messages.
double number_or(const json& block, const char* key, double fallback, const std::string& where);
int integer_or(const json& block, const char* key, int fallback, const std::string& where);
bool boolean_or(const json& block, const char* key, bool fallback, const std::string& where);
std::string string_or(const json& block, const char* key, const std::string& fallback, const std::string& where);

// Rejects keys outside `allowed`.
void require_keys(const json& block, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace csge::cli
