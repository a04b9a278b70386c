#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace csge::cli {

std::string version();

// Shortest text that round-trips the double.
std::string format_number(double v);

// Writes to a temporary sibling, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// results/<command>/<config-hash>/ for one run.
class RunOutput {
public:
    RunOutput(const std::filesystem::path& root, const std::string& command, const RunConfig& config);

    const std::filesystem::path& dir() const { return dir_; }
    const std::string& hash() const { return hash_; }

    // "# csge <version> config_hash=<hash>", the header row, then one line per row.
    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) const;
    void write_json(const std::string& name, const json& value) const;

private:
    std::filesystem::path dir_;
    std::string hash_;
};

}  // namespace csge::cli
