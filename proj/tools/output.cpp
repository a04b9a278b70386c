#include "output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "csge/error.hpp"

namespace csge::cli {

std::string version() { return CSGE_VERSION; }

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw Error(Error::Category::config, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

RunOutput::RunOutput(const std::filesystem::path& root, const std::string& command, const RunConfig& config)
    : hash_(config_hash(config.raw)) {
    dir_ = root / command / hash_;
    std::filesystem::create_directories(dir_);
    write_json("config.json", config.raw);
}

void RunOutput::write_csv(const std::string& name, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) const {
    std::ostringstream out;
    out << "# csge " << version() << " config_hash=" << hash_ << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    write_atomic(dir_ / name, out.str());
}

void RunOutput::write_json(const std::string& name, const json& value) const {
    write_atomic(dir_ / name, value.dump(2) + "\n");
}

}  // namespace csge::cli
