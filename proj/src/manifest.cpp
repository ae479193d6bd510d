#include "adatg/manifest.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adatg/config.hpp"

namespace adatg {

RunManifest make_manifest(const std::string& command_line, const std::string& config_text,
                          uint64_t seed) {
    RunManifest m;
    m.command_line = command_line;
    m.config_hash = hex64(fnv1a64(config_text));
    m.seed = seed;
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m.created_utc = buf;
    return m;
}

void write_manifest(const std::string& dir, const RunManifest& manifest, bool force) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/manifest.txt";
    if (!force && std::filesystem::exists(path))
        throw std::runtime_error("write_manifest: " + path +
                                 " already exists (pick a fresh output directory or use --force)");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    out << "command=" << manifest.command_line << "\n"
        << "config_hash=" << manifest.config_hash << "\n"
        << "seed=" << manifest.seed << "\n"
        << "created_utc=" << manifest.created_utc << "\n"
        << "version=" << manifest.tool_version << "\n";
    if (!out) throw std::runtime_error("write_manifest: short write to " + path);
}

RunManifest read_manifest(const std::string& dir) {
    std::ifstream in(dir + "/manifest.txt");
    if (!in) throw std::runtime_error("read_manifest: no manifest.txt in " + dir);
    RunManifest m;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "command") m.command_line = val;
        else if (key == "config_hash") m.config_hash = val;
        else if (key == "seed") m.seed = std::stoull(val);
        else if (key == "created_utc") m.created_utc = val;
        else if (key == "version") m.tool_version = val;
    }
    return m;
}

}  // namespace adatg
