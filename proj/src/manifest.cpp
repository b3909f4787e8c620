#include "specal/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"

namespace specal {

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot hash missing file " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char out[32];
    std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

void RunManifest::set_config(const nlohmann::json& cfg) { config_dump = cfg.dump(); }

void RunManifest::add_input(const std::filesystem::path& path) {
    input_hashes.emplace_back(path.string(), hash_file(path));
}

void RunManifest::write(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["tool"] = "specal";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["master_seed"] = seed;
    j["config"] = config_dump.empty() ? nlohmann::json::object()
                                      : nlohmann::json::parse(config_dump);
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [file, hash] : input_hashes) inputs[file] = hash;
    j["input_hashes"] = inputs;
    const auto now = std::chrono::system_clock::now();
    j["created_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace specal
