#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace specal {

inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a of a file's bytes, hex-encoded.
std::string hash_file(const std::filesystem::path& path);

/// Reproducibility record written beside every command's outputs: resolved
/// configuration, master seed and input hashes pin the run; the timestamp
/// is informational (outputs themselves never contain one).
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_hashes;
    std::string config_dump;  // canonical JSON of the resolved options

    void set_config(const nlohmann::json& cfg);
    void add_input(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;
};

}  // namespace specal
