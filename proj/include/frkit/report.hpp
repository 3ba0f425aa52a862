#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <string>

#include <json.hpp>

namespace frkit {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Every report value passes through a 9-significant-digit round so output
// bytes match the documented precision and stay identical across runs.
inline double round9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

inline std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Report envelope shared by all subcommands.
inline nlohmann::ordered_json report_envelope(const std::string& command, std::uint64_t seed,
                                              bool with_timestamp) {
    nlohmann::ordered_json j;
    j["tool"] = "frkit";
    j["version"] = kArtifactVersion;
    j["command"] = command;
    j["seed"] = seed;
    if (with_timestamp) j["generated_at"] = utc_timestamp();
    return j;
}

}  // namespace frkit
