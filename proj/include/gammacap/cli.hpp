#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace gammacap {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitNotConverged = 2,     // max stage reached or stopped on conditioning
    kExitDisconnected = 3,
};

/// 64-bit FNV-1a; used as the input digest in run manifests.
std::uint64_t fnv1a(std::string_view bytes);
std::string hexDigest(std::uint64_t digest);

/// Record of one CLI run, written with --manifest.
struct RunManifest {
    std::string command;
    std::string inputDigest;
    nlohmann::ordered_json config;
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    double elapsedSeconds = 0.0;
    std::string toolVersion = kToolVersion;

    nlohmann::ordered_json toJson() const;
};

/// Rounds to 15 significant digits so that JSON output stays short and stable.
double round15(double v);

/// Entry point of the `gammacap` tool; results go to `out`, diagnostics to `err`.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gammacap
