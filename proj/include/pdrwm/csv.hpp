#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

namespace pdrwm {

/// First line of every CSV artifact: "# config_digest=<hex> seed=<n>".
void write_header_comment(std::ostream& out, const std::string& config_digest, std::uint64_t seed);

/// Opens `path` for writing, creating parent directories; throws Error on
/// failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace pdrwm
