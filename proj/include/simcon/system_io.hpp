#pragma once

#include <filesystem>
#include <string>

#include "simcon/system.hpp"

namespace simcon {

/// Parse a system-description file (JSON, schema in README). The parse is
/// strict: unknown fields are rejected, dimensions and parameter weights
/// are validated before construction.
[[nodiscard]] ParametricSystem load_system(const std::filesystem::path& path);
[[nodiscard]] ParametricSystem parse_system(const std::string& text,
                                            const std::string& origin = "<string>");

/// Serialize back to the same schema: builder block for built families,
/// per-parameter matrices otherwise. save/load round-trips bit-exactly.
[[nodiscard]] std::string system_to_json(const ParametricSystem& sys);
void save_system(const ParametricSystem& sys, const std::filesystem::path& path);

} // namespace simcon
