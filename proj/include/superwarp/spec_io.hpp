#pragma once

// TOML spec files for manifolds and warped products.

#include "superwarp/warped.hpp"

#include <filesystem>
#include <variant>

namespace superwarp {

struct LoadedSpec {
  std::variant<ManifoldSpec, WarpedSpec> spec;
  std::string checksum;  // FNV-1a of the file bytes
  bool is_warped() const { return std::holds_alternative<WarpedSpec>(spec); }
};

/// Parses spec text. Throws ParseError on malformed input and
/// InvariantViolation when the metric fails validation.
LoadedSpec parse_spec(std::string_view text, const std::string& source = "<text>");
LoadedSpec load_spec(const std::filesystem::path& path);

/// Directory of the specs shipped with the repository.
std::filesystem::path bundled_spec_dir();
std::vector<std::filesystem::path> bundled_specs();

}  // namespace superwarp
