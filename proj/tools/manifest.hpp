#pragma once

#include <filesystem>
#include <string>

namespace vncs::cli {

inline constexpr const char* kManifestName = "manifest.tsv";

std::string sha256_file(const std::filesystem::path& path);

// Rewrites <directory>/manifest.tsv listing every regular file below the
// directory (path relative to it, SHA-256, size in bytes), sorted by path.
void write_manifest(const std::filesystem::path& directory);

// True if every listed file exists with the recorded digest and every file
// present is listed.
bool verify_manifest(const std::filesystem::path& directory, std::string* problem = nullptr);

}  // namespace vncs::cli
