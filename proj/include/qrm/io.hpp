#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qrm/grid.hpp"
#include "qrm/optimizer.hpp"

namespace qrm::io {

/// Shortest decimal that parses back to the same bits.
std::string format_double(double x);
double parse_double(const std::string& token, const std::string& where);

// --- field and data files ------------------------------------------------
//
// Text formats with '#' header lines carrying the full grid metadata, then
// CSV rows of nodal values. Every number is written in shortest round-trip
// form, so read(write(x)) == x bit-exactly.

void write_spatial_field(const std::filesystem::path& path, const SpatialField& field,
                         const SpaceTimeGrid& grid);
std::pair<SpatialField, SpaceTimeGrid> read_spatial_field(const std::filesystem::path& path);

void write_cauchy(const std::filesystem::path& path, const CauchyData& data);
CauchyData read_cauchy(const std::filesystem::path& path);

void write_history_csv(const std::filesystem::path& path, const ConvergenceHistory& history);
ConvergenceHistory read_history_csv(const std::filesystem::path& path);

/// Flat "key = value" text; '#' comments; repeated keys allowed.
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigFile {
    std::string origin; // file name for error messages
    std::vector<ConfigEntry> entries;

    bool has(const std::string& key) const;
    /// Last value wins for single-valued keys.
    std::string get(const std::string& key, const std::string& fallback) const;
    std::vector<std::string> get_all(const std::string& key) const;
};

ConfigFile parse_config_text(const std::string& text, const std::string& origin);
ConfigFile parse_config_file(const std::filesystem::path& path);

void write_summary(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& items);

// --- manifest -------------------------------------------------------------

/// FNV-1a 64-bit over the file bytes.
std::uint64_t checksum_file(const std::filesystem::path& path);

/// Writes "checksum  name" lines, sorted by name, for every regular file in
/// the directory except the manifest itself.
void write_manifest(const std::filesystem::path& dir);

/// Recomputes all checksums; returns the mismatching or missing names.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

} // namespace qrm::io
