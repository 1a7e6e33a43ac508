#pragma once

#include <filesystem>
#include <string>

#include "plekit/types.hpp"

namespace plekit {

// Scan files are JSON, spectra are two-column CSV, AFM maps are whitespace
// separated text with a "nx ny dx_um dy_um" header. All numbers are written
// with shortest round-trip formatting, so read(write(x)) reproduces x
// bit-for-bit. Writers validate before touching the filesystem and go
// through a temp-file + rename so a failed write leaves nothing behind.

PleScan read_scan(const std::filesystem::path& path);
void write_scan(const PleScan& scan, const std::filesystem::path& path);

Spectrum read_spectrum(const std::filesystem::path& path, double resolution_nm = 0.35);
void write_spectrum(const Spectrum& spectrum, const std::filesystem::path& path);

AfmMap read_afm(const std::filesystem::path& path);
void write_afm(const AfmMap& map, const std::filesystem::path& path);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Write content to path atomically (temp file in the same directory, then
// rename). Throws IoError on any filesystem failure.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

} // namespace plekit
