#pragma once

#include <cstdint>
#include <string>

#include "core/coverage.hpp"
#include "core/pattern.hpp"

namespace cellplan {

// x,y,value rows in pixel order (south to north, west to east within a
// row); the no-link sentinel is written as its numeric value.
std::string grid_csv(const RasterGrid& grid);

// Plain-text PGM (P2), north-up. dBm maps linearly from [-140, -50] onto
// [0, 255]: v = round((x + 140) * 255 / 90), clamped; no-link pixels are 0.
std::string grid_pgm(const RasterGrid& grid);

// angle_rad,gain rows over the sampled half-domain.
std::string pattern_csv(const SampledPattern& pattern);

std::string read_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit, used for scenario hashes and output checksums.
std::uint64_t fnv1a64(const std::string& data);

std::string hex64(std::uint64_t v);

} // namespace cellplan
