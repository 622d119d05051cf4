#include "core/writers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace cellplan {

namespace {

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

} // namespace

std::string grid_csv(const RasterGrid& grid) {
    std::string out = "x,y,value\n";
    out.reserve(out.size() + static_cast<std::size_t>(grid.width) * grid.height * 24);
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            append_num(out, grid.pixel_x(i));
            out += ',';
            append_num(out, grid.pixel_y(j));
            out += ',';
            append_num(out, grid.at(i, j));
            out += '\n';
        }
    }
    return out;
}

std::string grid_pgm(const RasterGrid& grid) {
    std::string out = "P2\n";
    out += std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(grid.width) * grid.height * 4);
    for (int j = grid.height - 1; j >= 0; --j) {
        for (int i = 0; i < grid.width; ++i) {
            const double v = grid.at(i, j);
            long level = 0;
            if (!is_no_link(v)) {
                level = std::lround((v + 140.0) * 255.0 / 90.0);
                level = std::clamp(level, 0L, 255L);
            }
            if (i)
                out += ' ';
            out += std::to_string(level);
        }
        out += '\n';
    }
    return out;
}

std::string pattern_csv(const SampledPattern& pattern) {
    std::string out = "angle_rad,gain\n";
    out.reserve(out.size() + pattern.size() * 28);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        append_num(out, pattern.angle(i));
        out += ',';
        append_num(out, pattern.gains[i]);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(errc::io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        raise(errc::io, "read failed: " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(errc::io, "cannot create " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        raise(errc::io, "write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace cellplan
