#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyborg/imaging.hpp"

namespace cyborg {

class IoError : public std::runtime_error {
public:
    IoError(const std::filesystem::path& path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), path_(path) {}
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

using Rgb = std::array<std::uint8_t, 3>;

// 8-bit gray or RGB PNG. Gray+alpha / RGBA inputs have alpha dropped; palette and
// 16-bit inputs are expanded/stripped to 8-bit.
RasterImage read_png(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const RasterImage& img);
void write_png(const std::filesystem::path& path, const RasterImage& img);

// Palette PNG: img is 1-channel and each sample indexes into palette.
std::vector<std::uint8_t> encode_indexed_png(const RasterImage& indices, std::span<const Rgb> palette);
void write_indexed_png(const std::filesystem::path& path, const RasterImage& indices,
                       std::span<const Rgb> palette);

// Binary P5 / P6 with maxval 255.
RasterImage read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const RasterImage& img);

// Dispatches on extension (.png, .ppm, .pgm, .pnm).
RasterImage read_image(const std::filesystem::path& path);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace cyborg
