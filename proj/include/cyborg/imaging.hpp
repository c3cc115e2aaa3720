#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cyborg {

/// Planar, row-major 8-bit raster with 1 or 3 interleaved channels.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
    RasterImage(int width, int height, int channels, std::vector<std::uint8_t> samples);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return samples_.empty(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    std::uint8_t at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }
    std::uint8_t& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }

    std::span<const std::uint8_t> samples() const { return samples_; }
    std::span<std::uint8_t> samples() { return samples_; }

    bool operator==(const RasterImage&) const = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::uint8_t> samples_;
};

struct HsiPlanes {
    RasterImage h;
    RasterImage s;
    RasterImage i;
};

struct MosaicGrid {
    int rows = 1;
    int cols = 1;
    int tile_w = 0;
    int tile_h = 0;

    int width() const { return cols * tile_w; }
    int height() const { return rows * tile_h; }
};

struct Chip {
    RasterImage image;
    std::size_t valid_pixels = 0;

    double valid_fraction() const {
        return image.pixel_count() == 0 ? 0.0
                                        : static_cast<double>(valid_pixels) / image.pixel_count();
    }
};

// Classic hexagonal-hue HSI, each plane quantized to 0..255. Achromatic pixels get H=0.
HsiPlanes rgb_to_hsi(const RasterImage& rgb);

// Block-mean downsampling, round half up; partial trailing blocks are dropped.
RasterImage downsample(const RasterImage& img, int fx, int fy);

// Abuts tiles row-major from the top-left; tiles[r * grid.cols + c] is tile (r, c).
RasterImage assemble_mosaic(std::span<const RasterImage> tiles, const MosaicGrid& grid);

// w×h window whose top-left is (cx - w/2, cy - h/2). Out-of-image samples are 0.
Chip crop_chip(const RasterImage& img, int cx, int cy, int w, int h);

// Channel extraction / replication helpers used by I/O and tests.
RasterImage extract_channel(const RasterImage& img, int channel);

}  // namespace cyborg
