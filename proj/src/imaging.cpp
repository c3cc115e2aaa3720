#include "cyborg/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cyborg {

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1) throw std::invalid_argument("raster dimensions must be >= 1");
    if (channels != 1 && channels != 3) throw std::invalid_argument("raster must have 1 or 3 channels");
    samples_.assign(pixel_count() * channels_, fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> samples)
    : RasterImage(width, height, channels) {
    if (samples.size() != samples_.size()) {
        throw std::invalid_argument("sample count " + std::to_string(samples.size()) +
                                    " does not match " + std::to_string(samples_.size()));
    }
    samples_ = std::move(samples);
}

HsiPlanes rgb_to_hsi(const RasterImage& rgb) {
    if (rgb.channels() != 3) throw std::invalid_argument("rgb_to_hsi needs a 3-channel image");

    const int w = rgb.width();
    const int h = rgb.height();
    HsiPlanes out{RasterImage(w, h, 1), RasterImage(w, h, 1), RasterImage(w, h, 1)};

    auto src = rgb.samples();
    auto hs = out.h.samples();
    auto ss = out.s.samples();
    auto is = out.i.samples();
    for (std::size_t p = 0; p < rgb.pixel_count(); ++p) {
        const int r = src[3 * p];
        const int g = src[3 * p + 1];
        const int b = src[3 * p + 2];
        const int sum = r + g + b;
        const int mx = std::max({r, g, b});
        const int mn = std::min({r, g, b});

        is[p] = static_cast<std::uint8_t>((sum + 1) / 3);

        if (sum == 0) {
            ss[p] = 0;
        } else {
            const double mean = sum / 3.0;
            ss[p] = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - mn / mean)));
        }

        if (mx == mn) {
            hs[p] = 0;
            continue;
        }
        const double delta = mx - mn;
        double deg;
        if (mx == r) {
            deg = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
        } else if (mx == g) {
            deg = 60.0 * ((b - r) / delta + 2.0);
        } else {
            deg = 60.0 * ((r - g) / delta + 4.0);
        }
        hs[p] = static_cast<std::uint8_t>(std::lround(deg * 256.0 / 360.0) % 256);
    }
    return out;
}

RasterImage downsample(const RasterImage& img, int fx, int fy) {
    if (fx < 1 || fy < 1) throw std::invalid_argument("downsample factors must be >= 1");
    const int ow = img.width() / fx;
    const int oh = img.height() / fy;
    if (ow < 1 || oh < 1) throw std::invalid_argument("downsample factor larger than image");

    const int ch = img.channels();
    const int n = fx * fy;
    RasterImage out(ow, oh, ch);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            for (int c = 0; c < ch; ++c) {
                int acc = 0;
                for (int dy = 0; dy < fy; ++dy)
                    for (int dx = 0; dx < fx; ++dx) acc += img.at(x * fx + dx, y * fy + dy, c);
                out.at(x, y, c) = static_cast<std::uint8_t>((2 * acc + n) / (2 * n));
            }
        }
    }
    return out;
}

RasterImage assemble_mosaic(std::span<const RasterImage> tiles, const MosaicGrid& grid) {
    if (grid.rows < 1 || grid.cols < 1 || grid.tile_w < 1 || grid.tile_h < 1)
        throw std::invalid_argument("invalid mosaic grid");
    if (tiles.size() != static_cast<std::size_t>(grid.rows) * grid.cols)
        throw std::invalid_argument("tile count does not match grid");

    const int ch = tiles.front().channels();
    for (const auto& t : tiles) {
        if (t.width() != grid.tile_w || t.height() != grid.tile_h || t.channels() != ch)
            throw std::invalid_argument("mosaic tile has mismatched dimensions or channels");
    }

    RasterImage out(grid.width(), grid.height(), ch);
    const std::size_t row_bytes = static_cast<std::size_t>(grid.tile_w) * ch;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const auto& tile = tiles[static_cast<std::size_t>(r) * grid.cols + c];
            auto src = tile.samples();
            for (int y = 0; y < grid.tile_h; ++y) {
                std::copy_n(src.begin() + y * row_bytes, row_bytes,
                            &out.at(c * grid.tile_w, r * grid.tile_h + y));
            }
        }
    }
    return out;
}

Chip crop_chip(const RasterImage& img, int cx, int cy, int w, int h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("chip size must be positive");
    const int x0 = cx - w / 2;
    const int y0 = cy - h / 2;
    Chip chip{RasterImage(w, h, img.channels()), 0};
    for (int y = 0; y < h; ++y) {
        const int sy = y0 + y;
        if (sy < 0 || sy >= img.height()) continue;
        for (int x = 0; x < w; ++x) {
            const int sx = x0 + x;
            if (sx < 0 || sx >= img.width()) continue;
            for (int c = 0; c < img.channels(); ++c) chip.image.at(x, y, c) = img.at(sx, sy, c);
            ++chip.valid_pixels;
        }
    }
    return chip;
}

RasterImage extract_channel(const RasterImage& img, int channel) {
    if (channel < 0 || channel >= img.channels()) throw std::invalid_argument("channel out of range");
    RasterImage out(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(x, y) = img.at(x, y, channel);
    return out;
}

}  // namespace cyborg
