#include "cyborg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cyborg::synthetic {

bool Ellipse::contains(int x, int y) const {
    const double dx = (x + 0.5 - cx) / rx;
    const double dy = (y + 0.5 - cy) / ry;
    return dx * dx + dy * dy <= 1.0;
}

RasterImage painted_wall(int width, int height, Rgb background, const std::vector<Ellipse>& spots,
                         double noise_sigma, std::uint32_t seed) {
    RasterImage img(width, height, 3);
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Rgb c = background;
            for (const auto& e : spots) {
                if (e.contains(x, y)) c = e.color;
            }
            for (int ch = 0; ch < 3; ++ch) {
                double v = c[ch];
                if (noise_sigma > 0.0) v += noise(rng);
                img.at(x, y, ch) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return img;
}

RasterImage ellipse_labels(int width, int height, const std::vector<Ellipse>& spots) {
    RasterImage img(width, height, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (std::size_t k = 0; k < spots.size(); ++k)
                if (spots[k].contains(x, y)) img.at(x, y) = static_cast<std::uint8_t>(k + 1);
    return img;
}

std::vector<Ellipse> two_wet_spots(int width, int height) {
    // Each ellipse covers pi·rx·ry ≈ 1.4% of the frame.
    const double rx = 0.075 * width;
    const double ry = 0.06 * height;
    return {
        {0.30 * width, 0.62 * height, rx, ry, kDarkWet},
        {0.72 * width, 0.40 * height, rx, ry, kDarkWet},
    };
}

}  // namespace cyborg::synthetic
