#pragma once

#include <cstdint>
#include <vector>

#include "cyborg/imaging.hpp"
#include "cyborg/raster_io.hpp"

namespace cyborg::synthetic {

inline constexpr Rgb kTan{200, 180, 140};
inline constexpr Rgb kDarkWet{60, 55, 50};

struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double rx = 1.0;
    double ry = 1.0;
    Rgb color = kDarkWet;

    // Pixel centre (x + 0.5, y + 0.5) inside the ellipse.
    bool contains(int x, int y) const;
};

// Uniform wall with filled ellipses and additive Gaussian noise (sigma in gray levels, 0 = none).
RasterImage painted_wall(int width, int height, Rgb background, const std::vector<Ellipse>& spots,
                         double noise_sigma, std::uint32_t seed);

// Binary/labelled raster of the ellipses (label = index + 1).
RasterImage ellipse_labels(int width, int height, const std::vector<Ellipse>& spots);

// Two dark ellipses on a tan wall, each under 2% of the area.
std::vector<Ellipse> two_wet_spots(int width, int height);

}  // namespace cyborg::synthetic
