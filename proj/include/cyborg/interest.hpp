#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "cyborg/cooc_segmentation.hpp"
#include "cyborg/imaging.hpp"

namespace cyborg {

/// Per-pixel uncommonness: 1 for the largest class up to K for the smallest,
/// 0 for unsegmented pixels.
struct UncommonMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> weights;

    std::uint8_t at(int x, int y) const { return weights[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const UncommonMap&) const = default;
};

struct InterestMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    InterestMap() = default;
    InterestMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const InterestMap&) const = default;
};

struct InterestPoint {
    int x = 0;
    int y = 0;
    double score = 0.0;
    int rank = 0;

    bool operator==(const InterestPoint&) const = default;
};

// green, blue, red for ranks 1..3; "white" past that.
std::string_view rank_color(int rank);

UncommonMap uncommon_map(const SegmentationMap& map);

InterestMap fuse_interest(const UncommonMap& h, const UncommonMap& s, const UncommonMap& i);

// Separable Gaussian, sigma = width, radius ceil(3 sigma), half-sample symmetric borders.
InterestMap gaussian_blur(const InterestMap& map, double width = 10.0);
std::vector<double> gaussian_kernel(double sigma);

// Greedy global-maximum picking with closed-disk suppression of radius r_excl.
// Ties go to the smallest (y, x).
std::vector<InterestPoint> top_k_peaks(const InterestMap& map, int k = 3, double r_excl = 20.0);

// Forces values to 0 wherever mask is nonzero; mask has the map's dimensions.
void apply_mask(InterestMap& map, const std::vector<std::uint8_t>& masked);

// Reflects an out-of-range coordinate into [0, n) (d c b a | a b c d | d c b a ...).
int reflect_index(int i, int n);

}  // namespace cyborg
