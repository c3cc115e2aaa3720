#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cyborg/imaging.hpp"

namespace cyborg {

inline constexpr int kDefaultCoocBins = 64;
inline constexpr int kMaxClasses = 8;

class EmptyHistogramError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

constexpr int cooc_bin(std::uint8_t v, int levels) { return v * levels / 256; }

/// Symmetric 2D co-occurrence histogram over (pixel, right neighbour) and
/// (pixel, down neighbour) pairs, each pair accumulated in both orders.
struct CoocHistogram {
    int levels = kDefaultCoocBins;
    std::vector<std::uint64_t> bins;
    std::uint64_t total_pairs = 0;

    std::uint64_t at(int a, int b) const { return bins[static_cast<std::size_t>(a) * levels + b]; }
    std::uint64_t& at(int a, int b) { return bins[static_cast<std::size_t>(a) * levels + b]; }
};

struct BinCoord {
    int a = 0;
    int b = 0;
    auto operator<=>(const BinCoord&) const = default;
};

struct PeakRegion {
    int id = 0;                   // 1..8
    std::vector<BinCoord> bins;   // sorted, 4-connected, contains the peak
    BinCoord peak;
    std::uint64_t peak_count = 0;
    std::uint64_t mass = 0;
};

struct PeakParams {
    int levels = kDefaultCoocBins;
    int max_classes = kMaxClasses;
    double alpha = 0.05;   // flood-fill threshold relative to the peak
    double tau = 0.001;    // stop when the peak falls below tau * total_pairs
};

struct SegmentationMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;  // 0 = unsegmented

    std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const SegmentationMap&) const = default;
};

struct ClassStats {
    int class_id = 0;
    std::size_t pixel_count = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

// levels in 1..256.
CoocHistogram build_cooc_histogram(const RasterImage& plane, int levels = kDefaultCoocBins);

std::vector<PeakRegion> extract_peak_regions(const CoocHistogram& hist, const PeakParams& params = {});

// Bin -> region id lookup (0 = no region), levels × levels row-major.
std::vector<std::uint8_t> region_lookup(const std::vector<PeakRegion>& regions, int levels);

// regions must come from a histogram with the same number of levels.
SegmentationMap assign_classes(const RasterImage& plane, const std::vector<PeakRegion>& regions,
                               int levels = kDefaultCoocBins);

// One entry per class id 0..max(label). Empty classes report count 0, centroid (0,0).
std::vector<ClassStats> class_areas(const SegmentationMap& map);

struct PlaneSegmentation {
    CoocHistogram histogram;
    std::vector<PeakRegion> regions;
    SegmentationMap map;
};

// Histogram -> regions -> labels for one plane.
PlaneSegmentation segment_plane(const RasterImage& plane, const PeakParams& params = {});

}  // namespace cyborg
