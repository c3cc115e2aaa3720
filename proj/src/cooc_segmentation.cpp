#include "cyborg/cooc_segmentation.hpp"

#include <algorithm>
#include <array>

namespace cyborg {

CoocHistogram build_cooc_histogram(const RasterImage& plane, int levels) {
    if (plane.channels() != 1) throw std::invalid_argument("co-occurrence needs a single-channel plane");
    if (levels < 1 || levels > 256) throw std::invalid_argument("histogram levels must be in 1..256");
    if (plane.width() < 2 && plane.height() < 2) throw EmptyHistogramError("plane has no neighbour pairs");

    CoocHistogram hist;
    hist.levels = levels;
    hist.bins.assign(static_cast<std::size_t>(levels) * levels, 0);
    const int w = plane.width();
    const int h = plane.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int a = cooc_bin(plane.at(x, y), levels);
            if (x + 1 < w) {
                const int b = cooc_bin(plane.at(x + 1, y), levels);
                ++hist.at(a, b);
                ++hist.at(b, a);
            }
            if (y + 1 < h) {
                const int b = cooc_bin(plane.at(x, y + 1), levels);
                ++hist.at(a, b);
                ++hist.at(b, a);
            }
        }
    }
    hist.total_pairs = 2ull * ((static_cast<std::uint64_t>(w) - 1) * h + static_cast<std::uint64_t>(w) * (h - 1));
    return hist;
}

std::vector<PeakRegion> extract_peak_regions(const CoocHistogram& hist, const PeakParams& params) {
    std::vector<PeakRegion> regions;
    if (hist.total_pairs == 0) return regions;

    const int G = hist.levels;
    const int max_classes = std::clamp(params.max_classes, 0, kMaxClasses);
    std::vector<bool> claimed(hist.bins.size(), false);
    const double stop_level = params.tau * static_cast<double>(hist.total_pairs);

    while (static_cast<int>(regions.size()) < max_classes) {
        // Row-major scan with strict '>' keeps the lexicographically smallest bin on ties.
        int best = -1;
        for (std::size_t i = 0; i < hist.bins.size(); ++i) {
            if (claimed[i]) continue;
            if (best < 0 || hist.bins[i] > hist.bins[best]) best = static_cast<int>(i);
        }
        if (best < 0) break;
        const std::uint64_t peak = hist.bins[best];
        if (peak == 0 || static_cast<double>(peak) < stop_level) break;

        PeakRegion region;
        region.id = static_cast<int>(regions.size()) + 1;
        region.peak = {best / G, best % G};
        region.peak_count = peak;
        const double fill_level = params.alpha * static_cast<double>(peak);

        std::vector<int> stack{best};
        claimed[best] = true;
        while (!stack.empty()) {
            const int idx = stack.back();
            stack.pop_back();
            const int a = idx / G;
            const int b = idx % G;
            region.bins.push_back({a, b});
            region.mass += hist.bins[idx];

            constexpr int da[] = {-1, 1, 0, 0};
            constexpr int db[] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const int na = a + da[k];
                const int nb = b + db[k];
                if (na < 0 || nb < 0 || na >= G || nb >= G) continue;
                const int n = na * G + nb;
                if (claimed[n] || hist.bins[n] == 0) continue;
                if (static_cast<double>(hist.bins[n]) < fill_level) continue;
                claimed[n] = true;
                stack.push_back(n);
            }
        }
        std::sort(region.bins.begin(), region.bins.end());
        regions.push_back(std::move(region));
    }
    return regions;
}

std::vector<std::uint8_t> region_lookup(const std::vector<PeakRegion>& regions, int levels) {
    std::vector<std::uint8_t> lut(static_cast<std::size_t>(levels) * levels, 0);
    for (const auto& r : regions) {
        for (const auto& bc : r.bins) {
            if (bc.a < 0 || bc.b < 0 || bc.a >= levels || bc.b >= levels)
                throw std::invalid_argument("region bin outside histogram");
            lut[static_cast<std::size_t>(bc.a) * levels + bc.b] = static_cast<std::uint8_t>(r.id);
        }
    }
    return lut;
}

SegmentationMap assign_classes(const RasterImage& plane, const std::vector<PeakRegion>& regions, int levels) {
    if (plane.channels() != 1) throw std::invalid_argument("assign_classes needs a single-channel plane");
    const int w = plane.width();
    const int h = plane.height();
    SegmentationMap map{w, h, std::vector<std::uint8_t>(plane.pixel_count(), 0)};
    if (regions.empty()) return map;

    const auto lut = region_lookup(regions, levels);
    constexpr int dx[] = {1, -1, 0, 0};
    constexpr int dy[] = {0, 0, 1, -1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int a = cooc_bin(plane.at(x, y), levels);
            std::array<int, kMaxClasses + 1> votes{};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k];
                const int ny = y + dy[k];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                ++votes[lut[a * levels + cooc_bin(plane.at(nx, ny), levels)]];
            }
            // votes[0] collects pairs outside every region; they do not vote.
            int label = 0;
            int best = 0;
            for (int id = 1; id <= kMaxClasses; ++id) {
                if (votes[id] > best) {
                    best = votes[id];
                    label = id;
                }
            }
            map.at(x, y) = static_cast<std::uint8_t>(label);
        }
    }
    return map;
}

std::vector<ClassStats> class_areas(const SegmentationMap& map) {
    int max_label = 0;
    for (auto l : map.labels) max_label = std::max<int>(max_label, l);

    std::vector<ClassStats> stats(max_label + 1);
    std::vector<double> sx(max_label + 1, 0.0), sy(max_label + 1, 0.0);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const int l = map.at(x, y);
            ++stats[l].pixel_count;
            sx[l] += x;
            sy[l] += y;
        }
    }
    for (int id = 0; id <= max_label; ++id) {
        stats[id].class_id = id;
        if (stats[id].pixel_count > 0) {
            stats[id].centroid_x = sx[id] / static_cast<double>(stats[id].pixel_count);
            stats[id].centroid_y = sy[id] / static_cast<double>(stats[id].pixel_count);
        }
    }
    return stats;
}

PlaneSegmentation segment_plane(const RasterImage& plane, const PeakParams& params) {
    PlaneSegmentation out;
    out.histogram = build_cooc_histogram(plane, params.levels);
    out.regions = extract_peak_regions(out.histogram, params);
    out.map = assign_classes(plane, out.regions, params.levels);
    return out;
}

}  // namespace cyborg
