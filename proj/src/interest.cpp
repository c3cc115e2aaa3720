#include "cyborg/interest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cyborg {

std::string_view rank_color(int rank) {
    switch (rank) {
        case 1: return "green";
        case 2: return "blue";
        case 3: return "red";
        default: return "white";
    }
}

UncommonMap uncommon_map(const SegmentationMap& map) {
    auto stats = class_areas(map);
    std::vector<ClassStats> labelled;
    for (const auto& s : stats) {
        if (s.class_id != 0 && s.pixel_count > 0) labelled.push_back(s);
    }
    std::stable_sort(labelled.begin(), labelled.end(), [](const ClassStats& a, const ClassStats& b) {
        return a.pixel_count > b.pixel_count;
    });

    std::array<std::uint8_t, 256> weight_of{};
    for (std::size_t r = 0; r < labelled.size(); ++r)
        weight_of[labelled[r].class_id] = static_cast<std::uint8_t>(r + 1);

    UncommonMap out{map.width, map.height, std::vector<std::uint8_t>(map.labels.size())};
    std::transform(map.labels.begin(), map.labels.end(), out.weights.begin(),
                   [&](std::uint8_t l) { return weight_of[l]; });
    return out;
}

InterestMap fuse_interest(const UncommonMap& h, const UncommonMap& s, const UncommonMap& i) {
    if (h.width != s.width || h.width != i.width || h.height != s.height || h.height != i.height)
        throw std::invalid_argument("uncommon maps differ in size");
    InterestMap out(h.width, h.height);
    for (std::size_t p = 0; p < out.values.size(); ++p)
        out.values[p] = static_cast<double>(h.weights[p] + s.weights[p] + i.weights[p]);
    return out;
}

int reflect_index(int i, int n) {
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (auto& v : k) v /= sum;
    return k;
}

InterestMap gaussian_blur(const InterestMap& map, double width) {
    if (width < 1.0) throw std::invalid_argument("blur width must be >= 1");
    const auto kernel = gaussian_kernel(width);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = map.width;
    const int h = map.height;

    InterestMap tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) acc += kernel[t + radius] * map.at(reflect_index(x + t, w), y);
            tmp.at(x, y) = acc;
        }
    }
    InterestMap out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) acc += kernel[t + radius] * tmp.at(x, reflect_index(y + t, h));
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<InterestPoint> top_k_peaks(const InterestMap& map, int k, double r_excl) {
    if (map.values.empty()) throw std::invalid_argument("interest map is empty");
    if (k < 1) throw std::invalid_argument("k must be >= 1");

    std::vector<std::size_t> order(map.values.size());
    std::iota(order.begin(), order.end(), 0);
    // Row-major index order is (y, x) order, so a stable sort keeps the tie-break.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return map.values[a] > map.values[b]; });

    std::vector<bool> suppressed(map.values.size(), false);
    const int reach = static_cast<int>(std::floor(r_excl));
    const double r2 = r_excl * r_excl;

    std::vector<InterestPoint> points;
    for (std::size_t idx : order) {
        if (static_cast<int>(points.size()) == k) break;
        if (suppressed[idx]) continue;
        const int px = static_cast<int>(idx % map.width);
        const int py = static_cast<int>(idx / map.width);
        points.push_back({px, py, map.values[idx], static_cast<int>(points.size()) + 1});

        for (int y = std::max(0, py - reach); y <= std::min(map.height - 1, py + reach); ++y) {
            for (int x = std::max(0, px - reach); x <= std::min(map.width - 1, px + reach); ++x) {
                const double d2 = static_cast<double>((x - px) * (x - px) + (y - py) * (y - py));
                if (d2 <= r2) suppressed[static_cast<std::size_t>(y) * map.width + x] = true;
            }
        }
    }
    return points;
}

void apply_mask(InterestMap& map, const std::vector<std::uint8_t>& masked) {
    if (masked.size() != map.values.size()) throw std::invalid_argument("mask size does not match map");
    for (std::size_t p = 0; p < masked.size(); ++p)
        if (masked[p]) map.values[p] = 0.0;
}

}  // namespace cyborg
