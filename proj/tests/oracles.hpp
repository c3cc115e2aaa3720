#pragma once

// Independent brute-force references. None of these call the routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cyborg/cooc_segmentation.hpp"
#include "cyborg/imaging.hpp"
#include "cyborg/interest.hpp"

namespace oracle {

// Mirror an index into [0, n) by repeated reflection about the borders.
inline int mirror(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

// Dense 2D convolution with the outer-product Gaussian, normalised in 2D.
inline cyborg::InterestMap dense_blur(const cyborg::InterestMap& in, double sigma) {
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k2((2 * r + 1) * (2 * r + 1));
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k2[(dy + r) * (2 * r + 1) + dx + r] = v;
            sum += v;
        }
    for (auto& v : k2) v /= sum;

    cyborg::InterestMap out(in.width, in.height);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    acc += k2[(dy + r) * (2 * r + 1) + dx + r] * in.at(mirror(x + dx, in.width), mirror(y + dy, in.height));
            out.at(x, y) = acc;
        }
    return out;
}

// k full scans; each picks the first strictly-greater unsuppressed pixel in (y, x) order.
inline std::vector<cyborg::InterestPoint> scan_peaks(const cyborg::InterestMap& m, int k, double r_excl) {
    std::vector<char> sup(m.values.size(), 0);
    std::vector<cyborg::InterestPoint> out;
    for (int it = 0; it < k; ++it) {
        int bx = -1, by = -1;
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                if (sup[y * m.width + x]) continue;
                if (bx < 0 || m.at(x, y) > m.at(bx, by)) {
                    bx = x;
                    by = y;
                }
            }
        if (bx < 0) break;
        out.push_back({bx, by, m.at(bx, by), it + 1});
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (std::hypot(x - bx, y - by) <= r_excl) sup[y * m.width + x] = 1;
    }
    return out;
}

// Weight per label by sorting an area table; returns label -> weight.
inline std::map<int, int> uncommon_weights(const cyborg::SegmentationMap& s) {
    std::map<int, int> area;
    for (auto l : s.labels)
        if (l != 0) ++area[l];
    std::vector<std::pair<int, int>> table(area.begin(), area.end());  // (label, area)
    // Bubble sort: larger area first, then smaller label.
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t j = 0; j + 1 < table.size() - i; ++j) {
            const auto& a = table[j];
            const auto& b = table[j + 1];
            if (a.second < b.second || (a.second == b.second && a.first > b.first)) std::swap(table[j], table[j + 1]);
        }
    std::map<int, int> w{{0, 0}};
    for (std::size_t i = 0; i < table.size(); ++i) w[table[i].first] = static_cast<int>(i) + 1;
    return w;
}

inline bool region_has_bin(const cyborg::PeakRegion& r, int a, int b) {
    for (const auto& bc : r.bins)
        if (bc.a == a && bc.b == b) return true;
    return false;
}

// Per-pixel vote enumeration over the four neighbour pairs.
inline std::vector<std::uint8_t> vote_labels(const cyborg::RasterImage& plane,
                                             const std::vector<cyborg::PeakRegion>& regions, int levels) {
    std::vector<std::uint8_t> out(plane.pixel_count(), 0);
    for (int y = 0; y < plane.height(); ++y)
        for (int x = 0; x < plane.width(); ++x) {
            std::map<int, int> votes;
            const int nbr[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
            for (const auto& n : nbr) {
                if (n[0] < 0 || n[1] < 0 || n[0] >= plane.width() || n[1] >= plane.height()) continue;
                const int a = plane.at(x, y) * levels / 256;
                const int b = plane.at(n[0], n[1]) * levels / 256;
                for (const auto& r : regions)
                    if (region_has_bin(r, a, b)) ++votes[r.id];
            }
            int best = 0, label = 0;
            for (const auto& [id, v] : votes)
                if (v > best) {
                    best = v;
                    label = id;
                }
            out[y * plane.width() + x] = static_cast<std::uint8_t>(label);
        }
    return out;
}

// True iff pixel (x, y) has a neighbour pair whose bin lies in region `id`.
inline bool pixel_has_pair_in(const cyborg::RasterImage& plane, const cyborg::PeakRegion& r, int x, int y, int levels) {
    const int nbr[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
    for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= plane.width() || n[1] >= plane.height()) continue;
        if (region_has_bin(r, plane.at(x, y) * levels / 256, plane.at(n[0], n[1]) * levels / 256)) return true;
    }
    return false;
}

inline cyborg::SegmentationMap random_segmentation(std::mt19937& rng, int w, int h) {
    std::uniform_int_distribution<int> kdist(1, 8);
    const int k = kdist(rng);
    // Skewed class probabilities so areas are mostly distinct but ties still occur.
    std::vector<double> weights{0.3};
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < k; ++i) weights.push_back(u(rng) * u(rng));
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    cyborg::SegmentationMap s{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    for (auto& l : s.labels) l = static_cast<std::uint8_t>(pick(rng));
    return s;
}

inline cyborg::RasterImage random_plane(std::mt19937& rng, int w, int h, int distinct_levels = 6) {
    // Blocky random plane: a few gray levels in patches so histograms have real peaks.
    std::uniform_int_distribution<int> level(0, distinct_levels - 1);
    std::uniform_int_distribution<int> jitter(-3, 3);
    std::vector<int> palette;
    std::uniform_int_distribution<int> gray(0, 255);
    for (int i = 0; i < distinct_levels; ++i) palette.push_back(gray(rng));
    cyborg::RasterImage img(w, h, 1);
    const int bs = 4;
    std::vector<int> block((w / bs + 1) * (h / bs + 1));
    for (auto& b : block) b = level(rng);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int v = palette[block[(y / bs) * (w / bs + 1) + x / bs]] + jitter(rng);
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    return img;
}

inline cyborg::InterestMap random_interest(std::mt19937& rng, int w, int h) {
    std::uniform_int_distribution<int> v(0, 24);
    cyborg::InterestMap m(w, h);
    for (auto& x : m.values) x = v(rng);
    return m;
}

}  // namespace oracle
