#include "cyborg/pipeline.hpp"

#include <future>
#include <set>

namespace cyborg {

void PipelineConfig::validate() const {
    if (levels < 1 || levels > 256) throw ConfigError("G", "must be in 1..256");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must be in (0, 1]");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau", "must be in (0, 1)");
    if (max_classes < 1 || max_classes > kMaxClasses) throw ConfigError("max_classes", "must be in 1..8");
    if (!(blur_width >= 1.0)) throw ConfigError("B", "must be >= 1");
    if (k < 1) throw ConfigError("k", "must be >= 1");
    if (!(r_excl >= 1.0)) throw ConfigError("r_excl", "must be >= 1");
    if (downsample_f < 1 || downsample_f > 288) throw ConfigError("downsample_f", "must be in 1..288");
    if (m_thresh < 0) throw ConfigError("m_thresh", "must be >= 0");
    if (!(tolerance_px >= 0.0)) throw ConfigError("tolerance_px", "must be >= 0");
    if (mosaic_rows < 1) throw ConfigError("M", "must be >= 1");
    if (mosaic_cols < 1) throw ConfigError("N", "must be >= 1");
    if (chip_w < 1) throw ConfigError("chip_w", "must be >= 1");
    if (chip_h < 1) throw ConfigError("chip_h", "must be >= 1");
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
    j = nlohmann::json{{"G", c.levels},
                       {"alpha", c.alpha},
                       {"tau", c.tau},
                       {"max_classes", c.max_classes},
                       {"B", c.blur_width},
                       {"k", c.k},
                       {"r_excl", c.r_excl},
                       {"downsample_f", c.downsample_f},
                       {"m_thresh", c.m_thresh},
                       {"tolerance_px", c.tolerance_px},
                       {"M", c.mosaic_rows},
                       {"N", c.mosaic_cols},
                       {"coarse_memory", c.coarse_memory},
                       {"chip_w", c.chip_w},
                       {"chip_h", c.chip_h}};
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) throw ConfigError(key, "expected a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ConfigError(key, "expected an integer");
        } else {
            if (!it->is_number()) throw ConfigError(key, "expected a number");
        }
        out = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig c) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    static const std::set<std::string> known{"G", "alpha", "tau", "max_classes", "B", "k", "r_excl",
                                             "downsample_f", "m_thresh", "tolerance_px", "M", "N",
                                             "coarse_memory", "chip_w", "chip_h"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError(key, "unknown parameter");
    }
    read_field(j, "G", c.levels);
    read_field(j, "alpha", c.alpha);
    read_field(j, "tau", c.tau);
    read_field(j, "max_classes", c.max_classes);
    read_field(j, "B", c.blur_width);
    read_field(j, "k", c.k);
    read_field(j, "r_excl", c.r_excl);
    read_field(j, "downsample_f", c.downsample_f);
    read_field(j, "m_thresh", c.m_thresh);
    read_field(j, "tolerance_px", c.tolerance_px);
    read_field(j, "M", c.mosaic_rows);
    read_field(j, "N", c.mosaic_cols);
    read_field(j, "coarse_memory", c.coarse_memory);
    read_field(j, "chip_w", c.chip_w);
    read_field(j, "chip_h", c.chip_h);
    c.validate();
    return c;
}

ChainProducts run_interest_chain(const RasterImage& rgb, const PipelineConfig& config,
                                 const std::vector<std::uint8_t>* mask) {
    config.validate();
    ChainProducts out;
    out.hsi = rgb_to_hsi(rgb);

    const auto params = config.peak_params();
    auto segment = [&params](const RasterImage* plane) { return segment_plane(*plane, params); };
    auto fs = std::async(std::launch::async, segment, &out.hsi.s);
    auto fi = std::async(std::launch::async, segment, &out.hsi.i);
    out.segmentation[0] = segment(&out.hsi.h);
    out.segmentation[1] = fs.get();
    out.segmentation[2] = fi.get();

    for (int p = 0; p < 3; ++p) out.uncommon[p] = uncommon_map(out.segmentation[p].map);
    out.interest_raw = fuse_interest(out.uncommon[0], out.uncommon[1], out.uncommon[2]);

    InterestMap to_blur = out.interest_raw;
    if (mask) {
        apply_mask(to_blur, *mask);
        out.mask = *mask;
    }
    out.interest_blur = gaussian_blur(to_blur, config.blur_width);
    out.points = top_k_peaks(out.interest_blur, config.k, config.r_excl);
    return out;
}

nlohmann::json points_to_json(const std::vector<InterestPoint>& points) {
    auto arr = nlohmann::json::array();
    for (const auto& p : points) {
        arr.push_back({{"x", p.x}, {"y", p.y}, {"score", p.score}, {"rank", p.rank},
                       {"color", std::string(rank_color(p.rank))}});
    }
    return arr;
}

std::vector<InterestPoint> points_from_json(const nlohmann::json& j) {
    const auto& arr = j.is_object() && j.contains("points") ? j.at("points") : j;
    if (!arr.is_array()) throw std::invalid_argument("points JSON must be an array");
    std::vector<InterestPoint> points;
    for (const auto& e : arr) {
        points.push_back({e.at("x").get<int>(), e.at("y").get<int>(), e.value("score", 0.0),
                          e.value("rank", static_cast<int>(points.size()) + 1)});
    }
    return points;
}

}  // namespace cyborg
