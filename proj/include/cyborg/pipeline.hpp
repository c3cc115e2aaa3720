#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyborg/cooc_segmentation.hpp"
#include "cyborg/imaging.hpp"
#include "cyborg/interest.hpp"

namespace cyborg {

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Every tunable of the chain. JSON keys are given next to each field.
struct PipelineConfig {
    int levels = kDefaultCoocBins;   // "G"
    double alpha = 0.05;             // "alpha"
    double tau = 0.001;              // "tau"
    int max_classes = kMaxClasses;   // "max_classes"
    double blur_width = 10.0;        // "B"
    int k = 3;                       // "k"
    double r_excl = 20.0;            // "r_excl"
    int downsample_f = 8;            // "downsample_f"
    int m_thresh = 2;                // "m_thresh"
    double tolerance_px = 10.0;      // "tolerance_px"
    int mosaic_rows = 3;             // "M"
    int mosaic_cols = 4;             // "N"
    bool coarse_memory = false;      // "coarse_memory"
    int chip_w = 64;                 // "chip_w"
    int chip_h = 64;                 // "chip_h"

    void validate() const;
    PeakParams peak_params() const { return {levels, max_classes, alpha, tau}; }
};

void to_json(nlohmann::json& j, const PipelineConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});

struct ChainProducts {
    HsiPlanes hsi;
    std::array<PlaneSegmentation, 3> segmentation;  // H, S, I
    std::array<UncommonMap, 3> uncommon;
    InterestMap interest_raw;
    std::optional<std::vector<std::uint8_t>> mask;
    InterestMap interest_blur;
    std::vector<InterestPoint> points;
};

// rgb -> HSI -> per-plane segmentation + uncommon map -> sum -> mask -> blur -> peaks.
// The three planes are processed concurrently.
ChainProducts run_interest_chain(const RasterImage& rgb, const PipelineConfig& config,
                                 const std::vector<std::uint8_t>* mask = nullptr);

nlohmann::json points_to_json(const std::vector<InterestPoint>& points);
std::vector<InterestPoint> points_from_json(const nlohmann::json& j);

}  // namespace cyborg
