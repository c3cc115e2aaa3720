#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "cyborg/imaging.hpp"
#include "cyborg/interest.hpp"

namespace cyborg {

/// Human reference segmentation: a label raster (0 = background) and the labels in use.
struct GroundTruthMask {
    RasterImage labels;
    std::vector<int> region_labels;

    static GroundTruthMask from_labels(RasterImage labels);
};

GroundTruthMask load_ground_truth(const std::filesystem::path& png);

struct PointVerdict {
    InterestPoint point;
    bool hit = false;
    int region = 0;          // nearest region label within tolerance, 0 on a miss
    double distance = 0.0;   // to the nearest labelled pixel of any region
};

struct AgreementReport {
    double agreement_rate = 0.0;
    double false_positive_rate = 0.0;
    double false_negative_rate = 0.0;
    int regions_total = 0;
    int regions_hit = 0;
    std::vector<PointVerdict> points;
};

// A point hits a region when some pixel of it lies within tolerance_px (Euclidean,
// pixel centres). Agreement/FP are over points; FN is over regions.
AgreementReport evaluate_agreement(const std::vector<InterestPoint>& points, const GroundTruthMask& truth,
                                   double tolerance_px);

nlohmann::json to_json(const AgreementReport& report);

}  // namespace cyborg
